//! Teachers: non-stationary bandits whose reward is a task's learning progress.
//!
//! A [`Teacher`] is a small state machine driven by two calls per step:
//! [`Teacher::next`] produces a [`TeacherAction`] (one task in the simple
//! formulation, a distribution over tasks in the batch formulation) and
//! [`Teacher::observe`] feeds back the resulting scores.
//!
//! | algorithm  | progress signal                                   |
//! |------------|---------------------------------------------------|
//! | `Online`   | score change since the task was last observed      |
//! | `Naive`    | OLS slope over `K` consecutive repetitions         |
//! | `Window`   | OLS slope over the last `K` (timestep, score) pairs|
//! | `Sampling` | a reward drawn from the last `K` score changes     |

mod buffers;
mod policy;
mod qtable;
mod slope;

use std::fmt;

use rand::Rng;
use serde::{Deserialize, Serialize};

pub use buffers::{RewardBuffer, ScoreWindow};
pub use policy::{
    argmax_uniform, boltzmann_probs, boltzmann_select, eps_greedy_distribution, eps_greedy_select, mix_one_hot,
    preference, sample_categorical,
};
pub use qtable::QTable;
pub use slope::{ols_slope, slope_or_zero, NoSlope};

use crate::error::{Error, Result};

/// Index of a task in `[0, N)`. Two-dimensional task spaces are flattened
/// row-major.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct TaskId(usize);

impl TaskId {
    pub const fn new(index: usize) -> Self {
        Self(index)
    }

    pub const fn index(self) -> usize {
        self.0
    }

    /// Flatten `(row, col)` of a grid with `cols` columns.
    pub const fn from_grid(row: usize, col: usize, cols: usize) -> Self {
        Self(row * cols + col)
    }

    /// Inverse of [`TaskId::from_grid`].
    pub const fn to_grid(self, cols: usize) -> (usize, usize) {
        (self.0 / cols, self.0 % cols)
    }
}

impl fmt::Display for TaskId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Online,
    Naive,
    Window,
    Sampling,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Formulation {
    /// One task per step; only that task's score is observed.
    Simple,
    /// A distribution over tasks per step; every task's score is observed.
    Batch,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PolicyKind {
    EpsGreedy,
    Boltzmann,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TeacherConfig {
    pub algorithm: Algorithm,
    pub formulation: Formulation,
    /// Ignored by `Sampling`.
    pub policy: PolicyKind,
    /// EWMA learning rate of the Q-table.
    pub alpha: f64,
    /// Exploration rate; `Sampling` uses it only in the batch formulation.
    pub epsilon: f64,
    /// Boltzmann temperature.
    pub tau: f64,
    /// Window / buffer length, and the repeat count of `Naive`.
    pub window_k: usize,
    /// Select on `|Q|` instead of `Q`.
    pub use_abs: bool,
}

impl Default for TeacherConfig {
    fn default() -> Self {
        Self {
            algorithm: Algorithm::Window,
            formulation: Formulation::Simple,
            policy: PolicyKind::EpsGreedy,
            alpha: 0.1,
            epsilon: 0.1,
            tau: 0.0004,
            window_k: 10,
            use_abs: true,
        }
    }
}

impl TeacherConfig {
    pub fn new(algorithm: Algorithm, formulation: Formulation) -> Self {
        Self {
            algorithm,
            formulation,
            ..Self::default()
        }
    }

    pub fn with_policy(mut self, policy: PolicyKind) -> Self {
        self.policy = policy;
        self
    }

    pub fn with_abs(mut self, use_abs: bool) -> Self {
        self.use_abs = use_abs;
        self
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha <= 1.0) {
            return Err(Error::config(format!("alpha must be in (0, 1], got {}", self.alpha)));
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return Err(Error::config(format!(
                "epsilon must be in [0, 1], got {}",
                self.epsilon
            )));
        }
        if !(self.tau > 0.0 && self.tau.is_finite()) {
            return Err(Error::config(format!("tau must be positive, got {}", self.tau)));
        }
        if self.window_k < 2 {
            return Err(Error::config(format!("window_k must be >= 2, got {}", self.window_k)));
        }
        Ok(())
    }
}

/// What the teacher asks the student to train on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TeacherAction {
    SingleTask(TaskId),
    /// Nonnegative, sums to one.
    TaskDistribution(Vec<f64>),
}

impl TeacherAction {
    pub fn formulation(&self) -> Formulation {
        match self {
            TeacherAction::SingleTask(_) => Formulation::Simple,
            TeacherAction::TaskDistribution(_) => Formulation::Batch,
        }
    }
}

/// What the student reports back.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum TeacherObservation {
    SingleScore { task: TaskId, score: f64 },
    ScoreVector(Vec<f64>),
}

/// Scores collected during one Naive round: the committed action is
/// returned `window_k` times and each repetition's scores are kept.
#[derive(Debug, Clone)]
struct NaiveRound {
    action: TeacherAction,
    issued: usize,
    /// Per task, the scores seen during the round.
    scores: Vec<Vec<f64>>,
}

/// One teacher session over `N` tasks.
#[derive(Debug, Clone)]
pub struct Teacher {
    cfg: TeacherConfig,
    q: QTable,
    /// Simple: last observed score per task (0 before the first one).
    /// Batch: the previous observation vector (zeros before the first).
    last_scores: Vec<f64>,
    window: Option<ScoreWindow>,
    rewards: Option<RewardBuffer>,
    naive: Option<NaiveRound>,
    pending: Option<TeacherAction>,
    last_t: Option<u64>,
    last_signal: Vec<f64>,
}

impl Teacher {
    pub fn new(cfg: TeacherConfig, n_tasks: usize) -> Result<Self> {
        cfg.validate()?;
        if n_tasks == 0 {
            return Err(Error::config("a teacher needs at least one task"));
        }
        let window = (cfg.algorithm == Algorithm::Window).then(|| ScoreWindow::new(n_tasks, cfg.window_k));
        let rewards = (cfg.algorithm == Algorithm::Sampling).then(|| RewardBuffer::new(n_tasks, cfg.window_k));
        Ok(Self {
            q: QTable::new(n_tasks, cfg.alpha)?,
            cfg,
            last_scores: vec![0.0; n_tasks],
            window,
            rewards,
            naive: None,
            pending: None,
            last_t: None,
            last_signal: vec![0.0; n_tasks],
        })
    }

    pub fn config(&self) -> &TeacherConfig {
        &self.cfg
    }

    pub fn num_tasks(&self) -> usize {
        self.q.len()
    }

    pub fn q_table(&self) -> &QTable {
        &self.q
    }

    /// Overwrite the Q-table, e.g. to warm-start a teacher.
    pub fn set_q(&mut self, values: &[f64]) -> Result<()> {
        if values.len() != self.num_tasks() {
            return Err(Error::domain(format!(
                "expected {} Q values, got {}",
                self.num_tasks(),
                values.len()
            )));
        }
        self.q = QTable::from_values(values.to_vec(), self.cfg.alpha)?;
        Ok(())
    }

    /// The teacher's belief state: Q for bandit teachers, the mean of each
    /// reward buffer for `Sampling`.
    pub fn q_snapshot(&self) -> Vec<f64> {
        match &self.rewards {
            Some(buf) => buf.means(),
            None => self.q.values().to_vec(),
        }
    }

    /// Progress signal fed to the Q-table (or reward buffer) by the most
    /// recent update, per task.
    pub fn last_signal(&self) -> &[f64] {
        &self.last_signal
    }

    /// Next action. Must be followed by exactly one [`Teacher::observe`].
    pub fn next<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<TeacherAction> {
        if self.pending.is_some() {
            return Err(Error::usage("next() called twice without an observation"));
        }
        let action = match self.naive.as_mut() {
            Some(round) if round.issued < self.cfg.window_k => {
                round.issued += 1;
                round.action.clone()
            }
            _ => {
                let action = self.choose(rng)?;
                if self.cfg.algorithm == Algorithm::Naive {
                    self.naive = Some(NaiveRound {
                        action: action.clone(),
                        issued: 1,
                        scores: vec![Vec::with_capacity(self.cfg.window_k); self.num_tasks()],
                    });
                }
                action
            }
        };
        self.pending = Some(action.clone());
        Ok(action)
    }

    /// [`Teacher::next`] for the simple formulation.
    pub fn next_task<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<TaskId> {
        self.require(Formulation::Simple)?;
        match self.next(rng)? {
            TeacherAction::SingleTask(task) => Ok(task),
            TeacherAction::TaskDistribution(_) => unreachable!("simple teachers emit single tasks"),
        }
    }

    /// [`Teacher::next`] for the batch formulation.
    pub fn next_distribution<R: Rng + ?Sized>(&mut self, rng: &mut R) -> Result<Vec<f64>> {
        self.require(Formulation::Batch)?;
        match self.next(rng)? {
            TeacherAction::TaskDistribution(p) => Ok(p),
            TeacherAction::SingleTask(_) => unreachable!("batch teachers emit distributions"),
        }
    }

    fn require(&self, formulation: Formulation) -> Result<()> {
        if self.cfg.formulation == formulation {
            Ok(())
        } else {
            Err(Error::usage(format!(
                "teacher is configured for the {:?} formulation, not {formulation:?}",
                self.cfg.formulation
            )))
        }
    }

    fn choose<R: Rng + ?Sized>(&self, rng: &mut R) -> Result<TeacherAction> {
        let n = self.num_tasks();
        if let Some(buf) = &self.rewards {
            let sampled: Vec<f64> = (0..n).map(|a| buf.sample(TaskId::new(a), rng).abs()).collect();
            let best = argmax_uniform(&sampled, rng)?;
            return Ok(match self.cfg.formulation {
                Formulation::Simple => TeacherAction::SingleTask(TaskId::new(best)),
                Formulation::Batch => TeacherAction::TaskDistribution(mix_one_hot(n, best, self.cfg.epsilon)),
            });
        }

        let pref = preference(self.q.values(), self.cfg.use_abs);
        Ok(match (self.cfg.formulation, self.cfg.policy) {
            (Formulation::Simple, PolicyKind::EpsGreedy) => {
                TeacherAction::SingleTask(eps_greedy_select(&pref, self.cfg.epsilon, rng)?)
            }
            (Formulation::Simple, PolicyKind::Boltzmann) => {
                TeacherAction::SingleTask(boltzmann_select(&pref, self.cfg.tau, rng)?)
            }
            (Formulation::Batch, PolicyKind::EpsGreedy) => {
                TeacherAction::TaskDistribution(eps_greedy_distribution(&pref, self.cfg.epsilon, rng)?)
            }
            (Formulation::Batch, PolicyKind::Boltzmann) => {
                TeacherAction::TaskDistribution(boltzmann_probs(&pref, self.cfg.tau)?)
            }
        })
    }

    /// Feed back the scores produced by `action` at timestep `t`.
    pub fn observe(&mut self, action: &TeacherAction, obs: &TeacherObservation, t: u64) -> Result<()> {
        let Some(pending) = self.pending.as_ref() else {
            return Err(Error::usage("observation without a preceding next()"));
        };
        if pending != action {
            return Err(Error::usage("observation does not belong to the last issued action"));
        }
        if let Some(last) = self.last_t {
            if t <= last {
                return Err(Error::usage(format!("timestep {t} not after {last}")));
            }
        }
        match (action, obs) {
            (TeacherAction::SingleTask(asked), TeacherObservation::SingleScore { task, score }) => {
                if asked != task {
                    return Err(Error::usage(format!(
                        "score for task {task}, but task {asked} was requested"
                    )));
                }
                check_score(*score)?;
                self.observe_simple(*task, *score, t)?;
            }
            (TeacherAction::TaskDistribution(_), TeacherObservation::ScoreVector(scores)) => {
                if scores.len() != self.num_tasks() {
                    return Err(Error::usage(format!(
                        "expected {} scores, got {}",
                        self.num_tasks(),
                        scores.len()
                    )));
                }
                scores.iter().try_for_each(|s| check_score(*s))?;
                self.observe_batch(scores, t)?;
            }
            _ => return Err(Error::usage("observation shape does not match the formulation")),
        }
        self.pending = None;
        self.last_t = Some(t);
        Ok(())
    }

    fn observe_simple(&mut self, task: TaskId, score: f64, t: u64) -> Result<()> {
        let a = task.index();
        let change = score - self.last_scores[a];
        self.last_scores[a] = score;
        self.last_signal.iter_mut().for_each(|v| *v = 0.0);
        match self.cfg.algorithm {
            Algorithm::Online => {
                self.last_signal[a] = change;
                self.q.update(task, change)?;
            }
            Algorithm::Naive => {
                let round = self.naive.as_mut().expect("naive round open");
                round.scores[a].push(score);
                if round.scores[a].len() == self.cfg.window_k {
                    let slope = repetition_slope(&round.scores[a]);
                    self.naive = None;
                    self.last_signal[a] = slope;
                    self.q.update(task, slope)?;
                }
            }
            Algorithm::Window => {
                let window = self.window.as_mut().expect("window teacher has a window");
                window.push(task, t, score)?;
                let slope = slope_or_zero(window.points(task));
                self.last_signal[a] = slope;
                self.q.update(task, slope)?;
            }
            Algorithm::Sampling => {
                self.last_signal[a] = change;
                self.rewards
                    .as_mut()
                    .expect("sampling teacher has buffers")
                    .push(task, change);
            }
        }
        Ok(())
    }

    fn observe_batch(&mut self, scores: &[f64], t: u64) -> Result<()> {
        let changes: Vec<f64> = scores
            .iter()
            .zip(&self.last_scores)
            .map(|(now, before)| now - before)
            .collect();
        self.last_scores.copy_from_slice(scores);
        match self.cfg.algorithm {
            Algorithm::Online => {
                self.q.update_all(&changes)?;
                self.last_signal = changes;
            }
            Algorithm::Naive => {
                let round = self.naive.as_mut().expect("naive round open");
                for (buf, &s) in round.scores.iter_mut().zip(scores) {
                    buf.push(s);
                }
                if round.scores[0].len() == self.cfg.window_k {
                    let slopes: Vec<f64> = round.scores.iter().map(|d| repetition_slope(d)).collect();
                    self.naive = None;
                    self.q.update_all(&slopes)?;
                    self.last_signal = slopes;
                }
            }
            Algorithm::Window => {
                let window = self.window.as_mut().expect("window teacher has a window");
                let mut slopes = Vec::with_capacity(scores.len());
                for (a, &s) in scores.iter().enumerate() {
                    let task = TaskId::new(a);
                    window.push(task, t, s)?;
                    slopes.push(slope_or_zero(window.points(task)));
                }
                self.q.update_all(&slopes)?;
                self.last_signal = slopes;
            }
            Algorithm::Sampling => {
                let buf = self.rewards.as_mut().expect("sampling teacher has buffers");
                for (a, &r) in changes.iter().enumerate() {
                    buf.push(TaskId::new(a), r);
                }
                self.last_signal = changes;
            }
        }
        Ok(())
    }
}

fn check_score(score: f64) -> Result<()> {
    if score.is_finite() {
        Ok(())
    } else {
        Err(Error::domain(format!("score must be finite, got {score}")))
    }
}

/// Slope of scores against their repetition index `1..=K`.
fn repetition_slope(scores: &[f64]) -> f64 {
    slope_or_zero(scores.iter().enumerate().map(|(k, &y)| ((k + 1) as f64, y)))
}
