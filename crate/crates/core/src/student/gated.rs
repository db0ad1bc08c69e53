//! Students whose per-task skill can only grow once prerequisite tasks are
//! (mostly) learned.
//!
//! Skill `s_i` moves toward 1 at rate `learn_rate`, scaled by a gate built
//! from the prerequisites: `max(0, (s_p - threshold) / (1 - threshold))` per
//! prerequisite `p`, multiplied together. Tasks that are not trained in a
//! step decay by `forget_rate`. The observed score is the skill plus
//! Gaussian noise, clipped to `[0, 1]`; [`Student::eval_all`] reports the
//! noise-free skills.

use rand_distr::{Distribution, Normal};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::student::Student;
use crate::teacher::TaskId;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainStudentConfig {
    pub n_tasks: usize,
    pub learn_rate: f64,
    pub gate_threshold: f64,
    pub forget_rate: f64,
    pub noise_sigma: f64,
}

impl Default for ChainStudentConfig {
    fn default() -> Self {
        Self {
            n_tasks: 5,
            learn_rate: 0.08,
            gate_threshold: 0.7,
            forget_rate: DEFAULT_FORGET_RATE,
            noise_sigma: 0.01,
        }
    }
}

/// Per-step decay of untrained tasks used by both default configs.
pub const DEFAULT_FORGET_RATE: f64 = 2e-5;

/// An `side x side` grid of tasks; task `(i, j)` needs `(i - 1, j)` and
/// `(i, j - 1)`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Grid2dConfig {
    pub side: usize,
    pub learn_rate: f64,
    pub gate_threshold: f64,
    pub forget_rate: f64,
    pub noise_sigma: f64,
}

impl Default for Grid2dConfig {
    fn default() -> Self {
        Self {
            side: 4,
            learn_rate: 0.08,
            gate_threshold: 0.7,
            forget_rate: DEFAULT_FORGET_RATE,
            noise_sigma: 0.01,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Dynamics {
    learn_rate: f64,
    gate_threshold: f64,
    forget_rate: f64,
    noise_sigma: f64,
}

impl Dynamics {
    fn validate(&self) -> Result<()> {
        if !(self.learn_rate > 0.0 && self.learn_rate <= 1.0) {
            return Err(Error::config(format!(
                "learn_rate must be in (0, 1], got {}",
                self.learn_rate
            )));
        }
        if !(0.0..1.0).contains(&self.gate_threshold) {
            return Err(Error::config(format!(
                "gate_threshold must be in [0, 1), got {}",
                self.gate_threshold
            )));
        }
        if !(0.0..1.0).contains(&self.forget_rate) {
            return Err(Error::config(format!(
                "forget_rate must be in [0, 1), got {}",
                self.forget_rate
            )));
        }
        if !(self.noise_sigma >= 0.0 && self.noise_sigma.is_finite()) {
            return Err(Error::config(format!(
                "noise_sigma must be >= 0, got {}",
                self.noise_sigma
            )));
        }
        Ok(())
    }
}

/// Skill-chain and skill-grid student.
#[derive(Debug, Clone)]
pub struct GatedSkillStudent {
    dynamics: Dynamics,
    prerequisites: Vec<Vec<usize>>,
    skills: Vec<f64>,
    noise: Option<Normal<f64>>,
}

impl GatedSkillStudent {
    /// Task `i` requires task `i - 1`.
    pub fn chain(cfg: &ChainStudentConfig) -> Result<Self> {
        if cfg.n_tasks < 2 {
            return Err(Error::config(format!(
                "chain student needs >= 2 tasks, got {}",
                cfg.n_tasks
            )));
        }
        let prerequisites = (0..cfg.n_tasks)
            .map(|i| if i == 0 { vec![] } else { vec![i - 1] })
            .collect();
        Self::build(
            Dynamics {
                learn_rate: cfg.learn_rate,
                gate_threshold: cfg.gate_threshold,
                forget_rate: cfg.forget_rate,
                noise_sigma: cfg.noise_sigma,
            },
            prerequisites,
        )
    }

    /// Row-major `side x side` grid; `(i, j)` requires its upper and left
    /// neighbours.
    pub fn grid(cfg: &Grid2dConfig) -> Result<Self> {
        if cfg.side < 1 {
            return Err(Error::config("grid side must be >= 1"));
        }
        let side = cfg.side;
        let prerequisites = (0..side * side)
            .map(|flat| {
                let (i, j) = TaskId::new(flat).to_grid(side);
                let mut pre = Vec::with_capacity(2);
                if i > 0 {
                    pre.push(TaskId::from_grid(i - 1, j, side).index());
                }
                if j > 0 {
                    pre.push(TaskId::from_grid(i, j - 1, side).index());
                }
                pre
            })
            .collect();
        Self::build(
            Dynamics {
                learn_rate: cfg.learn_rate,
                gate_threshold: cfg.gate_threshold,
                forget_rate: cfg.forget_rate,
                noise_sigma: cfg.noise_sigma,
            },
            prerequisites,
        )
    }

    fn build(dynamics: Dynamics, prerequisites: Vec<Vec<usize>>) -> Result<Self> {
        dynamics.validate()?;
        let noise =
            (dynamics.noise_sigma > 0.0).then(|| Normal::new(0.0, dynamics.noise_sigma).expect("validated sigma"));
        Ok(Self {
            dynamics,
            skills: vec![0.0; prerequisites.len()],
            prerequisites,
            noise,
        })
    }

    pub fn skills(&self) -> &[f64] {
        &self.skills
    }

    /// Overwrite the latent skills (clipped to `[0, 1]`).
    pub fn set_skills(&mut self, skills: &[f64]) {
        assert_eq!(skills.len(), self.skills.len(), "skill vector length");
        for (s, &v) in self.skills.iter_mut().zip(skills) {
            *s = v.clamp(0.0, 1.0);
        }
    }

    /// Multiplicative gate of `task` under the current skills.
    pub fn gate(&self, task: usize) -> f64 {
        let gamma = self.dynamics.gate_threshold;
        self.prerequisites[task]
            .iter()
            .map(|&p| ((self.skills[p] - gamma) / (1.0 - gamma)).max(0.0))
            .product()
    }

    fn observe(&self, task: usize, rng: &mut SimRng) -> f64 {
        let noise = self.noise.map_or(0.0, |n| n.sample(rng));
        (self.skills[task] + noise).clamp(0.0, 1.0)
    }
}

impl Student for GatedSkillStudent {
    fn num_tasks(&self) -> usize {
        self.skills.len()
    }

    fn train_simple(&mut self, task: TaskId, rng: &mut SimRng) -> f64 {
        let i = task.index();
        let gain = self.dynamics.learn_rate * self.gate(i) * (1.0 - self.skills[i]);
        let keep = 1.0 - self.dynamics.forget_rate;
        for (j, s) in self.skills.iter_mut().enumerate() {
            if j == i {
                *s += gain;
            } else {
                *s *= keep;
            }
        }
        self.observe(i, rng)
    }

    /// Expected update of a batch drawn from `dist`: each task learns in
    /// proportion to its probability mass and forgets in proportion to the
    /// remaining mass.
    fn train_batch(&mut self, dist: &[f64], rng: &mut SimRng) -> Vec<f64> {
        assert_eq!(dist.len(), self.skills.len(), "distribution length");
        let gates: Vec<f64> = (0..self.skills.len()).map(|i| self.gate(i)).collect();
        let Dynamics {
            learn_rate,
            forget_rate,
            ..
        } = self.dynamics;
        for ((s, &p), g) in self.skills.iter_mut().zip(dist).zip(gates) {
            *s += p * learn_rate * g * (1.0 - *s);
            *s *= 1.0 - (1.0 - p) * forget_rate;
        }
        (0..self.skills.len()).map(|i| self.observe(i, rng)).collect()
    }

    fn eval_all(&self) -> Vec<f64> {
        self.skills.clone()
    }
}
