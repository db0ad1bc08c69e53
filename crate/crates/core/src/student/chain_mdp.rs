//! Combination-lock chains solved by tabular Q-learning.
//!
//! Task `k` is a chain of length `L_k`: from state `s` the `ADVANCE` action
//! moves to `s + 1`, while `RESET` throws the agent back to state 0 and ends
//! the attempt. Reaching state `L_k` pays `goal_reward`. All tasks share one
//! Q-table over states `0..=max(L)`, so skills learned on a short chain carry
//! over to the longer ones. An untrained agent picks uniformly between the
//! two tied actions and so reaches the end of chain `L` with probability
//! exactly `2^-L` per episode.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::rng::SimRng;
use crate::student::Student;
use crate::teacher::{sample_categorical, TaskId};

pub const RESET: usize = 0;
pub const ADVANCE: usize = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ChainMdpConfig {
    /// Strictly increasing chain length per task.
    pub chain_lengths: Vec<usize>,
    /// Step limit of every episode.
    pub episode_cap: usize,
    pub q_learn_rate: f64,
    pub explore_eps: f64,
    /// Cost charged on every step.
    pub step_penalty: f64,
    pub goal_reward: f64,
    /// Greedy evaluation episodes per task score.
    pub eval_episodes: usize,
    pub discount: f64,
}

impl Default for ChainMdpConfig {
    fn default() -> Self {
        Self::with_lengths(vec![2, 4, 8, 12, 16])
    }
}

impl ChainMdpConfig {
    /// Defaults around the given chain lengths, with an episode cap of twice
    /// the longest chain.
    pub fn with_lengths(chain_lengths: Vec<usize>) -> Self {
        let longest = chain_lengths.iter().copied().max().unwrap_or(0);
        Self {
            chain_lengths,
            episode_cap: 2 * longest,
            q_learn_rate: 0.5,
            explore_eps: 0.1,
            step_penalty: 0.0,
            goal_reward: 1.0,
            eval_episodes: 1,
            discount: 0.95,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.chain_lengths.is_empty() {
            return Err(Error::config("chain_lengths must not be empty"));
        }
        if self.chain_lengths[0] == 0 || self.chain_lengths.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::config(format!(
                "chain_lengths must be positive and strictly increasing, got {:?}",
                self.chain_lengths
            )));
        }
        if self.episode_cap == 0 {
            return Err(Error::config("episode_cap must be positive"));
        }
        if !(self.q_learn_rate > 0.0 && self.q_learn_rate <= 1.0) {
            return Err(Error::config(format!(
                "q_learn_rate must be in (0, 1], got {}",
                self.q_learn_rate
            )));
        }
        if !(0.0..=1.0).contains(&self.explore_eps) {
            return Err(Error::config(format!(
                "explore_eps must be in [0, 1], got {}",
                self.explore_eps
            )));
        }
        if !(0.0..=1.0).contains(&self.discount) {
            return Err(Error::config(format!(
                "discount must be in [0, 1], got {}",
                self.discount
            )));
        }
        if !(self.step_penalty.is_finite() && self.goal_reward.is_finite()) {
            return Err(Error::config("step_penalty and goal_reward must be finite"));
        }
        if self.eval_episodes == 0 {
            return Err(Error::config("eval_episodes must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone)]
pub struct ChainMdpStudent {
    cfg: ChainMdpConfig,
    /// `q[state][action]`.
    q: Vec<[f64; 2]>,
}

impl ChainMdpStudent {
    pub fn new(cfg: ChainMdpConfig) -> Result<Self> {
        cfg.validate()?;
        let states = cfg.chain_lengths.last().copied().unwrap_or(0) + 1;
        Ok(Self {
            q: vec![[0.0; 2]; states],
            cfg,
        })
    }

    pub fn config(&self) -> &ChainMdpConfig {
        &self.cfg
    }

    pub fn q_values(&self) -> &[[f64; 2]] {
        &self.q
    }

    /// Run one Q-learning episode on `task`; returns whether the goal was
    /// reached.
    pub fn run_episode(&mut self, task: TaskId, rng: &mut SimRng) -> bool {
        let length = self.cfg.chain_lengths[task.index()];
        let mut state = 0;
        for _ in 0..self.cfg.episode_cap {
            let action = if rng.random::<f64>() < self.cfg.explore_eps {
                rng.random_range(0..2)
            } else {
                let [reset, advance] = self.q[state];
                if reset == advance {
                    rng.random_range(0..2)
                } else if advance > reset {
                    ADVANCE
                } else {
                    RESET
                }
            };
            let next = if action == ADVANCE { state + 1 } else { 0 };
            let reached = next == length;
            let done = reached || action == RESET;
            let reward = if reached { self.cfg.goal_reward } else { 0.0 } - self.cfg.step_penalty;
            let bootstrap = if done {
                0.0
            } else {
                let [r, a] = self.q[next];
                self.cfg.discount * r.max(a)
            };
            let q = &mut self.q[state][action];
            *q += self.cfg.q_learn_rate * (reward + bootstrap - *q);
            if done {
                return reached;
            }
            state = next;
        }
        false
    }

    /// Whether the greedy policy (ties go to `RESET`) reaches the end of
    /// chain `task` within the episode cap.
    fn greedy_reaches_goal(&self, task: TaskId) -> bool {
        let length = self.cfg.chain_lengths[task.index()];
        let mut state = 0;
        for _ in 0..self.cfg.episode_cap {
            let [reset, advance] = self.q[state];
            if advance <= reset {
                return false;
            }
            state += 1;
            if state == length {
                return true;
            }
        }
        false
    }

    /// Fraction of greedy evaluation episodes that reach the goal.
    pub fn eval_task(&self, task: TaskId) -> f64 {
        // The environment and the greedy policy are deterministic, so every
        // evaluation episode has the same outcome.
        let successes = if self.greedy_reaches_goal(task) {
            self.cfg.eval_episodes
        } else {
            0
        };
        successes as f64 / self.cfg.eval_episodes as f64
    }
}

impl Student for ChainMdpStudent {
    fn num_tasks(&self) -> usize {
        self.cfg.chain_lengths.len()
    }

    fn train_simple(&mut self, task: TaskId, rng: &mut SimRng) -> f64 {
        self.run_episode(task, rng);
        self.eval_task(task)
    }

    /// One episode on a task drawn from `dist`.
    fn train_batch(&mut self, dist: &[f64], rng: &mut SimRng) -> Vec<f64> {
        let task = TaskId::new(sample_categorical(dist, rng));
        self.run_episode(task, rng);
        self.eval_all()
    }

    fn eval_all(&self) -> Vec<f64> {
        (0..self.num_tasks()).map(|k| self.eval_task(TaskId::new(k))).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{stream, Stream};

    #[test]
    fn fresh_table_fails_everywhere() {
        let s = ChainMdpStudent::new(ChainMdpConfig::default()).unwrap();
        assert_eq!(s.eval_all(), vec![0.0; 5]);
    }

    #[test]
    fn two_state_chain_is_learned() {
        let mut s = ChainMdpStudent::new(ChainMdpConfig::with_lengths(vec![2, 12])).unwrap();
        let mut rng = stream(0, Stream::Student);
        let mut score = 0.0;
        for _ in 0..200 {
            score = s.train_simple(TaskId::new(0), &mut rng);
        }
        assert_eq!(score, 1.0);
    }

    #[test]
    fn shared_table_transfers_to_longer_chains() {
        let mut s = ChainMdpStudent::new(ChainMdpConfig::with_lengths(vec![2, 4])).unwrap();
        let mut rng = stream(1, Stream::Student);
        for _ in 0..200 {
            s.train_simple(TaskId::new(0), &mut rng);
        }
        assert!(s.q_values()[0][ADVANCE] > s.q_values()[0][RESET]);
        for _ in 0..400 {
            s.train_simple(TaskId::new(1), &mut rng);
        }
        assert_eq!(s.eval_all(), vec![1.0, 1.0]);
    }

    #[test]
    fn untrained_success_rate_is_two_to_minus_length() {
        let mut rng = stream(3, Stream::Student);
        for (len, tol) in [(4usize, 0.008), (8, 0.0015)] {
            let trials = 20_000;
            let mut hits = 0;
            for _ in 0..trials {
                let mut s = ChainMdpStudent::new(ChainMdpConfig::with_lengths(vec![len])).unwrap();
                if s.run_episode(TaskId::new(0), &mut rng) {
                    hits += 1;
                }
            }
            let rate = hits as f64 / trials as f64;
            let expected = 0.5f64.powi(len as i32);
            assert!((rate - expected).abs() < tol, "len {len}: {rate} vs {expected}");
        }
    }

    #[test]
    fn eval_is_pure() {
        let mut s = ChainMdpStudent::new(ChainMdpConfig::default()).unwrap();
        let mut rng = stream(2, Stream::Student);
        for k in 0..50 {
            s.train_simple(TaskId::new(k % 2), &mut rng);
        }
        let before = s.q_values().to_vec();
        assert_eq!(s.eval_all(), s.eval_all());
        assert_eq!(before, s.q_values());
    }

    #[test]
    fn rejects_bad_configs() {
        let mut cfg = ChainMdpConfig::with_lengths(vec![3, 3]);
        assert!(ChainMdpStudent::new(cfg.clone()).is_err());
        cfg.chain_lengths = vec![];
        assert!(cfg.validate().is_err());
        let cfg = ChainMdpConfig {
            eval_episodes: 0,
            ..ChainMdpConfig::default()
        };
        assert!(cfg.validate().is_err());
        let cfg = ChainMdpConfig {
            explore_eps: 2.0,
            ..ChainMdpConfig::default()
        };
        assert!(cfg.validate().is_err());
    }
}
