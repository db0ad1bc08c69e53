//! Per-task FIFO histories for the Window and Sampling teachers.

use std::collections::VecDeque;

use rand::Rng;

use crate::error::{Error, Result};
use crate::teacher::TaskId;

/// Last `capacity` `(timestep, score)` pairs of every task.
#[derive(Debug, Clone, PartialEq)]
pub struct ScoreWindow {
    capacity: usize,
    entries: Vec<VecDeque<(u64, f64)>>,
}

impl ScoreWindow {
    pub fn new(n_tasks: usize, capacity: usize) -> Self {
        assert!(capacity > 0, "window capacity must be positive");
        Self {
            capacity,
            entries: vec![VecDeque::with_capacity(capacity); n_tasks],
        }
    }

    pub fn capacity(&self) -> usize {
        self.capacity
    }

    /// Push a score, evicting the oldest once the window is full. Timesteps
    /// must increase strictly within a task.
    pub fn push(&mut self, task: TaskId, t: u64, score: f64) -> Result<()> {
        let buf = &mut self.entries[task.index()];
        if let Some(&(last, _)) = buf.back() {
            if t <= last {
                return Err(Error::usage(format!("timestep {t} not after {last} for task {task}")));
            }
        }
        if buf.len() == self.capacity {
            buf.pop_front();
        }
        buf.push_back((t, score));
        Ok(())
    }

    pub fn get(&self, task: TaskId) -> &VecDeque<(u64, f64)> {
        &self.entries[task.index()]
    }

    /// The window of `task` as regression points.
    pub fn points(&self, task: TaskId) -> impl Iterator<Item = (f64, f64)> + Clone + '_ {
        self.entries[task.index()].iter().map(|&(t, y)| (t as f64, y))
    }
}

/// Last `capacity` rewards of every task.
#[derive(Debug, Clone, PartialEq)]
pub struct RewardBuffer {
    capacity: usize,
    entries: Vec<VecDeque<f64>>,
}

impl RewardBuffer {
    pub fn new(n_tasks: usize, capacity: usize) -> Self {
        assert!(capacity > 0, "buffer capacity must be positive");
        Self {
            capacity,
            entries: vec![VecDeque::with_capacity(capacity); n_tasks],
        }
    }

    pub fn push(&mut self, task: TaskId, reward: f64) {
        let buf = &mut self.entries[task.index()];
        if buf.len() == self.capacity {
            buf.pop_front();
        }
        buf.push_back(reward);
    }

    pub fn get(&self, task: TaskId) -> &VecDeque<f64> {
        &self.entries[task.index()]
    }

    /// One reward drawn uniformly from the task's buffer; 1.0 when empty so
    /// untried tasks look attractive.
    pub fn sample<R: Rng + ?Sized>(&self, task: TaskId, rng: &mut R) -> f64 {
        let buf = &self.entries[task.index()];
        if buf.is_empty() {
            1.0
        } else {
            buf[rng.random_range(0..buf.len())]
        }
    }

    /// Mean of each buffer (0 for empty ones).
    pub fn means(&self) -> Vec<f64> {
        self.entries
            .iter()
            .map(|b| {
                if b.is_empty() {
                    0.0
                } else {
                    b.iter().sum::<f64>() / b.len() as f64
                }
            })
            .collect()
    }
}
