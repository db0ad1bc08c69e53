use crate::error::{Error, Result};
use crate::teacher::TaskId;

/// Per-task expected return, tracked as an exponentially weighted moving
/// average of the rewards observed for that task.
#[derive(Debug, Clone, PartialEq)]
pub struct QTable {
    q: Vec<f64>,
    alpha: f64,
}

impl QTable {
    pub fn new(n_tasks: usize, alpha: f64) -> Result<Self> {
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(Error::domain(format!("alpha must be in (0, 1], got {alpha}")));
        }
        Ok(Self {
            q: vec![0.0; n_tasks],
            alpha,
        })
    }

    /// Build a table from explicit values.
    pub fn from_values(q: Vec<f64>, alpha: f64) -> Result<Self> {
        if let Some(v) = q.iter().find(|v| !v.is_finite()) {
            return Err(Error::domain(format!("Q values must be finite, got {v}")));
        }
        let mut table = Self::new(0, alpha)?;
        table.q = q;
        Ok(table)
    }

    pub fn len(&self) -> usize {
        self.q.len()
    }

    pub fn is_empty(&self) -> bool {
        self.q.is_empty()
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn values(&self) -> &[f64] {
        &self.q
    }

    pub fn get(&self, task: TaskId) -> f64 {
        self.q[task.index()]
    }

    /// `Q(task) <- alpha * reward + (1 - alpha) * Q(task)`.
    pub fn update(&mut self, task: TaskId, reward: f64) -> Result<()> {
        let slot = self
            .q
            .get_mut(task.index())
            .ok_or_else(|| Error::domain(format!("task {task} out of range")))?;
        if !reward.is_finite() {
            return Err(Error::domain(format!("reward must be finite, got {reward}")));
        }
        *slot = self.alpha * reward + (1.0 - self.alpha) * *slot;
        Ok(())
    }

    /// Componentwise update with one reward per task.
    pub fn update_all(&mut self, rewards: &[f64]) -> Result<()> {
        if rewards.len() != self.q.len() {
            return Err(Error::domain(format!(
                "expected {} rewards, got {}",
                self.q.len(),
                rewards.len()
            )));
        }
        if let Some(r) = rewards.iter().find(|r| !r.is_finite()) {
            return Err(Error::domain(format!("reward must be finite, got {r}")));
        }
        for (q, r) in self.q.iter_mut().zip(rewards) {
            *q = self.alpha * r + (1.0 - self.alpha) * *q;
        }
        Ok(())
    }
}
