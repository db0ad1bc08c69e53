//! Simulated students.
//!
//! A student is opaque to the teacher: it trains on whatever it is given
//! and reports scores in `[0, 1]`.

mod chain_mdp;
mod gated;

pub use chain_mdp::{ChainMdpConfig, ChainMdpStudent, ADVANCE, RESET};
pub use gated::{ChainStudentConfig, GatedSkillStudent, Grid2dConfig};

use crate::rng::SimRng;
use crate::teacher::TaskId;

pub trait Student {
    fn num_tasks(&self) -> usize;

    /// Train one step on `task` and return that task's observed score.
    fn train_simple(&mut self, task: TaskId, rng: &mut SimRng) -> f64;

    /// Train one batch drawn from `dist` and return the validation score of
    /// every task.
    fn train_batch(&mut self, dist: &[f64], rng: &mut SimRng) -> Vec<f64>;

    /// Current score of every task. Must not change the student.
    fn eval_all(&self) -> Vec<f64>;
}

impl<S: Student + ?Sized> Student for Box<S> {
    fn num_tasks(&self) -> usize {
        (**self).num_tasks()
    }

    fn train_simple(&mut self, task: TaskId, rng: &mut SimRng) -> f64 {
        (**self).train_simple(task, rng)
    }

    fn train_batch(&mut self, dist: &[f64], rng: &mut SimRng) -> Vec<f64> {
        (**self).train_batch(dist, rng)
    }

    fn eval_all(&self) -> Vec<f64> {
        (**self).eval_all()
    }
}
