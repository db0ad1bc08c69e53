//! Teacher-Student curriculum learning.
//!
//! A *Teacher* picks which subtask a *Student* trains on next, using the
//! slope of each task's learning curve as a non-stationary bandit reward.
//! Tasks where the Student is improving (or forgetting, when selecting by
//! absolute value) get practiced more.
//!
//! The crate is split in three parts:
//!
//! - [`teacher`]: Q-table, selection policies, slope estimation and the
//!   Online / Naive / Window / Sampling teachers in both the simple
//!   (one task per step) and batch (distribution per step) formulation.
//! - [`student`]: the [`Student`](student::Student) interface and three
//!   simulated students (gated skill chain, 2-D skill grid, chain MDP
//!   solved by tabular Q-learning).
//! - [`harness`]: seeded sessions, baselines, metrics, config files and
//!   CSV/JSON output, used by the `tscl` binary.
//!
//! ```
//! use tscl::harness::{run_session, ExperimentConfig};
//!
//! let cfg: ExperimentConfig = "
//!     student.kind = chain
//!     teacher.algorithm = window
//!     max_steps = 3000
//! ".parse().unwrap();
//! let trace = run_session(&cfg, 7).unwrap();
//! assert!(trace.steps_to_mastery.is_some());
//! ```

pub mod error;
pub mod harness;
pub mod rng;
pub mod student;
pub mod teacher;

pub use error::{Error, Result};
pub use teacher::{TaskId, Teacher, TeacherAction, TeacherConfig, TeacherObservation};
