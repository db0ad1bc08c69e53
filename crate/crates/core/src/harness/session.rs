//! One teacher-student session.

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::harness::config::{Baseline, ExperimentConfig, StudentConfig, TeacherChoice};
use crate::rng::{stream, SimRng, Stream};
use crate::student::{ChainMdpStudent, GatedSkillStudent, Student};
use crate::teacher::{Formulation, TaskId, Teacher, TeacherAction, TeacherObservation};

/// Anything that decides what the student trains on: an adaptive
/// [`Teacher`] or one of the fixed baselines.
#[derive(Debug, Clone)]
pub enum Scheduler {
    Adaptive(Box<Teacher>),
    Fixed {
        baseline: Baseline,
        formulation: Formulation,
        n_tasks: usize,
        step: u64,
    },
}

impl Scheduler {
    pub fn new(choice: &TeacherChoice, n_tasks: usize) -> Result<Self> {
        Ok(match choice {
            TeacherChoice::Adaptive(cfg) => Scheduler::Adaptive(Box::new(Teacher::new(cfg.clone(), n_tasks)?)),
            TeacherChoice::Baseline(baseline, formulation) => {
                if n_tasks == 0 {
                    return Err(Error::config("a scheduler needs at least one task"));
                }
                Scheduler::Fixed {
                    baseline: baseline.clone(),
                    formulation: *formulation,
                    n_tasks,
                    step: 0,
                }
            }
        })
    }

    pub fn formulation(&self) -> Formulation {
        match self {
            Scheduler::Adaptive(t) => t.config().formulation,
            Scheduler::Fixed { formulation, .. } => *formulation,
        }
    }

    pub fn num_tasks(&self) -> usize {
        match self {
            Scheduler::Adaptive(t) => t.num_tasks(),
            Scheduler::Fixed { n_tasks, .. } => *n_tasks,
        }
    }

    pub fn next(&mut self, rng: &mut SimRng) -> Result<TeacherAction> {
        let (baseline, formulation, n, step) = match self {
            Scheduler::Adaptive(t) => return t.next(rng),
            Scheduler::Fixed {
                baseline,
                formulation,
                n_tasks,
                step,
            } => (baseline, *formulation, *n_tasks, step),
        };
        let scheduled = match baseline {
            Baseline::Uniform => None,
            Baseline::FinalTaskOnly => Some(TaskId::new(n - 1)),
            Baseline::Manual(blocks) => {
                let mut offset = *step;
                blocks.iter().find_map(|&(task, len)| {
                    if offset < len {
                        Some(task)
                    } else {
                        offset -= len;
                        None
                    }
                })
            }
        };
        *step += 1;
        Ok(match (formulation, scheduled) {
            (Formulation::Simple, Some(task)) => TeacherAction::SingleTask(task),
            (Formulation::Simple, None) => TeacherAction::SingleTask(TaskId::new(rng.random_range(0..n))),
            (Formulation::Batch, Some(task)) => {
                let mut p = vec![0.0; n];
                p[task.index()] = 1.0;
                TeacherAction::TaskDistribution(p)
            }
            (Formulation::Batch, None) => TeacherAction::TaskDistribution(vec![1.0 / n as f64; n]),
        })
    }

    pub fn observe(&mut self, action: &TeacherAction, obs: &TeacherObservation, t: u64) -> Result<()> {
        match self {
            Scheduler::Adaptive(teacher) => teacher.observe(action, obs, t),
            Scheduler::Fixed { .. } => Ok(()),
        }
    }

    /// Teacher belief state for the trace; zeros for baselines.
    pub fn q_snapshot(&self) -> Vec<f64> {
        match self {
            Scheduler::Adaptive(t) => t.q_snapshot(),
            Scheduler::Fixed { n_tasks, .. } => vec![0.0; *n_tasks],
        }
    }
}

/// One row of a [`RunTrace`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub t: u64,
    pub action: TeacherAction,
    /// Teacher reward: the change in the observed score of the trained task
    /// (simple), or the summed change over all tasks (batch).
    pub reward: f64,
    /// Simple: last observed score of every task (0 if never trained).
    /// Batch: the observed score vector.
    pub scores: Vec<f64>,
    pub q: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunTrace {
    pub label: String,
    pub seed: u64,
    pub formulation: Formulation,
    pub max_steps: u64,
    pub steps: Vec<StepRecord>,
    /// First step at which every eval score reached the mastery threshold.
    pub steps_to_mastery: Option<u64>,
    /// Eval scores when the session ended.
    pub final_scores: Vec<f64>,
    pub teacher_return: f64,
}

/// Compact per-run result, written as `summary_<seed>.json`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunSummary {
    pub label: String,
    pub seed: u64,
    pub steps: u64,
    pub max_steps: u64,
    pub steps_to_mastery: Option<u64>,
    pub final_scores: Vec<f64>,
    pub teacher_return: f64,
}

impl RunTrace {
    pub fn num_tasks(&self) -> usize {
        self.final_scores.len()
    }

    pub fn summary(&self) -> RunSummary {
        RunSummary {
            label: self.label.clone(),
            seed: self.seed,
            steps: self.steps.len() as u64,
            max_steps: self.max_steps,
            steps_to_mastery: self.steps_to_mastery,
            final_scores: self.final_scores.clone(),
            teacher_return: self.teacher_return,
        }
    }

    /// Task trained at each step (simple formulation only).
    pub fn chosen_tasks(&self) -> impl Iterator<Item = TaskId> + '_ {
        self.steps.iter().filter_map(|s| match s.action {
            TeacherAction::SingleTask(task) => Some(task),
            TeacherAction::TaskDistribution(_) => None,
        })
    }
}

impl RunSummary {
    pub fn final_min(&self) -> f64 {
        self.final_scores.iter().copied().fold(f64::INFINITY, f64::min)
    }
}

pub fn build_student(cfg: &StudentConfig) -> Result<Box<dyn Student + Send>> {
    Ok(match cfg {
        StudentConfig::Chain(c) => Box::new(GatedSkillStudent::chain(c)?),
        StudentConfig::Grid2d(c) => Box::new(GatedSkillStudent::grid(c)?),
        StudentConfig::ChainMdp(c) => Box::new(ChainMdpStudent::new(c.clone())?),
    })
}

/// Run the session described by `cfg` with one seed.
pub fn run_session(cfg: &ExperimentConfig, seed: u64) -> Result<RunTrace> {
    cfg.validate()?;
    let mut student = build_student(&cfg.student)?;
    let mut scheduler = Scheduler::new(&cfg.teacher, cfg.student.num_tasks())?;
    run_with(
        &cfg.label,
        &mut student,
        &mut scheduler,
        cfg.max_steps,
        cfg.mastery_threshold,
        seed,
    )
}

/// Drive an arbitrary student with an arbitrary scheduler.
///
/// The loop stops at the first step where every task's eval score is at
/// least `threshold`, or after `max_steps`. In the simple formulation the
/// mastery evaluation is never shown to the teacher.
pub fn run_with<S: Student + ?Sized>(
    label: &str,
    student: &mut S,
    scheduler: &mut Scheduler,
    max_steps: u64,
    threshold: f64,
    seed: u64,
) -> Result<RunTrace> {
    let n = student.num_tasks();
    if scheduler.num_tasks() != n {
        return Err(Error::config(format!(
            "scheduler has {} tasks, student has {n}",
            scheduler.num_tasks()
        )));
    }
    let mut teacher_rng = stream(seed, Stream::Teacher);
    let mut student_rng = stream(seed, Stream::Student);
    let formulation = scheduler.formulation();

    let mut last = vec![0.0; n];
    let mut steps = Vec::with_capacity(max_steps.min(1 << 16) as usize);
    let mut steps_to_mastery = None;
    let mut final_scores = student.eval_all();
    let mut teacher_return = 0.0;

    for t in 1..=max_steps {
        let action = scheduler.next(&mut teacher_rng)?;
        let (obs, reward) = match &action {
            TeacherAction::SingleTask(task) => {
                let score = student.train_simple(*task, &mut student_rng);
                let reward = score - last[task.index()];
                last[task.index()] = score;
                (TeacherObservation::SingleScore { task: *task, score }, reward)
            }
            TeacherAction::TaskDistribution(p) => {
                let scores = student.train_batch(p, &mut student_rng);
                let reward = scores.iter().zip(&last).map(|(now, before)| now - before).sum();
                last.copy_from_slice(&scores);
                (TeacherObservation::ScoreVector(scores), reward)
            }
        };
        scheduler.observe(&action, &obs, t)?;
        teacher_return += reward;
        steps.push(StepRecord {
            t,
            action,
            reward,
            scores: last.clone(),
            q: scheduler.q_snapshot(),
        });

        final_scores = student.eval_all();
        if final_scores.iter().all(|&s| s >= threshold) {
            steps_to_mastery = Some(t);
            break;
        }
    }

    Ok(RunTrace {
        label: label.to_string(),
        seed,
        formulation,
        max_steps,
        steps,
        steps_to_mastery,
        final_scores,
        teacher_return,
    })
}
