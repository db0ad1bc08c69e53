//! Experiment configuration.
//!
//! Config files are flat `key = value` text, one entry per line, with
//! dotted keys and `#` comments:
//!
//! ```text
//! label = window-chain
//! student.kind = chain
//! student.forget_rate = 0.005
//! teacher.algorithm = window
//! teacher.formulation = simple
//! max_steps = 20000
//! seeds = 0..20
//! ```
//!
//! Unknown keys and keys that do not belong to the selected student kind
//! are rejected. [`ExperimentConfig`]'s `Display` writes the canonical form,
//! which parses back to the same config.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::Range;
use std::path::Path;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::student::{ChainMdpConfig, ChainStudentConfig, Grid2dConfig};
use crate::teacher::{Algorithm, Formulation, PolicyKind, TaskId, TeacherConfig};

#[derive(Debug, Clone, PartialEq)]
pub enum StudentConfig {
    Chain(ChainStudentConfig),
    Grid2d(Grid2dConfig),
    ChainMdp(ChainMdpConfig),
}

impl StudentConfig {
    pub fn num_tasks(&self) -> usize {
        match self {
            StudentConfig::Chain(c) => c.n_tasks,
            StudentConfig::Grid2d(c) => c.side * c.side,
            StudentConfig::ChainMdp(c) => c.chain_lengths.len(),
        }
    }
}

/// Non-adaptive schedules used as reference points.
#[derive(Debug, Clone, PartialEq)]
pub enum Baseline {
    Uniform,
    /// Train each `(task, steps)` block in order, then sample uniformly.
    Manual(Vec<(TaskId, u64)>),
    /// Always the last task.
    FinalTaskOnly,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TeacherChoice {
    Adaptive(TeacherConfig),
    Baseline(Baseline, Formulation),
}

impl TeacherChoice {
    pub fn formulation(&self) -> Formulation {
        match self {
            TeacherChoice::Adaptive(cfg) => cfg.formulation,
            TeacherChoice::Baseline(_, f) => *f,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub label: String,
    pub student: StudentConfig,
    pub teacher: TeacherChoice,
    pub max_steps: u64,
    /// Every task must reach this eval score for the curriculum to count as
    /// mastered.
    pub mastery_threshold: f64,
    pub seeds: Vec<u64>,
}

impl ExperimentConfig {
    pub fn new(student: StudentConfig, teacher: TeacherChoice) -> Self {
        Self {
            label: String::from("experiment"),
            student,
            teacher,
            max_steps: 20_000,
            mastery_threshold: 0.99,
            seeds: (0..20).collect(),
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = label.into();
        self
    }

    pub fn with_max_steps(mut self, max_steps: u64) -> Self {
        self.max_steps = max_steps;
        self
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        text.parse()
            .map_err(|e| Error::config(format!("{}: {e}", path.display())))
    }

    pub fn validate(&self) -> Result<()> {
        if self.label.is_empty() || self.label.contains(['\n', ',', '"']) {
            return Err(Error::config(format!("invalid label {:?}", self.label)));
        }
        if !(self.mastery_threshold > 0.0 && self.mastery_threshold <= 1.0) {
            return Err(Error::config(format!(
                "mastery_threshold must be in (0, 1], got {}",
                self.mastery_threshold
            )));
        }
        let n = self.student.num_tasks();
        match &self.teacher {
            TeacherChoice::Adaptive(cfg) => cfg.validate()?,
            TeacherChoice::Baseline(Baseline::Manual(schedule), _) => {
                if let Some((task, _)) = schedule.iter().find(|(task, _)| task.index() >= n) {
                    return Err(Error::config(format!("schedule task {task} out of range (N = {n})")));
                }
                let total: u64 = schedule.iter().map(|(_, steps)| steps).sum();
                if total > self.max_steps {
                    return Err(Error::config(format!(
                        "manual schedule covers {total} steps, more than max_steps = {}",
                        self.max_steps
                    )));
                }
            }
            TeacherChoice::Baseline(..) => {}
        }
        Ok(())
    }
}

/// Parse `A..B` (half-open) or a comma-separated list of seeds.
pub fn parse_seeds(text: &str) -> Result<Vec<u64>> {
    let text = text.trim();
    if let Some((a, b)) = text.split_once("..") {
        let range: Range<u64> = parse_num(a, "seeds")?..parse_num(b, "seeds")?;
        if range.is_empty() {
            return Err(Error::config(format!("empty seed range {text}")));
        }
        return Ok(range.collect());
    }
    text.split(',').map(|s| parse_num(s, "seeds")).collect()
}

fn parse_num<T: FromStr>(text: &str, key: &str) -> Result<T> {
    text.trim()
        .parse()
        .map_err(|_| Error::config(format!("{key}: cannot parse {:?}", text.trim())))
}

fn parse_bool(text: &str, key: &str) -> Result<bool> {
    match text.trim() {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        other => Err(Error::config(format!("{key}: expected true/false, got {other:?}"))),
    }
}

/// Key/value pairs that must all be consumed.
struct Entries(BTreeMap<String, (usize, String)>);

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (key, value) = line
                .split_once('=')
                .ok_or_else(|| Error::config(format!("line {}: expected key = value", i + 1)))?;
            let key = key.trim().to_string();
            if key.is_empty() {
                return Err(Error::config(format!("line {}: empty key", i + 1)));
            }
            if map.insert(key.clone(), (i + 1, value.trim().to_string())).is_some() {
                return Err(Error::config(format!("line {}: duplicate key {key}", i + 1)));
            }
        }
        Ok(Self(map))
    }

    fn take(&mut self, key: &str) -> Option<String> {
        self.0.remove(key).map(|(_, v)| v)
    }

    fn num<T: FromStr>(&mut self, key: &str, slot: &mut T) -> Result<()> {
        if let Some(v) = self.take(key) {
            *slot = parse_num(&v, key)?;
        }
        Ok(())
    }

    fn finish(self) -> Result<()> {
        match self.0.into_iter().next() {
            Some((key, (line, _))) => Err(Error::config(format!("line {line}: unknown key {key}"))),
            None => Ok(()),
        }
    }
}

fn parse_student(e: &mut Entries) -> Result<StudentConfig> {
    let kind = e.take("student.kind").unwrap_or_else(|| "chain".into());
    Ok(match kind.as_str() {
        "chain" => {
            let mut c = ChainStudentConfig::default();
            e.num("student.n_tasks", &mut c.n_tasks)?;
            e.num("student.learn_rate", &mut c.learn_rate)?;
            e.num("student.gate_threshold", &mut c.gate_threshold)?;
            e.num("student.forget_rate", &mut c.forget_rate)?;
            e.num("student.noise_sigma", &mut c.noise_sigma)?;
            StudentConfig::Chain(c)
        }
        "grid2d" => {
            let mut c = Grid2dConfig::default();
            e.num("student.side", &mut c.side)?;
            e.num("student.learn_rate", &mut c.learn_rate)?;
            e.num("student.gate_threshold", &mut c.gate_threshold)?;
            e.num("student.forget_rate", &mut c.forget_rate)?;
            e.num("student.noise_sigma", &mut c.noise_sigma)?;
            StudentConfig::Grid2d(c)
        }
        "chain_mdp" => {
            let mut c = match e.take("student.chain_lengths") {
                Some(v) => ChainMdpConfig::with_lengths(
                    v.split(',')
                        .map(|s| parse_num(s, "student.chain_lengths"))
                        .collect::<Result<_>>()?,
                ),
                None => ChainMdpConfig::default(),
            };
            e.num("student.episode_cap", &mut c.episode_cap)?;
            e.num("student.q_learn_rate", &mut c.q_learn_rate)?;
            e.num("student.explore_eps", &mut c.explore_eps)?;
            e.num("student.step_penalty", &mut c.step_penalty)?;
            e.num("student.goal_reward", &mut c.goal_reward)?;
            e.num("student.eval_episodes", &mut c.eval_episodes)?;
            e.num("student.discount", &mut c.discount)?;
            c.validate()?;
            StudentConfig::ChainMdp(c)
        }
        other => return Err(Error::config(format!("student.kind: unknown kind {other:?}"))),
    })
}

fn parse_schedule(text: &str) -> Result<Vec<(TaskId, u64)>> {
    text.split(',')
        .map(|block| {
            let (task, steps) = block
                .split_once(':')
                .ok_or_else(|| Error::config(format!("teacher.schedule: expected task:steps, got {block:?}")))?;
            Ok((
                TaskId::new(parse_num(task, "teacher.schedule")?),
                parse_num(steps, "teacher.schedule")?,
            ))
        })
        .collect()
}

fn parse_teacher(e: &mut Entries) -> Result<TeacherChoice> {
    let mut cfg = TeacherConfig::default();
    let formulation = match e.take("teacher.formulation").as_deref() {
        None | Some("simple") => Formulation::Simple,
        Some("batch") => Formulation::Batch,
        Some(other) => return Err(Error::config(format!("teacher.formulation: unknown {other:?}"))),
    };
    cfg.formulation = formulation;
    match e.take("teacher.policy").as_deref() {
        None | Some("eps_greedy") => cfg.policy = PolicyKind::EpsGreedy,
        Some("boltzmann") => cfg.policy = PolicyKind::Boltzmann,
        Some(other) => return Err(Error::config(format!("teacher.policy: unknown {other:?}"))),
    }
    e.num("teacher.alpha", &mut cfg.alpha)?;
    e.num("teacher.epsilon", &mut cfg.epsilon)?;
    e.num("teacher.tau", &mut cfg.tau)?;
    e.num("teacher.window_k", &mut cfg.window_k)?;
    if let Some(v) = e.take("teacher.use_abs") {
        cfg.use_abs = parse_bool(&v, "teacher.use_abs")?;
    }
    let algorithm = e.take("teacher.algorithm").unwrap_or_else(|| "window".into());
    let schedule = e.take("teacher.schedule");
    if schedule.is_some() && algorithm != "manual" {
        return Err(Error::config(
            "teacher.schedule only applies to teacher.algorithm = manual",
        ));
    }
    let mut adaptive = |algorithm| {
        cfg.algorithm = algorithm;
        TeacherChoice::Adaptive(cfg.clone())
    };
    Ok(match algorithm.as_str() {
        "online" => adaptive(Algorithm::Online),
        "naive" => adaptive(Algorithm::Naive),
        "window" => adaptive(Algorithm::Window),
        "sampling" => adaptive(Algorithm::Sampling),
        "uniform" => TeacherChoice::Baseline(Baseline::Uniform, formulation),
        "final_task_only" => TeacherChoice::Baseline(Baseline::FinalTaskOnly, formulation),
        "manual" => {
            let schedule =
                schedule.ok_or_else(|| Error::config("teacher.algorithm = manual needs teacher.schedule"))?;
            TeacherChoice::Baseline(Baseline::Manual(parse_schedule(&schedule)?), formulation)
        }
        other => return Err(Error::config(format!("teacher.algorithm: unknown {other:?}"))),
    })
}

impl FromStr for ExperimentConfig {
    type Err = Error;

    fn from_str(text: &str) -> Result<Self> {
        let mut e = Entries::parse(text)?;
        let student = parse_student(&mut e)?;
        let teacher = parse_teacher(&mut e)?;
        let mut cfg = ExperimentConfig::new(student, teacher);
        if let Some(label) = e.take("label") {
            cfg.label = label;
        }
        e.num("max_steps", &mut cfg.max_steps)?;
        e.num("mastery_threshold", &mut cfg.mastery_threshold)?;
        if let Some(v) = e.take("seeds") {
            cfg.seeds = parse_seeds(&v)?;
        }
        e.finish()?;
        cfg.validate()?;
        Ok(cfg)
    }
}

fn join<T: fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
}

fn formulation_name(f: Formulation) -> &'static str {
    match f {
        Formulation::Simple => "simple",
        Formulation::Batch => "batch",
    }
}

impl fmt::Display for ExperimentConfig {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "label = {}", self.label)?;
        match &self.student {
            StudentConfig::Chain(c) => {
                writeln!(f, "student.kind = chain")?;
                writeln!(f, "student.n_tasks = {}", c.n_tasks)?;
                writeln!(f, "student.learn_rate = {}", c.learn_rate)?;
                writeln!(f, "student.gate_threshold = {}", c.gate_threshold)?;
                writeln!(f, "student.forget_rate = {}", c.forget_rate)?;
                writeln!(f, "student.noise_sigma = {}", c.noise_sigma)?;
            }
            StudentConfig::Grid2d(c) => {
                writeln!(f, "student.kind = grid2d")?;
                writeln!(f, "student.side = {}", c.side)?;
                writeln!(f, "student.learn_rate = {}", c.learn_rate)?;
                writeln!(f, "student.gate_threshold = {}", c.gate_threshold)?;
                writeln!(f, "student.forget_rate = {}", c.forget_rate)?;
                writeln!(f, "student.noise_sigma = {}", c.noise_sigma)?;
            }
            StudentConfig::ChainMdp(c) => {
                writeln!(f, "student.kind = chain_mdp")?;
                writeln!(f, "student.chain_lengths = {}", join(&c.chain_lengths))?;
                writeln!(f, "student.episode_cap = {}", c.episode_cap)?;
                writeln!(f, "student.q_learn_rate = {}", c.q_learn_rate)?;
                writeln!(f, "student.explore_eps = {}", c.explore_eps)?;
                writeln!(f, "student.step_penalty = {}", c.step_penalty)?;
                writeln!(f, "student.goal_reward = {}", c.goal_reward)?;
                writeln!(f, "student.eval_episodes = {}", c.eval_episodes)?;
                writeln!(f, "student.discount = {}", c.discount)?;
            }
        }
        match &self.teacher {
            TeacherChoice::Adaptive(c) => {
                let name = match c.algorithm {
                    Algorithm::Online => "online",
                    Algorithm::Naive => "naive",
                    Algorithm::Window => "window",
                    Algorithm::Sampling => "sampling",
                };
                writeln!(f, "teacher.algorithm = {name}")?;
                writeln!(f, "teacher.formulation = {}", formulation_name(c.formulation))?;
                let policy = match c.policy {
                    PolicyKind::EpsGreedy => "eps_greedy",
                    PolicyKind::Boltzmann => "boltzmann",
                };
                writeln!(f, "teacher.policy = {policy}")?;
                writeln!(f, "teacher.alpha = {}", c.alpha)?;
                writeln!(f, "teacher.epsilon = {}", c.epsilon)?;
                writeln!(f, "teacher.tau = {}", c.tau)?;
                writeln!(f, "teacher.window_k = {}", c.window_k)?;
                writeln!(f, "teacher.use_abs = {}", c.use_abs)?;
            }
            TeacherChoice::Baseline(b, formulation) => {
                match b {
                    Baseline::Uniform => writeln!(f, "teacher.algorithm = uniform")?,
                    Baseline::FinalTaskOnly => writeln!(f, "teacher.algorithm = final_task_only")?,
                    Baseline::Manual(schedule) => {
                        writeln!(f, "teacher.algorithm = manual")?;
                        let blocks = schedule.iter().map(|(t, s)| format!("{t}:{s}"));
                        writeln!(f, "teacher.schedule = {}", join(blocks))?;
                    }
                }
                writeln!(f, "teacher.formulation = {}", formulation_name(*formulation))?;
            }
        }
        writeln!(f, "max_steps = {}", self.max_steps)?;
        writeln!(f, "mastery_threshold = {}", self.mastery_threshold)?;
        let contiguous = self.seeds.len() > 1 && self.seeds.windows(2).all(|w| w[1] == w[0] + 1);
        if contiguous {
            writeln!(f, "seeds = {}..{}", self.seeds[0], self.seeds[self.seeds.len() - 1] + 1)
        } else {
            writeln!(f, "seeds = {}", join(&self.seeds))
        }
    }
}
