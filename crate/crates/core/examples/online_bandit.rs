//! Drive an Online teacher by hand against the five-task chain student.
//!
//! ```sh
//! cargo run --example online_bandit
//! ```

use tscl::rng::{stream, Stream};
use tscl::student::{ChainStudentConfig, GatedSkillStudent, Student};
use tscl::teacher::{Algorithm, Formulation};
use tscl::{Teacher, TeacherAction, TeacherConfig, TeacherObservation};

fn main() -> tscl::Result<()> {
    let mut student = GatedSkillStudent::chain(&ChainStudentConfig::default())?;
    let cfg = TeacherConfig::new(Algorithm::Online, Formulation::Simple);
    let mut teacher = Teacher::new(cfg, student.num_tasks())?;

    let mut teacher_rng = stream(42, Stream::Teacher);
    let mut student_rng = stream(42, Stream::Student);

    for t in 1..=1500u64 {
        let action = teacher.next(&mut teacher_rng)?;
        let TeacherAction::SingleTask(task) = action else {
            unreachable!("simple teachers pick one task");
        };
        let score = student.train_simple(task, &mut student_rng);
        teacher.observe(&action, &TeacherObservation::SingleScore { task, score }, t)?;

        if t % 150 == 0 {
            let skills: Vec<String> = student.eval_all().iter().map(|s| format!("{s:.2}")).collect();
            let q: Vec<String> = teacher.q_table().values().iter().map(|q| format!("{q:+.4}")).collect();
            println!(
                "t={t:5}  task {task}  skills [{}]  Q [{}]",
                skills.join(" "),
                q.join(" ")
            );
        }
    }
    Ok(())
}
