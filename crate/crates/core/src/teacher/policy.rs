//! Selection policies over per-task preferences.

use rand::Rng;

use crate::error::{Error, Result};
use crate::teacher::TaskId;

/// `|q|` per task when `use_abs`, otherwise `q` unchanged.
///
/// Selecting on the absolute value makes tasks whose score is dropping
/// (forgetting) as attractive as tasks whose score is rising.
pub fn preference(q: &[f64], use_abs: bool) -> Vec<f64> {
    if use_abs {
        q.iter().map(|v| v.abs()).collect()
    } else {
        q.to_vec()
    }
}

/// Index of the maximum, ties broken uniformly at random.
pub fn argmax_uniform<R: Rng + ?Sized>(values: &[f64], rng: &mut R) -> Result<usize> {
    let max = values
        .iter()
        .copied()
        .reduce(f64::max)
        .ok_or_else(|| Error::domain("empty preference vector"))?;
    if max.is_nan() {
        return Err(Error::domain("preferences must not be NaN"));
    }
    let n_max = values.iter().filter(|&&v| v == max).count();
    let pick = if n_max == 1 { 0 } else { rng.random_range(0..n_max) };
    Ok(values
        .iter()
        .enumerate()
        .filter(|&(_, &v)| v == max)
        .nth(pick)
        .map(|(i, _)| i)
        .expect("at least one maximizer"))
}

fn check_epsilon(epsilon: f64) -> Result<()> {
    if (0.0..=1.0).contains(&epsilon) {
        Ok(())
    } else {
        Err(Error::domain(format!("epsilon must be in [0, 1], got {epsilon}")))
    }
}

fn check_finite(pref: &[f64]) -> Result<()> {
    if pref.is_empty() {
        return Err(Error::domain("empty preference vector"));
    }
    match pref.iter().find(|v| !v.is_finite()) {
        Some(v) => Err(Error::domain(format!("preferences must be finite, got {v}"))),
        None => Ok(()),
    }
}

/// With probability `epsilon` a uniformly random task, otherwise the
/// argmax of `pref`.
pub fn eps_greedy_select<R: Rng + ?Sized>(pref: &[f64], epsilon: f64, rng: &mut R) -> Result<TaskId> {
    check_epsilon(epsilon)?;
    check_finite(pref)?;
    if epsilon > 0.0 && rng.random::<f64>() < epsilon {
        return Ok(TaskId::new(rng.random_range(0..pref.len())));
    }
    argmax_uniform(pref, rng).map(TaskId::new)
}

/// Batch version of epsilon-greedy: `1 - epsilon` mass on the argmax and
/// `epsilon / N` spread over every task, the argmax included.
pub fn eps_greedy_distribution<R: Rng + ?Sized>(pref: &[f64], epsilon: f64, rng: &mut R) -> Result<Vec<f64>> {
    check_epsilon(epsilon)?;
    check_finite(pref)?;
    let best = argmax_uniform(pref, rng)?;
    Ok(mix_one_hot(pref.len(), best, epsilon))
}

/// `(1 - epsilon) * onehot(best) + epsilon / n`.
pub fn mix_one_hot(n: usize, best: usize, epsilon: f64) -> Vec<f64> {
    let floor = epsilon / n as f64;
    let mut p = vec![floor; n];
    p[best] += 1.0 - epsilon;
    p
}

/// Softmax of `pref / tau`, shifted by the maximum so large preferences or
/// tiny temperatures cannot overflow.
pub fn boltzmann_probs(pref: &[f64], tau: f64) -> Result<Vec<f64>> {
    if tau <= 0.0 || !tau.is_finite() {
        return Err(Error::domain(format!("tau must be positive, got {tau}")));
    }
    check_finite(pref)?;
    let max = pref.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut p: Vec<f64> = pref.iter().map(|v| ((v - max) / tau).exp()).collect();
    let total: f64 = p.iter().sum();
    p.iter_mut().for_each(|v| *v /= total);
    Ok(p)
}

/// Draw an index from a probability vector.
pub fn sample_categorical<R: Rng + ?Sized>(p: &[f64], rng: &mut R) -> usize {
    debug_assert!(!p.is_empty());
    let u: f64 = rng.random();
    let mut acc = 0.0;
    for (i, &pi) in p.iter().enumerate() {
        acc += pi;
        if u < acc {
            return i;
        }
    }
    // Rounding can leave the cumulative sum a hair below 1.
    p.iter().rposition(|&pi| pi > 0.0).unwrap_or(p.len() - 1)
}

/// Boltzmann sampling of one task.
pub fn boltzmann_select<R: Rng + ?Sized>(pref: &[f64], tau: f64, rng: &mut R) -> Result<TaskId> {
    let p = boltzmann_probs(pref, tau)?;
    Ok(TaskId::new(sample_categorical(&p, rng)))
}
