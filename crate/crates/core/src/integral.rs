//! The seminormed fuzzy integral `I_S(μ, f) = sup_t S(t, μ({f ≥ t}))`.
//!
//! On a finite space `t ↦ μ({f ≥ t})` is a step function that only changes
//! at values of `f`, and `S` is non-decreasing in `t`, so the supremum over
//! each step is attained at its right end. The exact evaluator therefore
//! only visits `{0} ∪ f(X)`. The grid evaluator is an independent
//! brute-force oracle for cross-validation.

use std::cmp::Ordering;

use rayon::prelude::*;

use crate::capacity::{superlevel_measure, Capacity, SimpleFunction, Subset};
use crate::error::{Error, Result};
use crate::scalar::{grid, Realization, Value};
use crate::semicopula::Semicopula;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IntegralMethod {
    ExactThreshold,
    GridOracle,
}

impl IntegralMethod {
    pub fn as_str(self) -> &'static str {
        match self {
            IntegralMethod::ExactThreshold => "exact-threshold",
            IntegralMethod::GridOracle => "grid-oracle",
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IntegralResult {
    pub value: Value,
    /// Smallest threshold attaining the maximum.
    pub argmax_threshold: Value,
    pub method: IntegralMethod,
}

fn realization_of(s: &Semicopula, mu: &Capacity, f: &SimpleFunction) -> Result<Realization> {
    let r = f.realization();
    if mu.realization() != r {
        return Err(Error::RealizationMismatch);
    }
    if mu.space() != f.space() {
        return Err(Error::Domain("capacity and function live on different spaces".into()));
    }
    if !s.supports(r) {
        return Err(Error::UnsupportedRealization(s.name().to_string()));
    }
    Ok(r)
}

/// Maximum of `S(t, μ({f ≥ t}))` over `thresholds` (ascending); ties go to
/// the first threshold.
fn sup_over(
    s: &Semicopula,
    mu: &Capacity,
    f: &SimpleFunction,
    thresholds: impl IntoIterator<Item = Value>,
    method: IntegralMethod,
) -> Result<IntegralResult> {
    let mut best: Option<(Value, Value)> = None;
    for t in thresholds {
        let v = s.eval(&t, superlevel_measure(mu, f, &t)?)?;
        let better = match &best {
            None => true,
            Some((bv, _)) => v.try_cmp(bv)? == Ordering::Greater,
        };
        if better {
            best = Some((v, t));
        }
    }
    let (value, argmax_threshold) = best.expect("at least one threshold");
    Ok(IntegralResult {
        value,
        argmax_threshold,
        method,
    })
}

/// `I_S(μ, f)` by threshold enumeration over `{0} ∪ f(X)`.
pub fn eval_integral(s: &Semicopula, mu: &Capacity, f: &SimpleFunction) -> Result<IntegralResult> {
    let r = realization_of(s, mu, f)?;
    let mut thresholds = f.distinct_values();
    if !thresholds[0].is_zero() {
        thresholds.insert(0, Value::zero(r));
    }
    sup_over(s, mu, f, thresholds, IntegralMethod::ExactThreshold)
}

/// `I_S(μ, f)` by scanning the uniform grid of the given step, augmented
/// with the values of `f`.
pub fn eval_integral_grid(
    s: &Semicopula,
    mu: &Capacity,
    f: &SimpleFunction,
    grid_step: &Value,
) -> Result<IntegralResult> {
    realization_of(s, mu, f)?;
    if grid_step.realization() != f.realization() {
        return Err(Error::RealizationMismatch);
    }
    let mut ts = grid(grid_step)?;
    ts.extend(f.values().iter().cloned());
    ts.sort_by(|a, b| a.try_cmp(b).expect("same realization"));
    ts.dedup_by(|a, b| a == b);
    sup_over(s, mu, f, ts, IntegralMethod::GridOracle)
}

/// `I_S(μ, f·1_A)`
pub fn eval_integral_restricted(
    s: &Semicopula,
    mu: &Capacity,
    f: &SimpleFunction,
    a: Subset,
) -> Result<IntegralResult> {
    eval_integral(s, mu, &f.restrict(a))
}

/// Evaluates many cases concurrently; results keep the input order.
pub fn eval_integral_batch(s: &Semicopula, cases: &[(Capacity, SimpleFunction)]) -> Vec<Result<IntegralResult>> {
    cases.par_iter().map(|(mu, f)| eval_integral(s, mu, f)).collect()
}
