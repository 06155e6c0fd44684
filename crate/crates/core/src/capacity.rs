//! Finite spaces, capacities on their powersets, simple functions, and the
//! seeded generators used by the property suites.
//!
//! Subsets are bit masks over point indices; a capacity is a dense table of
//! `2ⁿ` values indexed by mask.

use std::collections::BTreeMap;
use std::fmt;
use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{CapacityViolation, Error, Result};
use crate::scalar::{Realization, Value};

pub const MAX_POINTS: usize = 16;

/// A subset of a [`FiniteSpace`], encoded as a bit mask over point indices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Subset(pub u32);

impl Subset {
    pub const EMPTY: Subset = Subset(0);

    pub fn full(n: usize) -> Subset {
        Subset(((1u64 << n) - 1) as u32)
    }

    pub fn singleton(i: usize) -> Subset {
        Subset(1 << i)
    }

    pub fn from_indices(indices: impl IntoIterator<Item = usize>) -> Subset {
        Subset(indices.into_iter().fold(0, |m, i| m | (1 << i)))
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 & (1 << i) != 0
    }

    pub fn with(self, i: usize) -> Subset {
        Subset(self.0 | (1 << i))
    }

    pub fn without(self, i: usize) -> Subset {
        Subset(self.0 & !(1 << i))
    }

    pub fn is_subset_of(self, other: Subset) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn indices(self) -> impl Iterator<Item = usize> {
        (0..32).filter(move |&i| self.contains(i))
    }
}

/// An ordered set of distinct point labels, `1 ≤ n ≤ 16`.
#[derive(Clone)]
pub struct FiniteSpace {
    labels: Arc<[String]>,
}

impl fmt::Debug for FiniteSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(self.labels.iter()).finish()
    }
}

impl PartialEq for FiniteSpace {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.labels, &other.labels) || self.labels == other.labels
    }
}

impl Eq for FiniteSpace {}

impl FiniteSpace {
    pub fn new<S: Into<String>>(labels: impl IntoIterator<Item = S>) -> Result<Self> {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() || labels.len() > MAX_POINTS {
            return Err(Error::InvalidSpace(format!(
                "expected 1..={MAX_POINTS} points, got {}",
                labels.len()
            )));
        }
        for (i, l) in labels.iter().enumerate() {
            if l.is_empty() || l.contains(',') || l == "∅" {
                return Err(Error::InvalidSpace(format!("label {l:?} is not allowed")));
            }
            if labels[..i].contains(l) {
                return Err(Error::InvalidSpace(format!("duplicate label {l:?}")));
            }
        }
        Ok(FiniteSpace { labels: labels.into() })
    }

    /// Points labelled `x1, …, xn`.
    pub fn with_size(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")))
    }

    pub fn size(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn full(&self) -> Subset {
        Subset::full(self.size())
    }

    pub fn subset_count(&self) -> usize {
        1 << self.size()
    }

    /// All subsets in mask order.
    pub fn subsets(&self) -> impl Iterator<Item = Subset> {
        (0..self.subset_count() as u32).map(Subset)
    }

    /// Comma-joined labels in point order; `∅` for the empty set.
    pub fn subset_label(&self, s: Subset) -> String {
        if s.is_empty() {
            return "∅".into();
        }
        s.indices()
            .filter(|&i| i < self.size())
            .map(|i| self.labels[i].as_str())
            .collect::<Vec<_>>()
            .join(",")
    }

    /// Inverse of [`subset_label`](Self::subset_label); label order in the
    /// key does not matter.
    pub fn parse_subset(&self, key: &str) -> Result<Subset> {
        let key = key.trim();
        if key.is_empty() || key == "∅" {
            return Ok(Subset::EMPTY);
        }
        let mut s = Subset::EMPTY;
        for part in key.split(',') {
            let part = part.trim();
            let i = self
                .index_of(part)
                .ok_or_else(|| Error::InvalidSpace(format!("unknown point {part:?} in subset {key:?}")))?;
            if s.contains(i) {
                return Err(Error::InvalidSpace(format!(
                    "point {part:?} repeated in subset {key:?}"
                )));
            }
            s = s.with(i);
        }
        Ok(s)
    }
}

/// How unspecified subsets of a partial table are filled in.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Completion {
    /// Every non-empty subset must be given.
    #[default]
    None,
    /// Unspecified `A` gets `max{μ(B) : B ⊆ A, B specified}`; `X` defaults to 1.
    LowerEnvelope,
}

/// An unvalidated subset → value table.
#[derive(Debug, Clone)]
pub struct RawCapacity {
    pub space: FiniteSpace,
    pub entries: BTreeMap<Subset, Value>,
    pub completion: Completion,
}

impl RawCapacity {
    pub fn new(space: FiniteSpace) -> Self {
        RawCapacity {
            space,
            entries: BTreeMap::new(),
            completion: Completion::None,
        }
    }

    pub fn complete(mut self, completion: Completion) -> Self {
        self.completion = completion;
        self
    }

    pub fn set(mut self, s: Subset, v: Value) -> Self {
        self.entries.insert(s, v);
        self
    }

    pub fn set_labels(self, key: &str, v: Value) -> Result<Self> {
        let s = self.space.parse_subset(key)?;
        Ok(self.set(s, v))
    }
}

/// A monotone set function on `2^X` with `μ(∅) = 0` and `μ(X) = 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct Capacity {
    space: FiniteSpace,
    values: Vec<Value>,
}

impl Capacity {
    /// Validates a complete table indexed by mask.
    pub fn from_table(space: FiniteSpace, values: Vec<Value>) -> Result<Self> {
        if values.len() != space.subset_count() {
            return Err(CapacityViolation::WrongSize {
                expected: space.subset_count(),
                found: values.len(),
            }
            .into());
        }
        let r = values[0].realization();
        if values.iter().any(|v| v.realization() != r) {
            return Err(CapacityViolation::MixedRealization.into());
        }
        check_capacity(&space, &values)?;
        Ok(Capacity { space, values })
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn measure(&self, s: Subset) -> &Value {
        &self.values[s.index()]
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn realization(&self) -> Realization {
        self.values[0].realization()
    }

    pub fn to_realization(&self, r: Realization) -> Capacity {
        Capacity {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.to_realization(r)).collect(),
        }
    }

    /// `μ ≤ ν` on every subset.
    pub fn le(&self, other: &Capacity) -> Result<bool> {
        self.values
            .iter()
            .zip(&other.values)
            .try_fold(true, |acc, (a, b)| Ok(acc && a.try_cmp(b)?.is_le()))
    }
}

fn check_capacity(space: &FiniteSpace, values: &[Value]) -> Result<()> {
    let r = values[0].realization();
    if !values[0].is_zero() {
        return Err(CapacityViolation::EmptySetNotZero {
            value: values[0].render(),
        }
        .into());
    }
    let n = space.size();
    for a in space.subsets() {
        for i in (0..n).filter(|&i| !a.contains(i)) {
            let b = a.with(i);
            let (va, vb) = (&values[a.index()], &values[b.index()]);
            if va.try_cmp(vb)?.is_gt() {
                return Err(CapacityViolation::NotMonotone {
                    smaller: a,
                    larger: b,
                    smaller_label: space.subset_label(a),
                    larger_label: space.subset_label(b),
                    smaller_value: va.render(),
                    larger_value: vb.render(),
                }
                .into());
            }
        }
    }
    let top = &values[space.full().index()];
    if *top != Value::one(r) {
        return Err(CapacityViolation::WholeSpaceNotOne { value: top.render() }.into());
    }
    Ok(())
}

/// Validates (and, in completion mode, completes) a raw table.
///
/// Checks run in this order: uniform realization, coverage, `μ(∅) = 0`,
/// monotonicity over covering pairs `(A, A ∪ {x})` in mask order, `μ(X) = 1`.
pub fn validate_capacity(raw: RawCapacity) -> Result<Capacity> {
    let RawCapacity {
        space,
        entries,
        completion,
    } = raw;
    let r = match entries.values().next() {
        Some(v) => v.realization(),
        None => Realization::Exact,
    };
    if entries.values().any(|v| v.realization() != r) {
        return Err(CapacityViolation::MixedRealization.into());
    }
    if let Some((s, _)) = entries.iter().find(|(s, _)| !s.is_subset_of(space.full())) {
        return Err(Error::InvalidSpace(format!("mask {:#b} exceeds the space", s.0)));
    }
    let n = space.size();
    let full = space.full();
    let mut values: Vec<Value> = Vec::with_capacity(space.subset_count());
    for a in space.subsets() {
        let v = match entries.get(&a) {
            Some(v) => v.clone(),
            None if a.is_empty() => Value::zero(r),
            None => match completion {
                Completion::None => {
                    return Err(CapacityViolation::MissingSubset {
                        subset: a,
                        label: space.subset_label(a),
                    }
                    .into())
                }
                Completion::LowerEnvelope if a == full => Value::one(r),
                Completion::LowerEnvelope => {
                    let mut best = Value::zero(r);
                    for i in a.indices().filter(|&i| i < n) {
                        let below = &values[a.without(i).index()];
                        if below.try_cmp(&best)?.is_gt() {
                            best = below.clone();
                        }
                    }
                    best
                }
            },
        };
        values.push(v);
    }
    check_capacity(&space, &values)?;
    Ok(Capacity { space, values })
}

/// A `[0, 1]`-valued function on a finite space, given pointwise.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleFunction {
    space: FiniteSpace,
    values: Vec<Value>,
}

impl SimpleFunction {
    pub fn new(space: FiniteSpace, values: Vec<Value>) -> Result<Self> {
        if values.len() != space.size() {
            return Err(Error::Domain(format!(
                "function has {} values for {} points",
                values.len(),
                space.size()
            )));
        }
        let r = values[0].realization();
        if values.iter().any(|v| v.realization() != r) {
            return Err(Error::RealizationMismatch);
        }
        Ok(SimpleFunction { space, values })
    }

    pub fn constant(space: FiniteSpace, c: Value) -> Self {
        let values = vec![c; space.size()];
        SimpleFunction { space, values }
    }

    /// `c·1_A`
    pub fn scaled_indicator(space: FiniteSpace, a: Subset, c: &Value) -> Self {
        let zero = Value::zero(c.realization());
        let values = (0..space.size())
            .map(|i| if a.contains(i) { c.clone() } else { zero.clone() })
            .collect();
        SimpleFunction { space, values }
    }

    pub fn indicator(space: FiniteSpace, a: Subset, r: Realization) -> Self {
        Self::scaled_indicator(space, a, &Value::one(r))
    }

    pub fn space(&self) -> &FiniteSpace {
        &self.space
    }

    pub fn values(&self) -> &[Value] {
        &self.values
    }

    pub fn value(&self, i: usize) -> &Value {
        &self.values[i]
    }

    pub fn realization(&self) -> Realization {
        self.values[0].realization()
    }

    pub fn to_realization(&self, r: Realization) -> SimpleFunction {
        SimpleFunction {
            space: self.space.clone(),
            values: self.values.iter().map(|v| v.to_realization(r)).collect(),
        }
    }

    /// `{x : f(x) ≥ t}`
    pub fn superlevel(&self, t: &Value) -> Result<Subset> {
        let mut s = Subset::EMPTY;
        for (i, v) in self.values.iter().enumerate() {
            if v.try_cmp(t)?.is_ge() {
                s = s.with(i);
            }
        }
        Ok(s)
    }

    /// Distinct values in ascending order.
    pub fn distinct_values(&self) -> Vec<Value> {
        let mut v = self.values.clone();
        v.sort_by(|a, b| a.try_cmp(b).expect("function values share a realization"));
        v.dedup_by(|a, b| a == b);
        v
    }

    pub fn min(&self) -> Value {
        self.distinct_values().swap_remove(0)
    }

    pub fn max(&self) -> Value {
        self.distinct_values().pop().expect("non-empty space")
    }

    fn same_space(&self, other: &SimpleFunction) -> Result<()> {
        if self.space != other.space {
            return Err(Error::Domain("functions live on different spaces".into()));
        }
        Ok(())
    }

    /// Pointwise `f ∘ g`.
    pub fn combine(
        &self,
        other: &SimpleFunction,
        op: impl Fn(&Value, &Value) -> Result<Value>,
    ) -> Result<SimpleFunction> {
        self.same_space(other)?;
        let values = self
            .values
            .iter()
            .zip(&other.values)
            .map(|(a, b)| op(a, b))
            .collect::<Result<Vec<_>>>()?;
        Ok(SimpleFunction {
            space: self.space.clone(),
            values,
        })
    }

    pub fn join(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.combine(other, Value::join)
    }

    pub fn meet(&self, other: &SimpleFunction) -> Result<SimpleFunction> {
        self.combine(other, Value::meet)
    }

    /// `f + a`; a domain error if it leaves `[0, 1]` anywhere.
    pub fn shift(&self, a: &Value) -> Result<SimpleFunction> {
        let values = self
            .values
            .iter()
            .map(|v| {
                v.checked_add(a)?
                    .ok_or_else(|| Error::Domain(format!("f + a leaves [0, 1]: {} + {} > 1", v, a)))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(SimpleFunction {
            space: self.space.clone(),
            values,
        })
    }

    /// `f·1_A`
    pub fn restrict(&self, a: Subset) -> SimpleFunction {
        let zero = Value::zero(self.realization());
        let values = self
            .values
            .iter()
            .enumerate()
            .map(|(i, v)| if a.contains(i) { v.clone() } else { zero.clone() })
            .collect();
        SimpleFunction {
            space: self.space.clone(),
            values,
        }
    }

    /// `f ≤ g` pointwise.
    pub fn le(&self, other: &SimpleFunction) -> Result<bool> {
        self.same_space(other)?;
        self.values
            .iter()
            .zip(&other.values)
            .try_fold(true, |acc, (a, b)| Ok(acc && a.try_cmp(b)?.is_le()))
    }
}

/// `μ({x : f(x) ≥ t})`
pub fn superlevel_measure<'a>(mu: &'a Capacity, f: &SimpleFunction, t: &Value) -> Result<&'a Value> {
    if mu.space() != f.space() {
        return Err(Error::Domain("capacity and function live on different spaces".into()));
    }
    if mu.realization() != f.realization() || f.realization() != t.realization() {
        return Err(Error::RealizationMismatch);
    }
    Ok(mu.measure(f.superlevel(t)?))
}

/// Largest denominator used by the random generators.
pub const MAX_DENOMINATOR: u32 = 64;

/// Deterministic generator for case `index` of a run seeded with `seed`.
pub fn case_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// A uniform rational in `[0, 1]` with denominator at most `max_den`.
pub fn random_rational<R: Rng + ?Sized>(rng: &mut R, max_den: u32) -> Value {
    let q = rng.gen_range(1..=max_den);
    let p = rng.gen_range(0..=q);
    Value::Exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
}

/// A uniform rational in `[0, bound]` with denominator at most `max_den`.
pub fn random_rational_below<R: Rng + ?Sized>(rng: &mut R, bound: &Value, max_den: u32) -> Value {
    let u = random_rational(rng, max_den);
    u.mul(bound).expect("exact values")
}

/// Families the random capacity generator can draw from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CapacityMode {
    /// i.i.d. rationals per proper subset, repaired by an upward envelope sweep.
    General,
    /// Normalized random point weights, summed.
    Additive,
    /// Random point weights with one point at 1, maximized.
    Possibility,
}

fn upward_envelope(space: &FiniteSpace, values: &mut [Value]) {
    let n = space.size();
    for a in space.subsets().skip(1) {
        for i in a.indices().filter(|&i| i < n) {
            let below = values[a.without(i).index()].clone();
            if below > values[a.index()] {
                values[a.index()] = below;
            }
        }
    }
}

/// Draws a table of values from `draw` for every non-empty proper subset,
/// repairs it into a monotone table and forces the boundaries.
pub fn repaired_capacity<R, F>(space: &FiniteSpace, rng: &mut R, mut draw: F) -> Capacity
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Value,
{
    let full = space.full();
    let mut values: Vec<Value> = space
        .subsets()
        .map(|a| {
            if a.is_empty() {
                Value::zero(Realization::Exact)
            } else if a == full {
                Value::one(Realization::Exact)
            } else {
                draw(rng)
            }
        })
        .collect();
    upward_envelope(space, &mut values);
    Capacity {
        space: space.clone(),
        values,
    }
}

pub fn random_capacity(space: &FiniteSpace, seed: u64) -> Capacity {
    random_capacity_with(space, CapacityMode::General, &mut case_rng(seed, 0))
}

pub fn random_capacity_with<R: Rng + ?Sized>(space: &FiniteSpace, mode: CapacityMode, rng: &mut R) -> Capacity {
    match mode {
        CapacityMode::General => repaired_capacity(space, rng, |r| random_rational(r, MAX_DENOMINATOR)),
        CapacityMode::Additive => {
            let w: Vec<u32> = (0..space.size()).map(|_| rng.gen_range(0..=MAX_DENOMINATOR)).collect();
            let total: u32 = w.iter().sum();
            let weights: Vec<Value> = if total == 0 {
                let n = space.size() as i64;
                (0..n).map(|_| Value::ratio(1, n).expect("1/n")).collect()
            } else {
                w.iter()
                    .map(|&x| Value::ratio(x as i64, total as i64).expect("weight share"))
                    .collect()
            };
            additive_capacity(space, &weights).expect("normalized weights")
        }
        CapacityMode::Possibility => {
            let mut weights: Vec<Value> = (0..space.size())
                .map(|_| random_rational(rng, MAX_DENOMINATOR))
                .collect();
            let top = rng.gen_range(0..space.size());
            weights[top] = Value::one(Realization::Exact);
            possibility_capacity(space, &weights).expect("one weight is 1")
        }
    }
}

/// `μ(A) = Σ_{x∈A} w(x)`; the weights must sum to 1.
pub fn additive_capacity(space: &FiniteSpace, weights: &[Value]) -> Result<Capacity> {
    if weights.len() != space.size() {
        return Err(Error::Domain("one weight per point required".into()));
    }
    let r = weights[0].realization();
    let values = space
        .subsets()
        .map(|a| {
            a.indices()
                .filter(|&i| i < space.size())
                .try_fold(Value::zero(r), |acc, i| {
                    acc.checked_add(&weights[i])?
                        .ok_or_else(|| Error::Domain("weights sum above 1".into()))
                })
        })
        .collect::<Result<Vec<_>>>()?;
    Capacity::from_table(space.clone(), values)
}

/// `μ(A) = max_{x∈A} w(x)`; some weight must be 1.
pub fn possibility_capacity(space: &FiniteSpace, weights: &[Value]) -> Result<Capacity> {
    if weights.len() != space.size() {
        return Err(Error::Domain("one weight per point required".into()));
    }
    let r = weights[0].realization();
    let values = space
        .subsets()
        .map(|a| {
            a.indices()
                .filter(|&i| i < space.size())
                .try_fold(Value::zero(r), |acc, i| acc.join(&weights[i]))
        })
        .collect::<Result<Vec<_>>>()?;
    Capacity::from_table(space.clone(), values)
}

/// Two functions that are non-decreasing along one shared random ordering of
/// the points, hence comonotone.
pub fn random_comonotone_pair(space: &FiniteSpace, seed: u64) -> (SimpleFunction, SimpleFunction) {
    random_comonotone_pair_with(space, &mut case_rng(seed, 0), |r| random_rational(r, MAX_DENOMINATOR))
}

pub fn random_comonotone_pair_with<R, F>(
    space: &FiniteSpace,
    rng: &mut R,
    mut draw: F,
) -> (SimpleFunction, SimpleFunction)
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Value,
{
    let n = space.size();
    let mut order: Vec<usize> = (0..n).collect();
    order.shuffle(rng);
    let mut sorted = |rng: &mut R| {
        let mut v: Vec<Value> = (0..n).map(|_| draw(rng)).collect();
        v.sort_by(|a, b| a.try_cmp(b).expect("exact draws"));
        v
    };
    let fs = sorted(rng);
    let gs = sorted(rng);
    let place = |sorted: Vec<Value>| {
        let mut vals = vec![Value::zero(Realization::Exact); n];
        for (rank, &point) in order.iter().enumerate() {
            vals[point] = sorted[rank].clone();
        }
        SimpleFunction {
            space: space.clone(),
            values: vals,
        }
    };
    (place(fs), place(gs))
}

/// A function with i.i.d. draws per point.
pub fn random_function_with<R, F>(space: &FiniteSpace, rng: &mut R, mut draw: F) -> SimpleFunction
where
    R: Rng + ?Sized,
    F: FnMut(&mut R) -> Value,
{
    SimpleFunction {
        space: space.clone(),
        values: (0..space.size()).map(|_| draw(rng)).collect(),
    }
}
