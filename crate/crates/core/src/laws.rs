//! Executable checkers for the weak-subadditivity, comonotone-maxitivity and
//! commuting-operator results about seminormed integrals.
//!
//! Pointwise conditions are scanned on a uniform grid in lexicographic order;
//! the first violation becomes the witness. Integral-level laws are checked
//! on a single instance (or a seeded random suite of instances) and failing
//! instances are carried in the witness so they can be replayed.

use std::fmt;
use std::str::FromStr;

use rand::Rng;
use rayon::prelude::*;

use crate::capacity::{
    case_rng, random_capacity_with, random_comonotone_pair_with, random_function_with, random_rational,
    random_rational_below, validate_capacity, Capacity, CapacityMode, FiniteSpace, RawCapacity, SimpleFunction, Subset,
    MAX_DENOMINATOR,
};
use crate::error::{Error, Result};
use crate::integral::{eval_integral, eval_integral_restricted};
use crate::report::{CheckReport, Sides, Witness};
use crate::scalar::{grid, Realization, Tolerance, Value};
use crate::semicopula::{BinaryOp, Semicopula};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum LawId {
    /// `S(c + a, b) ≤ S(c, b) + a`
    Shift,
    /// `S₁(x + y, z) ≤ S₂(x, z) + S₃(y, z)`
    Three,
    /// `I_S(μ, f + a) ≤ I_S(μ, f) + a`
    WeakSubadd,
    /// `I_{S₁}(μ, (f + a)·1_A) ≤ I_{S₂}(μ, f·1_A) + I_{S₃}(μ, a·1_A)`
    RestrictedSubadd,
    CorA,
    CorB,
    CorC,
    /// `S_L ≤ S`
    LukaDom,
    /// `I_S(μ, f ∨ g) = I_S(μ, f) ∨ I_S(μ, g)` for comonotone `f, g`
    Maxitivity,
    /// `I_S(μ, f ∘ g) = I_S(μ, f) ∘ I_S(μ, g)` for comonotone `f, g`
    Commuting,
    /// `x ∘ x = x`, forced by commuting on indicators
    Idempotency,
}

impl LawId {
    pub const ALL: [LawId; 11] = [
        LawId::Shift,
        LawId::Three,
        LawId::WeakSubadd,
        LawId::RestrictedSubadd,
        LawId::CorA,
        LawId::CorB,
        LawId::CorC,
        LawId::LukaDom,
        LawId::Maxitivity,
        LawId::Commuting,
        LawId::Idempotency,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            LawId::Shift => "shift",
            LawId::Three => "three",
            LawId::WeakSubadd => "weak-subadd",
            LawId::RestrictedSubadd => "restricted-subadd",
            LawId::CorA => "cor-a",
            LawId::CorB => "cor-b",
            LawId::CorC => "cor-c",
            LawId::LukaDom => "luka-dom",
            LawId::Maxitivity => "maxitivity",
            LawId::Commuting => "commuting",
            LawId::Idempotency => "idempotency",
        }
    }

    /// Laws about `[0, 1]`-valued operators, checked on a scalar grid.
    pub fn is_pointwise(self) -> bool {
        matches!(self, LawId::Shift | LawId::Three | LawId::LukaDom | LawId::Idempotency)
    }

    pub fn needs_pair(self) -> bool {
        matches!(self, LawId::Maxitivity | LawId::Commuting)
    }

    pub fn needs_shift(self) -> bool {
        matches!(
            self,
            LawId::WeakSubadd | LawId::RestrictedSubadd | LawId::CorA | LawId::CorB | LawId::CorC
        )
    }

    pub fn needs_subset(self) -> bool {
        matches!(self, LawId::RestrictedSubadd | LawId::CorA | LawId::CorB | LawId::CorC)
    }

    pub fn needs_op(self) -> bool {
        matches!(self, LawId::Commuting | LawId::Idempotency)
    }
}

impl fmt::Display for LawId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for LawId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        LawId::ALL
            .into_iter()
            .find(|l| l.as_str() == s)
            .ok_or_else(|| Error::UnknownLaw(s.to_string()))
    }
}

/// Which corollary bound replaces the third integral.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorollaryVariant {
    /// `I_S(μ, a·1_A)`
    A,
    /// `a ∧ μ(A)`
    B,
    /// `a·μ(A)`
    C,
}

impl CorollaryVariant {
    pub fn law_id(self) -> LawId {
        match self {
            CorollaryVariant::A => LawId::CorA,
            CorollaryVariant::B => LawId::CorB,
            CorollaryVariant::C => LawId::CorC,
        }
    }

    fn third(self, s: &Semicopula) -> Semicopula {
        match self {
            CorollaryVariant::A => s.clone(),
            CorollaryVariant::B => Semicopula::min(),
            CorollaryVariant::C => Semicopula::product(),
        }
    }
}

/// A concrete integral-level input: capacity, one or two functions, an
/// optional shift and an optional restriction set.
#[derive(Debug, Clone, PartialEq)]
pub struct Instance {
    pub capacity: Capacity,
    pub f: SimpleFunction,
    pub g: Option<SimpleFunction>,
    pub shift: Option<Value>,
    pub subset: Option<Subset>,
}

impl Instance {
    pub fn new(capacity: Capacity, f: SimpleFunction) -> Self {
        Instance {
            capacity,
            f,
            g: None,
            shift: None,
            subset: None,
        }
    }

    pub fn with_g(mut self, g: SimpleFunction) -> Self {
        self.g = Some(g);
        self
    }

    pub fn with_shift(mut self, a: Value) -> Self {
        self.shift = Some(a);
        self
    }

    pub fn with_subset(mut self, a: Subset) -> Self {
        self.subset = Some(a);
        self
    }

    fn g(&self) -> Result<&SimpleFunction> {
        self.g
            .as_ref()
            .ok_or_else(|| Error::Domain("instance needs a second function g".into()))
    }

    fn shift(&self) -> Result<&Value> {
        self.shift
            .as_ref()
            .ok_or_else(|| Error::Domain("instance needs a shift a".into()))
    }

    fn subset(&self) -> Subset {
        self.subset.unwrap_or_else(|| self.capacity.space().full())
    }
}

/// The operators a law is instantiated with. `s2`/`s3` default to `s`.
#[derive(Debug, Clone)]
pub struct Bindings {
    pub s: Semicopula,
    pub s2: Option<Semicopula>,
    pub s3: Option<Semicopula>,
    pub op: Option<BinaryOp>,
}

impl Bindings {
    pub fn new(s: Semicopula) -> Self {
        Bindings {
            s,
            s2: None,
            s3: None,
            op: None,
        }
    }

    pub fn three(s1: Semicopula, s2: Semicopula, s3: Semicopula) -> Self {
        Bindings {
            s: s1,
            s2: Some(s2),
            s3: Some(s3),
            op: None,
        }
    }

    pub fn with_op(mut self, op: BinaryOp) -> Self {
        self.op = Some(op);
        self
    }

    pub fn s2(&self) -> &Semicopula {
        self.s2.as_ref().unwrap_or(&self.s)
    }

    pub fn s3(&self) -> &Semicopula {
        self.s3.as_ref().unwrap_or(&self.s)
    }

    pub fn op(&self) -> Result<&BinaryOp> {
        self.op
            .as_ref()
            .ok_or_else(|| Error::Domain("this law needs a binary operator".into()))
    }

    pub(crate) fn supports(&self, r: Realization) -> bool {
        self.s.supports(r)
            && self.s2().supports(r)
            && self.s3().supports(r)
            && self.op.as_ref().is_none_or(|o| o.supports(r))
    }
}

/// `(f(x) − f(y))(g(x) − g(y)) ≥ 0` for all `x, y ∈ A`.
pub fn is_comonotone(f: &SimpleFunction, g: &SimpleFunction, a: Subset) -> Result<bool> {
    if f.space() != g.space() {
        return Err(Error::Domain("functions live on different spaces".into()));
    }
    let idx: Vec<usize> = a.indices().filter(|&i| i < f.space().size()).collect();
    for (k, &x) in idx.iter().enumerate() {
        for &y in &idx[k + 1..] {
            let df = f.value(x).try_cmp(f.value(y))?;
            let dg = g.value(x).try_cmp(g.value(y))?;
            if df.is_lt() && dg.is_gt() || df.is_gt() && dg.is_lt() {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The two-point instance realizing a violation of the shift condition at
/// integral level: `μ({x₁}) = μ({x₂}) = b`, `f = (0, c)`, shift `a`.
pub fn witness_from_shift_violation(s: &Semicopula, a: &Value, b: &Value, c: &Value) -> Result<Instance> {
    let ca = c
        .checked_add(a)?
        .ok_or_else(|| Error::Contract(format!("a + c = {a} + {c} exceeds 1")))?;
    let lhs = s.eval(&ca, b)?;
    let rhs = s.eval(c, b)?.add_clamped(a)?;
    if lhs.try_cmp(&rhs)?.is_le() {
        return Err(Error::Contract(format!(
            "({a}, {b}, {c}) does not violate S(c + a, b) <= S(c, b) + a for {}",
            s.name()
        )));
    }
    let space = FiniteSpace::with_size(2)?;
    let mu = validate_capacity(
        RawCapacity::new(space.clone())
            .set(Subset(1), b.clone())
            .set(Subset(2), b.clone())
            .set(space.full(), Value::one(b.realization())),
    )?;
    let f = SimpleFunction::new(space, vec![Value::zero(c.realization()), c.clone()])?;
    Ok(Instance::new(mu, f).with_shift(a.clone()))
}

/// The instance obtained by putting `f = x·1_A`, shift `y`, `μ(A) = z` into
/// the restricted inequality, on a two-point space with `A = {x₁}`.
pub fn witness_from_three_violation(
    s1: &Semicopula,
    s2: &Semicopula,
    s3: &Semicopula,
    x: &Value,
    y: &Value,
    z: &Value,
) -> Result<Instance> {
    let xy = x
        .checked_add(y)?
        .ok_or_else(|| Error::Contract(format!("x + y = {x} + {y} exceeds 1")))?;
    let lhs = s1.eval(&xy, z)?;
    let rhs = s2.eval(x, z)?.add_clamped(&s3.eval(y, z)?)?;
    if lhs.try_cmp(&rhs)?.is_le() {
        return Err(Error::Contract(format!(
            "({x}, {y}, {z}) does not violate S1(x + y, z) <= S2(x, z) + S3(y, z)"
        )));
    }
    let space = FiniteSpace::with_size(2)?;
    let mu = validate_capacity(
        RawCapacity::new(space.clone())
            .set(Subset(1), z.clone())
            .set(Subset(2), z.clone())
            .set(space.full(), Value::one(z.realization())),
    )?;
    let a = Subset::singleton(0);
    let f = SimpleFunction::scaled_indicator(space, a, x);
    Ok(Instance::new(mu, f).with_shift(y.clone()).with_subset(a))
}

fn grid_desc(step: &Value, what: &str, count: u64) -> String {
    format!("grid step {step}, {count} {what}")
}

/// Law checker with a fixed float tolerance.
#[derive(Debug, Clone, Copy, Default)]
pub struct Checker {
    pub tol: Tolerance,
}

impl Checker {
    pub fn new(tol: Tolerance) -> Self {
        Checker { tol }
    }

    fn le(&self, lhs: &Value, rhs: &Value) -> Result<bool> {
        lhs.le_tol(rhs, self.tol)
    }

    fn eq(&self, lhs: &Value, rhs: &Value) -> Result<bool> {
        lhs.eq_tol(rhs, self.tol)
    }

    /// Scans `(a, b, c)` with `a` outermost and `a + c ≤ 1`. The right side
    /// is clamped at 1, which cannot change the verdict since the left side
    /// is at most 1.
    pub fn check_condition_shift(&self, s: &Semicopula, grid_step: &Value) -> Result<CheckReport> {
        self.check_pointwise(LawId::Shift, &Bindings::new(s.clone()), grid_step)
    }

    /// `S_L(x, y) ≤ S(x, y)` over grid pairs.
    pub fn check_lukasiewicz_dominated(&self, s: &Semicopula, grid_step: &Value) -> Result<CheckReport> {
        self.check_pointwise(LawId::LukaDom, &Bindings::new(s.clone()), grid_step)
    }

    /// Scans `(x, y, z)` with `x` outermost and `x + y ≤ 1`.
    pub fn check_condition_three(
        &self,
        s1: &Semicopula,
        s2: &Semicopula,
        s3: &Semicopula,
        grid_step: &Value,
    ) -> Result<CheckReport> {
        let b = Bindings::three(s1.clone(), s2.clone(), s3.clone());
        self.check_pointwise(LawId::Three, &b, grid_step)
    }

    /// For each grid value `x`, evaluates both sides of the commuting law on
    /// `f = g = 1_A` with `μ(A) = x`; the sides are `x` and `x ∘ x`.
    pub fn check_idempotency(&self, op: &BinaryOp, s: &Semicopula, grid_step: &Value) -> Result<CheckReport> {
        self.check_pointwise(
            LawId::Idempotency,
            &Bindings::new(s.clone()).with_op(op.clone()),
            grid_step,
        )
    }

    /// Checks one pointwise case given as indices into `pts`.
    pub fn pointwise_case(&self, law: LawId, b: &Bindings, pts: &[Value], idx: &[u32]) -> Result<Option<Witness>> {
        let at = |k: usize| &pts[idx[k] as usize];
        match law {
            LawId::Shift => {
                let s = &b.s;
                let (a, bb, c) = (at(0), at(1), at(2));
                let Some(ca) = c.checked_add(a)? else {
                    return Err(Error::Domain("a + c exceeds 1".into()));
                };
                let lhs = s.eval(&ca, bb)?;
                let rhs = s.eval(c, bb)?.add_clamped(a)?;
                Ok((!self.le(&lhs, &rhs)?).then(|| {
                    Witness::pointwise(
                        vec![("a", a.clone()), ("b", bb.clone()), ("c", c.clone())],
                        lhs,
                        rhs,
                        format!("{0}(c + a, b) <= {0}(c, b) + a", s.name()),
                    )
                }))
            }
            LawId::Three => {
                let (x, y, z) = (at(0), at(1), at(2));
                let Some(xy) = x.checked_add(y)? else {
                    return Err(Error::Domain("x + y exceeds 1".into()));
                };
                let lhs = b.s.eval(&xy, z)?;
                let rhs = b.s2().eval(x, z)?.add_clamped(&b.s3().eval(y, z)?)?;
                Ok((!self.le(&lhs, &rhs)?).then(|| {
                    Witness::pointwise(
                        vec![("x", x.clone()), ("y", y.clone()), ("z", z.clone())],
                        lhs,
                        rhs,
                        format!(
                            "{}(x + y, z) <= {}(x, z) + {}(y, z)",
                            b.s.name(),
                            b.s2().name(),
                            b.s3().name()
                        ),
                    )
                }))
            }
            LawId::LukaDom => {
                let (x, y) = (at(0), at(1));
                let lhs = Semicopula::lukasiewicz().eval(x, y)?;
                let rhs = b.s.eval(x, y)?;
                Ok((!self.le(&lhs, &rhs)?).then(|| {
                    Witness::pointwise(
                        vec![("x", x.clone()), ("y", y.clone())],
                        lhs,
                        rhs,
                        format!("lukasiewicz(x, y) <= {}(x, y)", b.s.name()),
                    )
                }))
            }
            LawId::Idempotency => {
                let x = at(0);
                let op = b.op()?;
                let r = x.realization();
                let space = FiniteSpace::with_size(2)?;
                let a = Subset::singleton(0);
                let ind = SimpleFunction::indicator(space.clone(), a, r);
                let mu = validate_capacity(
                    RawCapacity::new(space.clone())
                        .set(Subset(1), x.clone())
                        .set(Subset(2), x.clone())
                        .set(space.full(), Value::one(r)),
                )?;
                let inst = Instance::new(mu, ind.clone()).with_g(ind);
                let (lhs, rhs) = self.commuting_sides(&b.s, op, &inst)?;
                if self.eq(&lhs, &rhs)? {
                    return Ok(None);
                }
                let mut w = Witness::pointwise(
                    vec![("x", x.clone())],
                    lhs,
                    rhs,
                    format!(
                        "I_{0}(mu, 1_A {1} 1_A) = I_{0}(mu, 1_A) {1} I_{0}(mu, 1_A) with mu(A) = x forces x {1} x = x",
                        b.s.name(),
                        op.name()
                    ),
                );
                w.instance = Some(inst);
                Ok(Some(w))
            }
            other => Err(Error::Domain(format!(
                "{other} is an integral-level law; use check_instance"
            ))),
        }
    }

    /// Evaluates `tuples` in order and returns the number of cases examined
    /// together with the first violation. Runs in parallel; the witness is
    /// always the lowest-index violation.
    pub fn scan_pointwise(
        &self,
        law: LawId,
        b: &Bindings,
        pts: &[Value],
        tuples: &[Vec<u32>],
    ) -> Result<(u64, Option<Witness>)> {
        let hit = tuples
            .par_iter()
            .enumerate()
            .map(|(i, t)| self.pointwise_case(law, b, pts, t).map(|w| w.map(|w| (i, w))))
            .filter_map(Result::transpose)
            .find_first(|_| true);
        match hit {
            None => Ok((tuples.len() as u64, None)),
            Some(Err(e)) => Err(e),
            Some(Ok((i, w))) => Ok((i as u64 + 1, Some(w))),
        }
    }

    fn single(
        &self,
        law: LawId,
        lhs: Value,
        rhs: Value,
        holds: bool,
        relation: String,
        inst: &Instance,
    ) -> CheckReport {
        if holds {
            return CheckReport::holds(law.as_str(), "single instance", 1);
        }
        let w = Witness {
            inputs: Vec::new(),
            sides: Some(Sides { lhs, rhs }),
            detail: relation,
            instance: Some(inst.clone()),
        };
        CheckReport::fails(law.as_str(), "single instance", 1, w)
    }

    /// `I_S(μ, f + a) ≤ I_S(μ, f) + a`; `f + a` must stay in `[0, 1]`.
    pub fn check_weak_subadditivity_instance(
        &self,
        s: &Semicopula,
        mu: &Capacity,
        f: &SimpleFunction,
        a: &Value,
    ) -> Result<CheckReport> {
        let shifted = f.shift(a)?;
        let lhs = eval_integral(s, mu, &shifted)?.value;
        let rhs = eval_integral(s, mu, f)?.value.add_clamped(a)?;
        let holds = self.le(&lhs, &rhs)?;
        let inst = Instance::new(mu.clone(), f.clone()).with_shift(a.clone());
        Ok(self.single(
            LawId::WeakSubadd,
            lhs,
            rhs,
            holds,
            format!("I_{0}(mu, f + a) <= I_{0}(mu, f) + a", s.name()),
            &inst,
        ))
    }

    #[allow(clippy::too_many_arguments)]
    fn restricted_sides(
        &self,
        s1: &Semicopula,
        s2: &Semicopula,
        s3: &Semicopula,
        mu: &Capacity,
        f: &SimpleFunction,
        a: &Value,
        set: Subset,
    ) -> Result<(Value, Value)> {
        let shifted = f.shift(a)?;
        let lhs = eval_integral_restricted(s1, mu, &shifted, set)?.value;
        let constant = SimpleFunction::constant(f.space().clone(), a.clone());
        let right_f = eval_integral_restricted(s2, mu, f, set)?.value;
        let right_a = eval_integral_restricted(s3, mu, &constant, set)?.value;
        Ok((lhs, right_f.add_clamped(&right_a)?))
    }

    /// `I_{S₁}(μ, (f + a)·1_A) ≤ I_{S₂}(μ, f·1_A) + I_{S₃}(μ, a·1_A)`
    #[allow(clippy::too_many_arguments)]
    pub fn check_restricted_subadditivity_instance(
        &self,
        s1: &Semicopula,
        s2: &Semicopula,
        s3: &Semicopula,
        mu: &Capacity,
        f: &SimpleFunction,
        a: &Value,
        set: Subset,
    ) -> Result<CheckReport> {
        let (lhs, rhs) = self.restricted_sides(s1, s2, s3, mu, f, a, set)?;
        let holds = self.le(&lhs, &rhs)?;
        let inst = Instance::new(mu.clone(), f.clone())
            .with_shift(a.clone())
            .with_subset(set);
        Ok(self.single(
            LawId::RestrictedSubadd,
            lhs,
            rhs,
            holds,
            format!(
                "I_{}(mu, (f + a)1_A) <= I_{}(mu, f 1_A) + I_{}(mu, a 1_A)",
                s1.name(),
                s2.name(),
                s3.name()
            ),
            &inst,
        ))
    }

    /// The corollary bounds: third integral `I_S`, `a ∧ μ(A)` or `a·μ(A)`.
    pub fn check_corollary_variant(
        &self,
        variant: CorollaryVariant,
        s: &Semicopula,
        mu: &Capacity,
        f: &SimpleFunction,
        a: &Value,
        set: Subset,
    ) -> Result<CheckReport> {
        let third = variant.third(s);
        let (lhs, rhs) = self.restricted_sides(s, s, &third, mu, f, a, set)?;
        let holds = self.le(&lhs, &rhs)?;
        let inst = Instance::new(mu.clone(), f.clone())
            .with_shift(a.clone())
            .with_subset(set);
        let bound = match variant {
            CorollaryVariant::A => format!("I_{}(mu, a 1_A)", s.name()),
            CorollaryVariant::B => "(a ∧ mu(A))".to_string(),
            CorollaryVariant::C => "a mu(A)".to_string(),
        };
        Ok(self.single(
            variant.law_id(),
            lhs,
            rhs,
            holds,
            format!("I_{0}(mu, (f + a)1_A) <= I_{0}(mu, f 1_A) + {bound}", s.name()),
            &inst,
        ))
    }

    fn require_comonotone(f: &SimpleFunction, g: &SimpleFunction) -> Result<()> {
        if !is_comonotone(f, g, f.space().full())? {
            return Err(Error::Domain("f and g are not comonotone".into()));
        }
        Ok(())
    }

    /// `I_S(μ, f ∨ g) = I_S(μ, f) ∨ I_S(μ, g)` for comonotone `f, g`.
    pub fn check_comonotone_maxitivity(
        &self,
        s: &Semicopula,
        mu: &Capacity,
        f: &SimpleFunction,
        g: &SimpleFunction,
    ) -> Result<CheckReport> {
        Self::require_comonotone(f, g)?;
        let lhs = eval_integral(s, mu, &f.join(g)?)?.value;
        let rhs = eval_integral(s, mu, f)?.value.join(&eval_integral(s, mu, g)?.value)?;
        let holds = self.eq(&lhs, &rhs)?;
        let inst = Instance::new(mu.clone(), f.clone()).with_g(g.clone());
        Ok(self.single(
            LawId::Maxitivity,
            lhs,
            rhs,
            holds,
            format!("I_{0}(mu, f ∨ g) = I_{0}(mu, f) ∨ I_{0}(mu, g)", s.name()),
            &inst,
        ))
    }

    fn commuting_sides(&self, s: &Semicopula, op: &BinaryOp, inst: &Instance) -> Result<(Value, Value)> {
        let mu = &inst.capacity;
        let g = inst.g()?;
        let combined = inst.f.combine(g, |x, y| op.eval(x, y))?;
        let lhs = eval_integral(s, mu, &combined)?.value;
        let rhs = op.eval(&eval_integral(s, mu, &inst.f)?.value, &eval_integral(s, mu, g)?.value)?;
        Ok((lhs, rhs))
    }

    /// `I_S(μ, f ∘ g) = I_S(μ, f) ∘ I_S(μ, g)` for comonotone `f, g`.
    pub fn check_commuting_instance(
        &self,
        s: &Semicopula,
        op: &BinaryOp,
        mu: &Capacity,
        f: &SimpleFunction,
        g: &SimpleFunction,
    ) -> Result<CheckReport> {
        Self::require_comonotone(f, g)?;
        let inst = Instance::new(mu.clone(), f.clone()).with_g(g.clone());
        let (lhs, rhs) = self.commuting_sides(s, op, &inst)?;
        let holds = self.eq(&lhs, &rhs)?;
        Ok(self.single(
            LawId::Commuting,
            lhs,
            rhs,
            holds,
            format!(
                "I_{0}(mu, f {1} g) = I_{0}(mu, f) {1} I_{0}(mu, g)",
                s.name(),
                op.name()
            ),
            &inst,
        ))
    }

    /// Dispatches an integral-level law on one instance. This is the replay
    /// entry point for serialized witnesses.
    pub fn check_instance(&self, law: LawId, b: &Bindings, inst: &Instance) -> Result<CheckReport> {
        let mu = &inst.capacity;
        let f = &inst.f;
        match law {
            LawId::WeakSubadd => self.check_weak_subadditivity_instance(&b.s, mu, f, inst.shift()?),
            LawId::RestrictedSubadd => {
                self.check_restricted_subadditivity_instance(&b.s, b.s2(), b.s3(), mu, f, inst.shift()?, inst.subset())
            }
            LawId::CorA => self.check_corollary_variant(CorollaryVariant::A, &b.s, mu, f, inst.shift()?, inst.subset()),
            LawId::CorB => self.check_corollary_variant(CorollaryVariant::B, &b.s, mu, f, inst.shift()?, inst.subset()),
            LawId::CorC => self.check_corollary_variant(CorollaryVariant::C, &b.s, mu, f, inst.shift()?, inst.subset()),
            LawId::Maxitivity => self.check_comonotone_maxitivity(&b.s, mu, f, inst.g()?),
            LawId::Commuting => self.check_commuting_instance(&b.s, b.op()?, mu, f, inst.g()?),
            LawId::Shift | LawId::Three | LawId::LukaDom | LawId::Idempotency => {
                Err(Error::Domain(format!("{law} is a pointwise law; use check_pointwise")))
            }
        }
    }

    /// Dispatches a pointwise law over every admissible tuple of the grid.
    pub fn check_pointwise(&self, law: LawId, b: &Bindings, grid_step: &Value) -> Result<CheckReport> {
        if law.needs_op() {
            b.op()?;
        }
        let pts = grid(grid_step)?;
        let tuples = admissible_tuples(law, &pts)?;
        let what = match law {
            LawId::Shift | LawId::Three => "triples",
            LawId::LukaDom => "pairs",
            _ => "values",
        };
        let (n, w) = self.scan_pointwise(law, b, &pts, &tuples)?;
        Ok(CheckReport::from_witness(
            law.as_str(),
            grid_desc(grid_step, what, n),
            n,
            w,
        ))
    }

    /// Runs an integral-level law on `cases` random instances drawn from
    /// `seed` (capacities on `1..=max_points` points, rationals with
    /// denominator ≤ 64). Reports the lowest-index failure.
    pub fn run_random_suite(
        &self,
        law: LawId,
        b: &Bindings,
        cases: u64,
        seed: u64,
        max_points: usize,
    ) -> Result<CheckReport> {
        if law.is_pointwise() {
            return Err(Error::Domain(format!("{law} is a pointwise law")));
        }
        if !b.supports(Realization::Exact) {
            return Err(Error::UnsupportedRealization(
                "random suites run in exact realization; user-defined operators".into(),
            ));
        }
        let max_points = max_points.clamp(1, 6);
        let hit = (0..cases).into_par_iter().map(|i| {
            let inst = random_instance(law, seed, i, max_points)?;
            let report = self.check_instance(law, b, &inst)?;
            Ok(report.witness.map(|w| (i, w)))
        });
        let first: Option<Result<(u64, Witness)>> = hit
            .filter_map(|r: Result<Option<(u64, Witness)>>| r.transpose())
            .find_first(|_| true);
        let desc = format!("{cases} random cases, seed {seed}, n <= {max_points}");
        match first {
            None => Ok(CheckReport::holds(law.as_str(), desc, cases)),
            Some(Err(e)) => Err(e),
            Some(Ok((i, w))) => Ok(CheckReport::fails(law.as_str(), desc, i + 1, w)),
        }
    }
}

/// Random case `index` of a suite: capacity mode and size vary with the
/// index, values are rationals with denominator ≤ 64.
pub fn random_instance(law: LawId, seed: u64, index: u64, max_points: usize) -> Result<Instance> {
    let mut rng = case_rng(seed, index);
    let n = 1 + (index as usize % max_points);
    let space = FiniteSpace::with_size(n)?;
    let mode = match index % 5 {
        3 => CapacityMode::Additive,
        4 => CapacityMode::Possibility,
        _ => CapacityMode::General,
    };
    let mu = random_capacity_with(&space, mode, &mut rng);
    if law.needs_pair() {
        let (f, g) = random_comonotone_pair_with(&space, &mut rng, |r| random_rational(r, MAX_DENOMINATOR));
        return Ok(Instance::new(mu, f).with_g(g));
    }
    let a = random_rational(&mut rng, MAX_DENOMINATOR);
    let room = a.complement();
    let f = random_function_with(&space, &mut rng, |r| random_rational_below(r, &room, MAX_DENOMINATOR));
    let mut inst = Instance::new(mu, f).with_shift(a);
    if law.needs_subset() {
        let mask = rng.gen_range(0..space.subset_count() as u32);
        inst = inst.with_subset(Subset(mask));
    }
    Ok(inst)
}

/// Admissible index tuples of a pointwise law over `pts`, in lexicographic
/// order: `(a, b, c)` with `a + c ≤ 1` for the shift condition, `(x, y, z)`
/// with `x + y ≤ 1` for the three-semicopula condition, all pairs for
/// Łukasiewicz domination and all values for idempotency.
pub fn admissible_tuples(law: LawId, pts: &[Value]) -> Result<Vec<Vec<u32>>> {
    let m = pts.len() as u32;
    let mut sums_ok = vec![vec![false; pts.len()]; pts.len()];
    if matches!(law, LawId::Shift | LawId::Three) {
        for (i, x) in pts.iter().enumerate() {
            for (j, y) in pts.iter().enumerate() {
                sums_ok[i][j] = x.checked_add(y)?.is_some();
            }
        }
    }
    let mut out = Vec::new();
    match law {
        LawId::Shift => {
            for a in 0..m {
                for b in 0..m {
                    for c in 0..m {
                        if sums_ok[a as usize][c as usize] {
                            out.push(vec![a, b, c]);
                        }
                    }
                }
            }
        }
        LawId::Three => {
            for x in 0..m {
                for y in 0..m {
                    if sums_ok[x as usize][y as usize] {
                        out.extend((0..m).map(|z| vec![x, y, z]));
                    }
                }
            }
        }
        LawId::LukaDom => {
            for x in 0..m {
                out.extend((0..m).map(|y| vec![x, y]));
            }
        }
        LawId::Idempotency => out.extend((0..m).map(|x| vec![x])),
        other => return Err(Error::Domain(format!("{other} is not a pointwise law"))),
    }
    Ok(out)
}
