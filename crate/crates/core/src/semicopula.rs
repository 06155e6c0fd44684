//! Semicopulas, their t-coseminorm duals, general binary operators and a
//! grid-based axiom auditor.

use std::fmt;
use std::sync::Arc;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::report::{CheckReport, Witness};
use crate::scalar::{grid, Realization, Tolerance, Value};

pub type FloatFn = Arc<dyn Fn(f64, f64) -> f64 + Send + Sync>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SemicopulaKind {
    /// `M(x, y) = x ∧ y`
    Min,
    /// `Π(x, y) = x·y`
    Product,
    /// `S_L(x, y) = (x + y − 1) ∨ 0`
    Lukasiewicz,
    /// `x ∧ y` if `x ∨ y = 1`, else 0
    Drastic,
    UserDefined,
}

/// A binary operation on `[0, 1]` with neutral element 1 that is
/// non-decreasing in both arguments.
#[derive(Clone)]
pub struct Semicopula {
    kind: SemicopulaKind,
    name: String,
    user: Option<FloatFn>,
}

impl fmt::Debug for Semicopula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Semicopula")
            .field("kind", &self.kind)
            .field("name", &self.name)
            .finish()
    }
}

impl Semicopula {
    fn builtin(kind: SemicopulaKind, name: &str) -> Self {
        Semicopula {
            kind,
            name: name.to_string(),
            user: None,
        }
    }

    pub fn min() -> Self {
        Self::builtin(SemicopulaKind::Min, "min")
    }

    pub fn product() -> Self {
        Self::builtin(SemicopulaKind::Product, "prod")
    }

    pub fn lukasiewicz() -> Self {
        Self::builtin(SemicopulaKind::Lukasiewicz, "lukasiewicz")
    }

    pub fn drastic() -> Self {
        Self::builtin(SemicopulaKind::Drastic, "drastic")
    }

    /// The four builtins in a fixed order: min, prod, lukasiewicz, drastic.
    pub fn builtins() -> [Semicopula; 4] {
        [Self::min(), Self::product(), Self::lukasiewicz(), Self::drastic()]
    }

    /// A caller-supplied evaluator. Float realization only; the axioms are not
    /// checked here (see [`audit_axioms`]).
    pub fn user_defined<F>(name: impl Into<String>, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        Semicopula {
            kind: SemicopulaKind::UserDefined,
            name: name.into(),
            user: Some(Arc::new(f)),
        }
    }

    /// Builtin names: `min`, `prod`, `lukasiewicz`, `drastic`.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "min" | "M" => Ok(Self::min()),
            "prod" | "product" | "Pi" => Ok(Self::product()),
            "lukasiewicz" | "luk" | "SL" => Ok(Self::lukasiewicz()),
            "drastic" | "SD" => Ok(Self::drastic()),
            other => Err(Error::UnknownOperator(other.to_string())),
        }
    }

    pub fn kind(&self) -> SemicopulaKind {
        self.kind
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn is_builtin(&self) -> bool {
        self.kind != SemicopulaKind::UserDefined
    }

    pub fn supports(&self, r: Realization) -> bool {
        self.is_builtin() || r == Realization::Float
    }

    pub fn eval(&self, x: &Value, y: &Value) -> Result<Value> {
        if x.realization() != y.realization() {
            return Err(Error::RealizationMismatch);
        }
        match self.kind {
            SemicopulaKind::Min => x.meet(y),
            SemicopulaKind::Product => x.mul(y),
            SemicopulaKind::Lukasiewicz => x.sub_floored(&y.complement()),
            SemicopulaKind::Drastic => {
                if x.is_one() {
                    Ok(y.clone())
                } else if y.is_one() {
                    Ok(x.clone())
                } else {
                    Ok(Value::zero(x.realization()))
                }
            }
            SemicopulaKind::UserDefined => match (x, y) {
                (Value::Float(a), Value::Float(b)) => {
                    let f = self.user.as_ref().expect("user-defined semicopula has an evaluator");
                    Value::float(f(*a, *b))
                }
                _ => Err(Error::UnsupportedRealization(self.name.clone())),
            },
        }
    }
}

/// `S(x, y)`
pub fn s_eval(s: &Semicopula, x: &Value, y: &Value) -> Result<Value> {
    s.eval(x, y)
}

/// What a [`BinaryOp`] claims to be. The claim is not verified.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ClaimedClass {
    Semicopula,
    TCoseminorm,
    Unconstrained,
}

#[derive(Clone)]
enum OpForm {
    Semicopula(Semicopula),
    Dual(Semicopula),
    Mean,
    Custom(FloatFn),
}

/// An operator `∘: [0,1]² → [0,1]`.
#[derive(Clone)]
pub struct BinaryOp {
    name: String,
    form: OpForm,
    claimed_class: ClaimedClass,
}

impl fmt::Debug for BinaryOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("BinaryOp")
            .field("name", &self.name)
            .field("claimed_class", &self.claimed_class)
            .finish()
    }
}

impl BinaryOp {
    pub fn from_semicopula(s: Semicopula) -> Self {
        BinaryOp {
            name: s.name().to_string(),
            form: OpForm::Semicopula(s),
            claimed_class: ClaimedClass::Semicopula,
        }
    }

    /// `∧`, i.e. the semicopula `M` viewed as an operator.
    pub fn meet() -> Self {
        BinaryOp {
            name: "meet".into(),
            ..Self::from_semicopula(Semicopula::min())
        }
    }

    /// `∨`, the t-coseminorm dual of `M`.
    pub fn join() -> Self {
        BinaryOp {
            name: "join".into(),
            ..coseminorm_of(&Semicopula::min())
        }
    }

    /// Arithmetic mean; not a semicopula.
    pub fn mean() -> Self {
        BinaryOp {
            name: "mean".into(),
            form: OpForm::Mean,
            claimed_class: ClaimedClass::Unconstrained,
        }
    }

    pub fn custom<F>(name: impl Into<String>, claimed_class: ClaimedClass, f: F) -> Self
    where
        F: Fn(f64, f64) -> f64 + Send + Sync + 'static,
    {
        BinaryOp {
            name: name.into(),
            form: OpForm::Custom(Arc::new(f)),
            claimed_class,
        }
    }

    /// `meet`, `join` (aliases `max`), `mean`, any semicopula name, or
    /// `co:<semicopula>` for a dual.
    pub fn from_name(name: &str) -> Result<Self> {
        match name {
            "meet" | "min" => Ok(Self::meet()),
            "join" | "max" => Ok(Self::join()),
            "mean" => Ok(Self::mean()),
            _ => {
                if let Some(inner) = name.strip_prefix("co:") {
                    Ok(coseminorm_of(&Semicopula::from_name(inner)?))
                } else {
                    Ok(Self::from_semicopula(Semicopula::from_name(name)?))
                }
            }
        }
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn claimed_class(&self) -> ClaimedClass {
        self.claimed_class
    }

    pub fn supports(&self, r: Realization) -> bool {
        match &self.form {
            OpForm::Semicopula(s) | OpForm::Dual(s) => s.supports(r),
            OpForm::Mean => true,
            OpForm::Custom(_) => r == Realization::Float,
        }
    }

    pub fn eval(&self, x: &Value, y: &Value) -> Result<Value> {
        match &self.form {
            OpForm::Semicopula(s) => s.eval(x, y),
            OpForm::Dual(s) => Ok(s.eval(&x.complement(), &y.complement())?.complement()),
            OpForm::Mean => x.midpoint(y),
            OpForm::Custom(f) => match (x, y) {
                (Value::Float(a), Value::Float(b)) => Value::float(f(*a, *b)),
                (Value::Exact(_), Value::Exact(_)) => Err(Error::UnsupportedRealization(self.name.clone())),
                _ => Err(Error::RealizationMismatch),
            },
        }
    }
}

/// `S*(x, y) = 1 − S(1 − x, 1 − y)`
pub fn coseminorm_of(s: &Semicopula) -> BinaryOp {
    BinaryOp {
        name: format!("co:{}", s.name()),
        form: OpForm::Dual(s.clone()),
        claimed_class: ClaimedClass::TCoseminorm,
    }
}

/// Audits range, neutrality of 1 and coordinatewise monotonicity of `op` on
/// the uniform grid. Pairs are scanned in lexicographic `(x, y)` order and the
/// first violation is reported.
pub fn audit_axioms(op: &BinaryOp, grid_step: &Value) -> Result<CheckReport> {
    audit_axioms_with(op, grid_step, Tolerance::DEFAULT)
}

pub fn audit_axioms_with(op: &BinaryOp, grid_step: &Value, tol: Tolerance) -> Result<CheckReport> {
    let pts = grid(grid_step)?;
    let n = pts.len();
    let sample = format!("grid step {}, {} pairs", grid_step, n * n);
    let table: Vec<Vec<Result<Value>>> = pts
        .par_iter()
        .map(|x| pts.iter().map(|y| op.eval(x, y)).collect())
        .collect();

    let mut checked = 0u64;
    for i in 0..n {
        for j in 0..n {
            checked += 1;
            let (x, y) = (&pts[i], &pts[j]);
            let v = match &table[i][j] {
                Ok(v) => v,
                Err(Error::OutOfRange(raw)) => {
                    let w = Witness {
                        inputs: vec![("x".into(), x.clone()), ("y".into(), y.clone())],
                        sides: None,
                        detail: format!("range: op(x, y) = {raw} lies outside [0, 1]"),
                        instance: None,
                    };
                    return Ok(CheckReport::fails("axioms", sample, checked, w));
                }
                Err(e) => return Err(e.clone()),
            };
            let fail = |lhs: &Value, rhs: &Value, detail: &str| {
                let w = Witness::pointwise(
                    vec![("x", x.clone()), ("y", y.clone())],
                    lhs.clone(),
                    rhs.clone(),
                    detail,
                );
                Ok(CheckReport::fails("axioms", sample.clone(), checked, w))
            };
            if y.is_one() && !v.eq_tol(x, tol)? {
                return fail(v, x, "neutrality: op(x, 1) = x");
            }
            if x.is_one() && !v.eq_tol(y, tol)? {
                return fail(v, y, "neutrality: op(1, y) = y");
            }
            if i + 1 < n {
                if let Ok(next) = &table[i + 1][j] {
                    if !v.le_tol(next, tol)? {
                        return fail(v, next, "monotonicity in x: op(x, y) <= op(x + step, y)");
                    }
                }
            }
            if j + 1 < n {
                if let Ok(next) = &table[i][j + 1] {
                    if !v.le_tol(next, tol)? {
                        return fail(v, next, "monotonicity in y: op(x, y) <= op(x, y + step)");
                    }
                }
            }
        }
    }
    Ok(CheckReport::holds("axioms", sample, checked))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::report::Verdict;

    fn q(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn builtin_formulas() {
        let p = Semicopula::product();
        assert_eq!(p.eval(&q("1"), &q("0.5")).unwrap(), q("1/2"));
        assert_eq!(Semicopula::lukasiewicz().eval(&q("0.7"), &q("0.6")).unwrap(), q("3/10"));
        assert_eq!(Semicopula::lukasiewicz().eval(&q("0.2"), &q("0.6")).unwrap(), q("0"));
        assert_eq!(Semicopula::drastic().eval(&q("0.8"), &q("0.9")).unwrap(), q("0"));
        assert_eq!(Semicopula::drastic().eval(&q("1"), &q("0.9")).unwrap(), q("9/10"));
        for s in Semicopula::builtins() {
            assert_eq!(s.eval(&q("3/7"), &q("1")).unwrap(), q("3/7"), "{}", s.name());
            assert_eq!(s.eval(&q("1"), &q("3/7")).unwrap(), q("3/7"), "{}", s.name());
        }
    }

    #[test]
    fn lukasiewicz_brute_force_cross_check() {
        // (0.7 + 0.6 - 1) ∨ 0 in floats against the exact builtin
        let exact = Semicopula::lukasiewicz().eval(&q("7/10"), &q("6/10")).unwrap();
        let brute = (0.7f64 + 0.6 - 1.0).max(0.0);
        assert!((exact.to_f64() - brute).abs() < 1e-12);
    }

    #[test]
    fn user_defined_is_float_only() {
        let s = Semicopula::user_defined("prod2", |x, y| x * y);
        assert_eq!(
            s.eval(&q("1/2"), &q("1/2")),
            Err(Error::UnsupportedRealization("prod2".into()))
        );
        let v = s
            .eval(&Value::float(0.5).unwrap(), &Value::float(0.5).unwrap())
            .unwrap();
        assert_eq!(v.to_f64(), 0.25);
        assert!(!s.supports(Realization::Exact));
    }

    #[test]
    fn names() {
        for n in ["min", "prod", "lukasiewicz", "drastic"] {
            assert_eq!(Semicopula::from_name(n).unwrap().name(), n);
        }
        assert!(Semicopula::from_name("hamacher").is_err());
        assert_eq!(
            BinaryOp::from_name("co:prod").unwrap().claimed_class(),
            ClaimedClass::TCoseminorm
        );
        assert!(BinaryOp::from_name("co:nope").is_err());
    }

    #[test]
    fn coseminorm_examples() {
        let co_m = coseminorm_of(&Semicopula::min());
        assert_eq!(co_m.eval(&q("0.3"), &q("0.7")).unwrap(), q("7/10"));
        let co_p = coseminorm_of(&Semicopula::product());
        assert_eq!(co_p.eval(&q("0.5"), &q("0.5")).unwrap(), q("3/4"));
        for s in Semicopula::builtins() {
            let co = coseminorm_of(&s);
            assert_eq!(co.eval(&q("2/9"), &q("0")).unwrap(), q("2/9"));
            assert_eq!(co.claimed_class(), ClaimedClass::TCoseminorm);
        }
        assert_eq!(BinaryOp::join().eval(&q("1/5"), &q("3/5")).unwrap(), q("3/5"));
    }

    #[test]
    fn product_audits_clean() {
        let r = audit_axioms(&BinaryOp::from_semicopula(Semicopula::product()), &q("1/100")).unwrap();
        assert_eq!(r.verdict, Verdict::HoldsOnSample);
        assert_eq!(r.cases_checked, 101 * 101);
    }

    #[test]
    fn drastic_audits_clean() {
        let r = audit_axioms(&BinaryOp::from_semicopula(Semicopula::drastic()), &q("1/10")).unwrap();
        assert!(r.holds_on_sample());
    }

    #[test]
    fn mean_fails_neutrality() {
        let r = audit_axioms(&BinaryOp::mean(), &q("1/2")).unwrap();
        assert_eq!(r.verdict, Verdict::Fails);
        let w = r.witness.unwrap();
        assert!(w.detail.starts_with("neutrality"));
        // lexicographically first violating pair is (0, 1): op = 1/2, expected 0
        assert_eq!(w.tuple(), vec![q("0"), q("1")]);
        let sides = w.sides.unwrap();
        assert_eq!((sides.lhs, sides.rhs), (q("1/2"), q("0")));
        // (1/2, 1) also breaks neutrality: 3/4 != 1/2
        assert_eq!(BinaryOp::mean().eval(&q("1/2"), &q("1")).unwrap(), q("3/4"));
    }

    #[test]
    fn audit_flags_range_and_monotonicity() {
        let over = BinaryOp::custom("over", ClaimedClass::Unconstrained, |x, y| x + y);
        let r = audit_axioms(&over, &Value::float(0.5).unwrap()).unwrap();
        let w = r.witness.unwrap();
        assert!(w.detail.starts_with("neutrality"), "{}", w.detail);

        let big = BinaryOp::custom("big", ClaimedClass::Unconstrained, |_, _| 2.0);
        let r = audit_axioms(&big, &Value::float(0.5).unwrap()).unwrap();
        let w = r.witness.unwrap();
        assert!(w.detail.starts_with("range"));
        assert!(w.sides.is_none());

        // neutral but decreasing in the interior
        let bump = BinaryOp::custom("bump", ClaimedClass::Unconstrained, |x, y| {
            if x == 1.0 {
                y
            } else if y == 1.0 {
                x
            } else if x == 0.0 || y == 0.0 {
                0.0
            } else {
                (0.5 - x * y).max(0.0)
            }
        });
        let r = audit_axioms(&bump, &Value::float(0.25).unwrap()).unwrap();
        assert!(r.witness.unwrap().detail.starts_with("monotonicity"));
    }

    #[test]
    fn duality_is_an_involution_on_the_grid() {
        for s in Semicopula::builtins() {
            let co = coseminorm_of(&s);
            for x in grid(&q("1/20")).unwrap() {
                for y in grid(&q("1/20")).unwrap() {
                    // (S*)*(x, y) = 1 − S*(1 − x, 1 − y)
                    let back = co.eval(&x.complement(), &y.complement()).unwrap().complement();
                    assert_eq!(back, s.eval(&x, &y).unwrap());
                }
            }
        }
    }

    #[test]
    fn builtin_ordering_and_bounds() {
        let pts = grid(&q("1/50")).unwrap();
        let [m, p, l, d] = Semicopula::builtins();
        for x in &pts {
            for y in &pts {
                let (mv, pv, lv, dv) = (
                    m.eval(x, y).unwrap(),
                    p.eval(x, y).unwrap(),
                    l.eval(x, y).unwrap(),
                    d.eval(x, y).unwrap(),
                );
                assert!(lv <= pv && pv <= mv);
                assert!(dv <= mv);
                let zero = q("0");
                for s in Semicopula::builtins() {
                    let v = s.eval(x, y).unwrap();
                    assert!(v <= x.meet(y).unwrap());
                    assert_eq!(s.eval(x, &zero).unwrap(), zero);
                    assert_eq!(s.eval(&zero, y).unwrap(), zero);
                }
            }
        }
        // drastic does not dominate Łukasiewicz
        assert_eq!(l.eval(&q("0.8"), &q("0.9")).unwrap(), q("7/10"));
        assert_eq!(d.eval(&q("0.8"), &q("0.9")).unwrap(), q("0"));
    }
}
