//! The scalar domain `[0, 1]`.
//!
//! A [`Value`] is either an exact rational in lowest terms or a binary float.
//! Every constructor and every operation keeps the result inside `[0, 1]`;
//! combining the two realizations is an error rather than a silent coercion.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Which arithmetic a value (and every computation touching it) uses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Realization {
    Exact,
    Float,
}

impl fmt::Display for Realization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Realization::Exact => "exact",
            Realization::Float => "float",
        })
    }
}

impl FromStr for Realization {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "exact" => Ok(Realization::Exact),
            "float" => Ok(Realization::Float),
            other => Err(Error::Parse {
                input: other.to_string(),
                reason: "expected \"exact\" or \"float\"".into(),
            }),
        }
    }
}

/// Absolute tolerance for float comparisons. Exact values ignore it.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance(pub f64);

impl Tolerance {
    pub const DEFAULT: Tolerance = Tolerance(1e-9);
}

impl Default for Tolerance {
    fn default() -> Self {
        Tolerance::DEFAULT
    }
}

/// A number in `[0, 1]`.
#[derive(Debug, Clone)]
pub enum Value {
    Exact(BigRational),
    Float(f64),
}

fn in_unit(q: &BigRational) -> bool {
    !q.is_negative() && *q <= BigRational::one()
}

impl Value {
    pub fn exact(q: BigRational) -> Result<Self> {
        if in_unit(&q) {
            Ok(Value::Exact(q))
        } else {
            Err(Error::OutOfRange(q.to_string()))
        }
    }

    /// Exact `p/q`.
    pub fn ratio(p: i64, q: i64) -> Result<Self> {
        if q == 0 {
            return Err(Error::Parse {
                input: format!("{p}/{q}"),
                reason: "zero denominator".into(),
            });
        }
        Value::exact(BigRational::new(BigInt::from(p), BigInt::from(q)))
    }

    pub fn float(x: f64) -> Result<Self> {
        if x.is_finite() && (0.0..=1.0).contains(&x) {
            // normalizes -0.0
            Ok(Value::Float(x + 0.0))
        } else {
            Err(Error::OutOfRange(x.to_string()))
        }
    }

    pub fn zero(r: Realization) -> Self {
        match r {
            Realization::Exact => Value::Exact(BigRational::zero()),
            Realization::Float => Value::Float(0.0),
        }
    }

    pub fn one(r: Realization) -> Self {
        match r {
            Realization::Exact => Value::Exact(BigRational::one()),
            Realization::Float => Value::Float(1.0),
        }
    }

    pub fn realization(&self) -> Realization {
        match self {
            Value::Exact(_) => Realization::Exact,
            Value::Float(_) => Realization::Float,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_zero(),
            Value::Float(x) => *x == 0.0,
        }
    }

    pub fn is_one(&self) -> bool {
        match self {
            Value::Exact(q) => q.is_one(),
            Value::Float(x) => *x == 1.0,
        }
    }

    pub fn as_rational(&self) -> Option<&BigRational> {
        match self {
            Value::Exact(q) => Some(q),
            Value::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Value::Exact(q) => q.to_f64().unwrap_or(f64::NAN),
            Value::Float(x) => *x,
        }
    }

    /// Explicit conversion between realizations. Floats convert to the exact
    /// binary rational they denote.
    pub fn to_realization(&self, r: Realization) -> Value {
        match (self, r) {
            (Value::Exact(_), Realization::Exact) | (Value::Float(_), Realization::Float) => self.clone(),
            (Value::Exact(q), Realization::Float) => Value::Float(q.to_f64().unwrap_or(0.0).clamp(0.0, 1.0)),
            (Value::Float(x), Realization::Exact) => {
                Value::Exact(BigRational::from_float(*x).unwrap_or_else(BigRational::zero))
            }
        }
    }

    /// Parses `p/q`, a decimal, or an integer. Decimals convert exactly in
    /// the exact realization (`0.4` is `2/5`).
    pub fn parse(s: &str, r: Realization) -> Result<Self> {
        let s = s.trim();
        let fail = |reason: &str| Error::Parse {
            input: s.to_string(),
            reason: reason.to_string(),
        };
        match r {
            Realization::Exact => Value::exact(parse_rational(s).ok_or_else(|| fail("not a rational"))?),
            Realization::Float => {
                if let Some((p, q)) = s.split_once('/') {
                    let p: f64 = p.trim().parse().map_err(|_| fail("bad numerator"))?;
                    let q: f64 = q.trim().parse().map_err(|_| fail("bad denominator"))?;
                    if q == 0.0 {
                        return Err(fail("zero denominator"));
                    }
                    Value::float(p / q)
                } else {
                    Value::float(s.parse().map_err(|_| fail("not a number"))?)
                }
            }
        }
    }

    /// `p/q` for exact values (plain integer when `q = 1`), shortest
    /// round-trip decimal for floats.
    pub fn render(&self) -> String {
        self.to_string()
    }

    fn pair<'a>(&'a self, other: &'a Value) -> Result<Pair<'a>> {
        match (self, other) {
            (Value::Exact(a), Value::Exact(b)) => Ok(Pair::Exact(a, b)),
            (Value::Float(a), Value::Float(b)) => Ok(Pair::Float(*a, *b)),
            _ => Err(Error::RealizationMismatch),
        }
    }

    pub fn try_cmp(&self, other: &Value) -> Result<Ordering> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => a.cmp(b),
            Pair::Float(a, b) => a.total_cmp(&b),
        })
    }

    /// `x ∨ y`
    pub fn join(&self, other: &Value) -> Result<Value> {
        Ok(match self.try_cmp(other)? {
            Ordering::Less => other.clone(),
            _ => self.clone(),
        })
    }

    /// `x ∧ y`
    pub fn meet(&self, other: &Value) -> Result<Value> {
        Ok(match self.try_cmp(other)? {
            Ordering::Greater => other.clone(),
            _ => self.clone(),
        })
    }

    /// `(x + y) ∧ 1`
    pub fn add_clamped(&self, other: &Value) -> Result<Value> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => {
                let s = a + b;
                Value::Exact(if s > BigRational::one() { BigRational::one() } else { s })
            }
            Pair::Float(a, b) => Value::Float((a + b).min(1.0)),
        })
    }

    /// `(x − y) ∨ 0`
    pub fn sub_floored(&self, other: &Value) -> Result<Value> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => {
                let d = a - b;
                Value::Exact(if d.is_negative() { BigRational::zero() } else { d })
            }
            Pair::Float(a, b) => Value::Float((a - b).max(0.0)),
        })
    }

    /// `x + y` when the sum stays in `[0, 1]`, `None` otherwise.
    pub fn checked_add(&self, other: &Value) -> Result<Option<Value>> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => {
                let s = a + b;
                in_unit(&s).then_some(Value::Exact(s))
            }
            Pair::Float(a, b) => {
                let s = a + b;
                (s <= 1.0).then_some(Value::Float(s))
            }
        })
    }

    /// `x · y`
    pub fn mul(&self, other: &Value) -> Result<Value> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => Value::Exact(a * b),
            Pair::Float(a, b) => Value::Float(a * b),
        })
    }

    /// `(x + y) / 2`
    pub fn midpoint(&self, other: &Value) -> Result<Value> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => Value::Exact((a + b) / BigInt::from(2)),
            Pair::Float(a, b) => Value::Float((a + b) / 2.0),
        })
    }

    /// `1 − x`
    pub fn complement(&self) -> Value {
        match self {
            Value::Exact(q) => Value::Exact(BigRational::one() - q),
            Value::Float(x) => Value::Float(1.0 - x),
        }
    }

    /// `self ≤ other`, up to `tol` for floats.
    pub fn le_tol(&self, other: &Value, tol: Tolerance) -> Result<bool> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => a <= b,
            Pair::Float(a, b) => a <= b + tol.0,
        })
    }

    /// `self = other`, up to `tol` for floats.
    pub fn eq_tol(&self, other: &Value, tol: Tolerance) -> Result<bool> {
        Ok(match self.pair(other)? {
            Pair::Exact(a, b) => a == b,
            Pair::Float(a, b) => (a - b).abs() <= tol.0,
        })
    }
}

enum Pair<'a> {
    Exact(&'a BigRational, &'a BigRational),
    Float(f64, f64),
}

fn parse_rational(s: &str) -> Option<BigRational> {
    if let Some((p, q)) = s.split_once('/') {
        let p: BigInt = p.trim().parse().ok()?;
        let q: BigInt = q.trim().parse().ok()?;
        if q.is_zero() {
            return None;
        }
        return Some(BigRational::new(p, q));
    }
    let (int, frac) = match s.split_once('.') {
        Some((i, f)) => (i, f),
        None => (s, ""),
    };
    if int.is_empty() && frac.is_empty() {
        return None;
    }
    if !frac.chars().all(|c| c.is_ascii_digit()) {
        return None;
    }
    let int_part: BigInt = if int.is_empty() || int == "+" {
        BigInt::zero()
    } else {
        int.parse().ok()?
    };
    let negative = int.starts_with('-');
    let scale = BigInt::from(10u32).pow(frac.len() as u32);
    let frac_part: BigInt = if frac.is_empty() {
        BigInt::zero()
    } else {
        frac.parse().ok()?
    };
    let frac_part = if negative { -frac_part } else { frac_part };
    Some(BigRational::new(int_part * &scale + frac_part, scale))
}

impl FromStr for Value {
    type Err = Error;

    /// Parses in the exact realization.
    fn from_str(s: &str) -> Result<Self> {
        Value::parse(s, Realization::Exact)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Exact(q) => write!(f, "{q}"),
            Value::Float(x) => write!(f, "{x}"),
        }
    }
}

/// Equal only within one realization; `Exact(1/2) != Float(0.5)`.
impl PartialEq for Value {
    fn eq(&self, other: &Self) -> bool {
        matches!(self.try_cmp(other), Ok(Ordering::Equal))
    }
}

impl PartialOrd for Value {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        self.try_cmp(other).ok()
    }
}

/// `{0, step, 2·step, …}` up to and including 1 (1 is appended when the
/// step does not divide it).
pub fn grid(step: &Value) -> Result<Vec<Value>> {
    let half = match step.realization() {
        Realization::Exact => Value::ratio(1, 2)?,
        Realization::Float => Value::Float(0.5),
    };
    if step.is_zero() || step.try_cmp(&half)? == Ordering::Greater {
        return Err(Error::InvalidGridStep(step.render()));
    }
    match step {
        Value::Exact(q) => {
            let mut out = Vec::new();
            let mut k = BigInt::zero();
            loop {
                let p = q * BigRational::from_integer(k.clone());
                if p > BigRational::one() {
                    break;
                }
                out.push(Value::Exact(p));
                k += 1;
            }
            if !out.last().is_some_and(Value::is_one) {
                out.push(Value::Exact(BigRational::one()));
            }
            Ok(out)
        }
        Value::Float(h) => {
            let n = (1.0 / h).round();
            let mut out = Vec::new();
            if (n * h - 1.0).abs() < 1e-12 {
                let n = n as u64;
                out.extend((0..=n).map(|k| Value::Float(k as f64 / n as f64)));
            } else {
                let mut k = 0u64;
                while (k as f64) * h <= 1.0 {
                    out.push(Value::Float(k as f64 * h));
                    k += 1;
                }
                if !out.last().is_some_and(Value::is_one) {
                    out.push(Value::Float(1.0));
                }
            }
            Ok(out)
        }
    }
}

/// `{0, 1/d, …, 1}`
pub fn denominator_grid(d: u32, r: Realization) -> Vec<Value> {
    (0..=d)
        .map(|k| match r {
            Realization::Exact => Value::Exact(BigRational::new(k.into(), d.into())),
            Realization::Float => Value::Float(k as f64 / d as f64),
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Value {
        s.parse().unwrap()
    }

    #[test]
    fn join_examples() {
        assert_eq!(q("0.4").join(&q("0.5")).unwrap(), q("1/2"));
        assert_eq!(q("3/7").join(&q("0")).unwrap(), q("3/7"));
        assert_eq!(q("1/3").join(&q("2/7")).unwrap(), q("1/3"));
    }

    #[test]
    fn meet_examples() {
        assert_eq!(q("0.8").meet(&q("0.5")).unwrap(), q("1/2"));
        assert_eq!(q("3/7").meet(&q("1")).unwrap(), q("3/7"));
        assert_eq!(q("1/2").meet(&q("1/2")).unwrap(), q("1/2"));
    }

    #[test]
    fn clamped_arithmetic() {
        assert_eq!(q("0.7").add_clamped(&q("0.6")).unwrap(), q("1"));
        assert_eq!(q("0.3").sub_floored(&q("0.5")).unwrap(), q("0"));
        assert_eq!(q("1/4").add_clamped(&q("1/4")).unwrap(), q("1/2"));
        let f = Value::float(0.7)
            .unwrap()
            .add_clamped(&Value::float(0.6).unwrap())
            .unwrap();
        assert_eq!(f.to_f64(), 1.0);
    }

    #[test]
    fn mixing_realizations_is_rejected() {
        let e = q("1/2");
        let f = Value::float(0.5).unwrap();
        assert_eq!(e.join(&f), Err(Error::RealizationMismatch));
        assert_eq!(e.meet(&f), Err(Error::RealizationMismatch));
        assert_eq!(e.add_clamped(&f), Err(Error::RealizationMismatch));
        assert_eq!(f.sub_floored(&e), Err(Error::RealizationMismatch));
        assert!(e != f);
    }

    #[test]
    fn construction_enforces_range() {
        assert!(Value::ratio(3, 2).is_err());
        assert!(Value::ratio(-1, 2).is_err());
        assert!(Value::float(1.5).is_err());
        assert!(Value::float(f64::NAN).is_err());
        assert!("1.01".parse::<Value>().is_err());
        assert!("-0.1".parse::<Value>().is_err());
    }

    #[test]
    fn decimal_parsing_is_exact() {
        assert_eq!(q("0.4").render(), "2/5");
        assert_eq!(q(".25").render(), "1/4");
        assert_eq!(q("1.000").render(), "1");
        assert_eq!(q(" 6/8 ").render(), "3/4");
        assert!("abc".parse::<Value>().is_err());
        assert!("1/0".parse::<Value>().is_err());
        assert!("0.1e3".parse::<Value>().is_err());
    }

    #[test]
    fn float_rendering_is_shortest_round_trip() {
        let v = Value::parse("0.1", Realization::Float).unwrap();
        assert_eq!(v.render(), "0.1");
        let w = Value::parse("1/3", Realization::Float).unwrap();
        assert_eq!(
            Value::parse(&w.render(), Realization::Float).unwrap().to_f64(),
            1.0 / 3.0
        );
        assert_eq!(Value::float(1.0).unwrap().render(), "1");
    }

    #[test]
    fn grid_shapes() {
        let g = grid(&q("1/10")).unwrap();
        assert_eq!(g.len(), 11);
        assert_eq!(g[3], q("3/10"));
        let g = grid(&q("1/3")).unwrap();
        assert_eq!(g.len(), 4);
        let g = grid(&q("2/5")).unwrap();
        assert_eq!(
            g.iter().map(Value::render).collect::<Vec<_>>(),
            ["0", "2/5", "4/5", "1"]
        );
        assert!(grid(&q("0")).is_err());
        assert!(grid(&q("3/5")).is_err());
        let g = grid(&Value::float(0.01).unwrap()).unwrap();
        assert_eq!(g.len(), 101);
        assert_eq!(g[100].to_f64(), 1.0);
        assert_eq!(denominator_grid(4, Realization::Exact)[2], q("1/2"));
    }

    #[test]
    fn tolerance_comparisons() {
        let a = Value::float(0.3).unwrap();
        let b = Value::float(0.1 + 0.2).unwrap();
        assert!(a.eq_tol(&b, Tolerance::DEFAULT).unwrap());
        assert!(b.le_tol(&a, Tolerance::DEFAULT).unwrap());
        assert!(!q("1/3").eq_tol(&q("333/1000"), Tolerance(0.1)).unwrap());
    }
}
