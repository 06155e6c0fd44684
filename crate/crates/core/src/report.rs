//! Verdicts produced by the axiom auditor, the law checkers and the search.

use std::fmt;

use crate::laws::Instance;
use crate::scalar::Value;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    HoldsOnSample,
    Fails,
}

impl Verdict {
    pub fn as_str(self) -> &'static str {
        match self {
            Verdict::HoldsOnSample => "holds-on-sample",
            Verdict::Fails => "fails",
        }
    }

    pub fn holds(self) -> bool {
        self == Verdict::HoldsOnSample
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Both sides of the relation that was checked.
#[derive(Debug, Clone, PartialEq)]
pub struct Sides {
    pub lhs: Value,
    pub rhs: Value,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Witness {
    /// Named scalar inputs in the order the law states them.
    pub inputs: Vec<(String, Value)>,
    /// Absent only when the operator produced a value outside `[0, 1]`.
    pub sides: Option<Sides>,
    pub detail: String,
    /// Integral-level laws carry the full instance so it can be replayed.
    pub instance: Option<Instance>,
}

impl Witness {
    pub fn pointwise(inputs: Vec<(&str, Value)>, lhs: Value, rhs: Value, detail: impl Into<String>) -> Self {
        Witness {
            inputs: inputs.into_iter().map(|(k, v)| (k.to_string(), v)).collect(),
            sides: Some(Sides { lhs, rhs }),
            detail: detail.into(),
            instance: None,
        }
    }

    pub fn input(&self, name: &str) -> Option<&Value> {
        self.inputs.iter().find(|(k, _)| k == name).map(|(_, v)| v)
    }

    pub fn tuple(&self) -> Vec<Value> {
        self.inputs.iter().map(|(_, v)| v.clone()).collect()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub law_id: String,
    pub verdict: Verdict,
    pub witness: Option<Witness>,
    pub sample_description: String,
    pub cases_checked: u64,
    /// False when a search budget ran out or the cases were sampled rather
    /// than enumerated.
    pub complete: bool,
}

impl CheckReport {
    pub fn holds(law_id: impl Into<String>, sample_description: impl Into<String>, cases_checked: u64) -> Self {
        CheckReport {
            law_id: law_id.into(),
            verdict: Verdict::HoldsOnSample,
            witness: None,
            sample_description: sample_description.into(),
            cases_checked,
            complete: true,
        }
    }

    pub fn fails(
        law_id: impl Into<String>,
        sample_description: impl Into<String>,
        cases_checked: u64,
        witness: Witness,
    ) -> Self {
        CheckReport {
            law_id: law_id.into(),
            verdict: Verdict::Fails,
            witness: Some(witness),
            sample_description: sample_description.into(),
            cases_checked,
            complete: true,
        }
    }

    pub fn from_witness(
        law_id: impl Into<String>,
        sample_description: impl Into<String>,
        cases_checked: u64,
        witness: Option<Witness>,
    ) -> Self {
        match witness {
            Some(w) => CheckReport::fails(law_id, sample_description, cases_checked, w),
            None => CheckReport::holds(law_id, sample_description, cases_checked),
        }
    }

    pub fn holds_on_sample(&self) -> bool {
        self.verdict.holds()
    }

    pub fn sides(&self) -> Option<&Sides> {
        self.witness.as_ref().and_then(|w| w.sides.as_ref())
    }
}
