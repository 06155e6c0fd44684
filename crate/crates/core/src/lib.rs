//! Seminormed fuzzy integrals `I_S(μ, f) = sup_t S(t, μ({f ≥ t}))` on finite
//! spaces, computed exactly, together with executable checkers and a
//! counterexample search for the inequalities and characterizations that
//! govern them.

pub mod capacity;
pub mod cli;
pub mod error;
pub mod integral;
pub mod laws;
pub mod report;
pub mod scalar;
pub mod schema;
pub mod search;
pub mod semicopula;

pub use capacity::{
    additive_capacity, possibility_capacity, random_capacity, random_comonotone_pair, superlevel_measure,
    validate_capacity, Capacity, Completion, FiniteSpace, RawCapacity, SimpleFunction, Subset,
};
pub use error::{CapacityViolation, Error, Result};
pub use integral::{eval_integral, eval_integral_grid, eval_integral_restricted, IntegralMethod, IntegralResult};
pub use laws::{is_comonotone, witness_from_shift_violation, Bindings, Checker, CorollaryVariant, Instance, LawId};
pub use report::{CheckReport, Sides, Verdict, Witness};
pub use scalar::{Realization, Tolerance, Value};
pub use search::{search, search_integral_law, search_pointwise, SearchMode, SearchSpec};
pub use semicopula::{audit_axioms, coseminorm_of, s_eval, BinaryOp, ClaimedClass, Semicopula, SemicopulaKind};
