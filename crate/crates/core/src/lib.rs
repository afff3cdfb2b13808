//! Checkers and translators for extended resolution, cutting planes,
//! ER-PLS and the dominance proof system, plus a brute-force oracle.

pub mod cp;
pub mod dominance;
pub mod er;
pub mod erpls;
pub mod format;
pub mod oracle;
pub mod ordering;
pub mod pb;
pub mod symmetry;
pub mod syntax;
pub mod translate;

use std::fmt;

pub use pb::{clause_to_pb, pb_negate, LinearSum, PbConstraint, PbFormula, Relation};
pub use syntax::{
    compose, is_symmetry, iterate_substitution, negate_clause, satisfies, Assignment, Clause, Cnf,
    Lit, Substitution, Var, VarAlloc,
};

/// Why a checker refused a proof. `step` is the first offending step, when
/// the failure is tied to one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Rejection {
    pub step: Option<usize>,
    pub reason: String,
}

impl Rejection {
    pub fn at(step: usize, reason: impl Into<String>) -> Rejection {
        Rejection {
            step: Some(step),
            reason: reason.into(),
        }
    }

    pub fn global(reason: impl Into<String>) -> Rejection {
        Rejection {
            step: None,
            reason: reason.into(),
        }
    }

    /// Prefixes the reason, keeping the step.
    pub fn context(self, what: impl fmt::Display) -> Rejection {
        Rejection {
            step: self.step,
            reason: format!("{what}: {}", self.reason),
        }
    }

    /// Reattributes a nested failure to an enclosing step.
    pub fn nested(self, outer: usize, what: impl fmt::Display) -> Rejection {
        let inner = match self.step {
            Some(s) => format!("{what}, step {s}: {}", self.reason),
            None => format!("{what}: {}", self.reason),
        };
        Rejection::at(outer, inner)
    }
}

impl fmt::Display for Rejection {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.step {
            Some(s) => write!(f, "step {s}: {}", self.reason),
            None => write!(f, "{}", self.reason),
        }
    }
}

impl std::error::Error for Rejection {}
