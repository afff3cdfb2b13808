//! Cutting planes: derivations, their checker, a derivation builder, the
//! resolution simulation, and the fixed derivations for adder bit equations.

mod builder;
mod resolution;
pub mod templates;

use std::collections::HashSet;

use num_bigint::BigInt;
use num_traits::Signed;

use crate::pb::{PbConstraint, PbFormula};
use crate::syntax::Var;
use crate::Rejection;

pub use builder::{CpBuildError, CpBuilder};
pub use resolution::{negclause_bridge, res_to_cp, ResolutionError, ResolutionImage};
pub use templates::{derive_bit_equation, equation_template, AdderBit, BitShape};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CpStep {
    /// Hypothesis number `i`.
    Hyp(usize),
    /// x ≥ 0
    AxGe(Var),
    /// x ≤ 1
    AxLe(Var),
    /// ma·a + mb·b with nonnegative multipliers.
    Add { a: usize, ma: BigInt, b: usize, mb: BigInt },
    /// Division by d > 0 with the bound rounded up.
    Div { a: usize, d: BigInt },
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CpDerivation {
    pub hyps: PbFormula,
    pub steps: Vec<CpStep>,
    pub goals: PbFormula,
}

/// Steps together with the hypotheses they use. The available hypotheses
/// and the goals come from the context the witness is checked in.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CpWitness {
    pub hyps: PbFormula,
    pub steps: Vec<CpStep>,
}

impl CpWitness {
    /// Checks that every hypothesis is available and every goal is a tautology,
    /// available, or derived.
    pub fn check<'a>(
        &self,
        available: impl Fn(&PbConstraint) -> bool,
        goals: impl IntoIterator<Item = &'a PbConstraint>,
    ) -> Result<CpTrace, Rejection> {
        if let Some(h) = self.hyps.iter().find(|h| !available(h)) {
            return Err(Rejection::global(format!("hypothesis {h} is not available")));
        }
        let hyps: Vec<PbConstraint> = self.hyps.iter().cloned().collect();
        let derived = run_cp(&hyps, &self.steps)?;
        let have: HashSet<&PbConstraint> = derived.iter().collect();
        for g in goals {
            if !(g.is_tautology() || have.contains(g) || available(g)) {
                return Err(Rejection::global(format!("goal {g} is not derived")));
            }
        }
        let max_bits = derived.iter().map(|c| c.max_bits()).max().unwrap_or(0);
        Ok(CpTrace { derived, max_bits })
    }
}

#[derive(Clone, Debug)]
pub struct CpTrace {
    pub derived: Vec<PbConstraint>,
    pub max_bits: u64,
}

/// Computes the constraint of every step.
pub fn run_cp(hyps: &[PbConstraint], steps: &[CpStep]) -> Result<Vec<PbConstraint>, Rejection> {
    let mut out: Vec<PbConstraint> = Vec::with_capacity(steps.len());
    for (i, step) in steps.iter().enumerate() {
        let get = |k: usize| -> Result<&PbConstraint, Rejection> {
            out.get(k)
                .ok_or_else(|| Rejection::at(i, format!("reference {k} is not an earlier step")))
        };
        let c = match step {
            CpStep::Hyp(k) => hyps
                .get(*k)
                .cloned()
                .ok_or_else(|| Rejection::at(i, format!("no hypothesis {k}")))?,
            CpStep::AxGe(v) | CpStep::AxLe(v) if *v == 0 => {
                return Err(Rejection::at(i, "variable ids are positive"))
            }
            CpStep::AxGe(v) => PbConstraint::axiom_ge(*v),
            CpStep::AxLe(v) => PbConstraint::axiom_le(*v),
            CpStep::Add { a, ma, b, mb } => {
                if ma.is_negative() || mb.is_negative() {
                    return Err(Rejection::at(i, "multipliers must be nonnegative"));
                }
                get(*a)?.add_scaled(ma, get(*b)?, mb)
            }
            CpStep::Div { a, d } => {
                if !d.is_positive() {
                    return Err(Rejection::at(i, "divisor must be positive"));
                }
                let c = get(*a)?;
                if !c.divisible_by(d) {
                    return Err(Rejection::at(i, format!("coefficients of step {a} are not divisible by {d}")));
                }
                c.divide(d)
            }
        };
        out.push(c);
    }
    Ok(out)
}

/// Checks a derivation and that every goal is a hypothesis or a derived
/// constraint. Goals whose left side cannot fall below the bound hold
/// outright and need no derivation.
pub fn check_cp(pi: &CpDerivation) -> Result<CpTrace, Rejection> {
    let hyps: Vec<PbConstraint> = pi.hyps.iter().cloned().collect();
    check_steps(&hyps, &pi.steps, pi.goals.iter())
}

/// As `check_cp`, with the hypotheses given positionally.
pub fn check_steps<'a>(
    hyps: &[PbConstraint],
    steps: &[CpStep],
    goals: impl IntoIterator<Item = &'a PbConstraint>,
) -> Result<CpTrace, Rejection> {
    let derived = run_cp(hyps, steps)?;
    let have: HashSet<&PbConstraint> = derived.iter().chain(hyps.iter()).collect();
    for g in goals {
        if !(g.is_tautology() || have.contains(g)) {
            return Err(Rejection::global(format!("goal {g} is not derived")));
        }
    }
    let max_bits = derived.iter().map(|c| c.max_bits()).max().unwrap_or(0);
    Ok(CpTrace { derived, max_bits })
}

/// Whether the steps derive a constraint with empty left side and positive bound.
pub fn derives_contradiction(hyps: &[PbConstraint], steps: &[CpStep]) -> Result<bool, Rejection> {
    Ok(run_cp(hyps, steps)?.iter().any(|c| c.is_contradiction()) || hyps.iter().any(|c| c.is_contradiction()))
}
