use std::collections::HashMap;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use super::{CpStep, CpWitness};
use crate::pb::{PbConstraint, PbFormula};
use crate::syntax::{Lit, Var};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum CpBuildError {
    #[error("{0} is neither a hypothesis nor derived")]
    Missing(PbConstraint),
    #[error("cannot weaken {from} to {to}")]
    NotWeakening { from: PbConstraint, to: PbConstraint },
}

/// Incremental construction of a CP derivation. Tracks the constraint of
/// every step and finds hypotheses and earlier results by normal form.
#[derive(Clone, Debug)]
pub struct CpBuilder {
    hyps: Vec<PbConstraint>,
    hyp_index: HashMap<PbConstraint, usize>,
    steps: Vec<CpStep>,
    facts: Vec<PbConstraint>,
    known: HashMap<PbConstraint, usize>,
    ge: HashMap<Var, usize>,
    le: HashMap<Var, usize>,
}

impl CpBuilder {
    pub fn new(hyps: Vec<PbConstraint>) -> CpBuilder {
        let mut hyp_index = HashMap::new();
        for (i, h) in hyps.iter().enumerate() {
            hyp_index.entry(h.clone()).or_insert(i);
        }
        CpBuilder {
            hyps,
            hyp_index,
            steps: Vec::new(),
            facts: Vec::new(),
            known: HashMap::new(),
            ge: HashMap::new(),
            le: HashMap::new(),
        }
    }

    pub fn hyps(&self) -> &[PbConstraint] {
        &self.hyps
    }

    pub fn steps(&self) -> &[CpStep] {
        &self.steps
    }

    pub fn into_steps(self) -> Vec<CpStep> {
        self.steps
    }

    /// Keeps only the hypotheses some step uses and renumbers them.
    pub fn into_witness(self) -> CpWitness {
        let mut hyps = PbFormula::new();
        let steps = self
            .steps
            .into_iter()
            .map(|s| match s {
                CpStep::Hyp(i) => {
                    let h = &self.hyps[i];
                    hyps.push(h.clone());
                    CpStep::Hyp(hyps.index_of(h).unwrap())
                }
                other => other,
            })
            .collect();
        CpWitness { hyps, steps }
    }

    pub fn fact(&self, step: usize) -> &PbConstraint {
        &self.facts[step]
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }

    fn push(&mut self, step: CpStep, fact: PbConstraint) -> usize {
        let i = self.steps.len();
        self.known.entry(fact.clone()).or_insert(i);
        self.steps.push(step);
        self.facts.push(fact);
        i
    }

    pub fn hyp(&mut self, i: usize) -> usize {
        let c = self.hyps[i].clone();
        self.push(CpStep::Hyp(i), c)
    }

    /// A step deriving `c`: an earlier one, or a new Hyp step.
    pub fn need(&mut self, c: &PbConstraint) -> Result<usize, CpBuildError> {
        self.find(c).ok_or_else(|| CpBuildError::Missing(c.clone()))
    }

    pub fn find(&mut self, c: &PbConstraint) -> Option<usize> {
        if let Some(&s) = self.known.get(c) {
            return Some(s);
        }
        let i = *self.hyp_index.get(c)?;
        Some(self.hyp(i))
    }

    pub fn has(&self, c: &PbConstraint) -> bool {
        self.known.contains_key(c) || self.hyp_index.contains_key(c)
    }

    pub fn axge(&mut self, v: Var) -> usize {
        if let Some(&s) = self.ge.get(&v) {
            return s;
        }
        let s = self.push(CpStep::AxGe(v), PbConstraint::axiom_ge(v));
        self.ge.insert(v, s);
        s
    }

    pub fn axle(&mut self, v: Var) -> usize {
        if let Some(&s) = self.le.get(&v) {
            return s;
        }
        let s = self.push(CpStep::AxLe(v), PbConstraint::axiom_le(v));
        self.le.insert(v, s);
        s
    }

    /// The axiom `l ≥ 0` for a variable literal.
    pub fn lit_nonneg(&mut self, l: Lit) -> Option<usize> {
        match l {
            Lit::Pos(v) => Some(self.axge(v)),
            Lit::Neg(v) => Some(self.axle(v)),
            _ => None,
        }
    }

    pub fn add(&mut self, a: usize, ma: impl Into<BigInt>, b: usize, mb: impl Into<BigInt>) -> usize {
        let (ma, mb) = (ma.into(), mb.into());
        let c = self.facts[a].add_scaled(&ma, &self.facts[b], &mb);
        self.push(CpStep::Add { a, ma, b, mb }, c)
    }

    pub fn div(&mut self, a: usize, d: impl Into<BigInt>) -> usize {
        let d = d.into();
        let c = self.facts[a].divide(&d);
        self.push(CpStep::Div { a, d }, c)
    }

    /// Σ m_i · s_i as a chain of additions.
    pub fn combine(&mut self, parts: &[(usize, i64)]) -> usize {
        let (s0, m0) = parts[0];
        let Some(&(s1, m1)) = parts.get(1) else {
            return if m0 == 1 { s0 } else { self.add(s0, m0, s0, 0) };
        };
        let mut acc = self.add(s0, m0, s1, m1);
        for &(s, k) in &parts[2..] {
            acc = self.add(acc, 1, s, k);
        }
        acc
    }

    /// Derives `goal` from step `from` by adding Boolean axioms and, if the
    /// bound is still too high, the slack constraint 0 ≥ −1.
    pub fn weaken(&mut self, from: usize, goal: &PbConstraint) -> Result<usize, CpBuildError> {
        let have = self.facts[from].clone();
        if have == *goal {
            return Ok(from);
        }
        let mut diffs: Vec<(Var, BigInt)> = Vec::new();
        let (mut i, mut j) = (0, 0);
        let (ht, gt) = (have.terms(), goal.terms());
        while i < ht.len() || j < gt.len() {
            match (ht.get(i), gt.get(j)) {
                (Some((hv, hc)), Some((gv, gc))) if hv == gv => {
                    if hc != gc {
                        diffs.push((*hv, gc - hc));
                    }
                    i += 1;
                    j += 1;
                }
                (Some((hv, hc)), Some((gv, _))) if hv < gv => {
                    diffs.push((*hv, -hc));
                    i += 1;
                }
                (Some((hv, hc)), None) => {
                    diffs.push((*hv, -hc));
                    i += 1;
                }
                (_, Some((gv, gc))) => {
                    diffs.push((*gv, gc.clone()));
                    j += 1;
                }
                (None, None) => unreachable!(),
            }
        }
        let mut bound = have.bound().clone();
        for (_, d) in &diffs {
            if d.is_negative() {
                bound += d;
            }
        }
        if bound < *goal.bound() {
            return Err(CpBuildError::NotWeakening {
                from: have,
                to: goal.clone(),
            });
        }
        let mut acc = from;
        for (v, d) in diffs {
            let ax = if d.is_positive() { self.axge(v) } else { self.axle(v) };
            acc = self.add(acc, 1, ax, d.abs());
        }
        let slack = bound - goal.bound();
        if !slack.is_zero() {
            let v = goal
                .terms()
                .first()
                .or(have.terms().first())
                .map(|(v, _)| *v)
                .unwrap_or(1);
            let (ge, le) = (self.axge(v), self.axle(v));
            let unit = self.add(ge, 1, le, 1);
            acc = self.add(acc, 1, unit, slack);
        }
        debug_assert_eq!(self.facts[acc], *goal);
        Ok(acc)
    }

    /// Derives a constraint that every 0/1 point satisfies from Boolean axioms.
    pub fn tautology(&mut self, goal: &PbConstraint) -> Result<usize, CpBuildError> {
        if !goal.is_tautology() {
            return Err(CpBuildError::NotWeakening {
                from: PbConstraint::from_parts([], BigInt::zero()),
                to: goal.clone(),
            });
        }
        let start = match goal.terms().first() {
            Some((v, c)) if c.is_positive() => self.axge(*v),
            Some((v, _)) => self.axle(*v),
            None => {
                // 0·(x ≥ 0)
                let ax = self.axge(1);
                self.add(ax, 0, ax, 0)
            }
        };
        self.weaken(start, goal)
    }

    /// Derives `goal` by scaling it by `d`, weakening `from` to that with the
    /// largest bound that still rounds to the goal's, and dividing.
    pub fn round(&mut self, from: usize, d: i64, goal: &PbConstraint) -> Result<usize, CpBuildError> {
        let d = BigInt::from(d);
        let scaled = PbConstraint::from_parts(
            goal.terms().iter().map(|(v, c)| (*v, c * &d)),
            goal.bound() * &d - &d + BigInt::one(),
        );
        let lifted = self.weaken(from, &scaled)?;
        let out = self.div(lifted, d);
        debug_assert_eq!(self.facts[out], *goal);
        Ok(out)
    }

    /// Σ m_i · s_i, then rounding by `d` (or plain weakening when d = 1) to `goal`.
    pub fn derive(&mut self, parts: &[(usize, i64)], d: i64, goal: &PbConstraint) -> Result<usize, CpBuildError> {
        let sum = self.combine(parts);
        if d == 1 {
            self.weaken(sum, goal)
        } else {
            self.round(sum, d, goal)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::check_steps;
    use crate::pb::Relation;

    fn pb(terms: &[(i64, Lit)], bound: i64) -> PbConstraint {
        PbConstraint::new(terms.iter().map(|&(c, l)| (BigInt::from(c), l)), Relation::Ge, bound)
    }

    #[test]
    fn weaken_with_axioms_and_slack() {
        let h = pb(&[(1, Lit::Pos(1))], 1);
        let mut b = CpBuilder::new(vec![h.clone()]);
        let s = b.need(&h).unwrap();
        let goal = pb(&[(2, Lit::Pos(1)), (1, Lit::Neg(2))], 0);
        let g = b.weaken(s, &goal).unwrap();
        assert_eq!(b.fact(g), &goal);
        check_steps(&[h], b.steps(), [&goal]).unwrap();
    }

    #[test]
    fn weaken_refuses_strengthening() {
        let h = pb(&[(1, Lit::Pos(1))], 0);
        let mut b = CpBuilder::new(vec![h.clone()]);
        let s = b.need(&h).unwrap();
        assert!(b.weaken(s, &pb(&[(1, Lit::Pos(1))], 1)).is_err());
    }

    #[test]
    fn rounding() {
        // 2x + 2y ≥ 1 rounds to x + y ≥ 1
        let h = pb(&[(2, Lit::Pos(1)), (2, Lit::Pos(2))], 1);
        let mut b = CpBuilder::new(vec![h.clone()]);
        let s = b.need(&h).unwrap();
        let goal = pb(&[(1, Lit::Pos(1)), (1, Lit::Pos(2))], 1);
        b.round(s, 2, &goal).unwrap();
        check_steps(&[h], b.steps(), [&goal]).unwrap();
    }

    #[test]
    fn combine_scales_single_part() {
        let h = pb(&[(1, Lit::Pos(1))], 1);
        let mut b = CpBuilder::new(vec![h.clone()]);
        let s = b.need(&h).unwrap();
        let t = b.combine(&[(s, 3)]);
        assert_eq!(b.fact(t), &pb(&[(3, Lit::Pos(1))], 3));
    }
}
