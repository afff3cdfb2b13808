use crate::cp::{CpBuildError, CpBuilder, CpDerivation};
use crate::er::{ErDerivation, ErStep};
use crate::pb::{clause_to_pb, PbConstraint, PbFormula};
use crate::syntax::{Clause, Lit};

/// Step indices of the CP image of each clause of a resolution derivation.
pub type ResolutionImage = Vec<usize>;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum ResolutionError {
    #[error("extension step {0} in a resolution derivation")]
    Extension(usize),
    #[error("step {0} is malformed")]
    Malformed(usize),
    #[error(transparent)]
    Build(#[from] CpBuildError),
    #[error("clause {0} is tautologous")]
    Tautologous(Clause),
}

impl CpBuilder {
    /// Emits the CP image of a resolution derivation whose premises are
    /// available (as hypotheses or earlier steps) in translated form.
    pub fn emit_resolution(&mut self, pi: &ErDerivation) -> Result<ResolutionImage, ResolutionError> {
        let mut image: Vec<usize> = Vec::with_capacity(pi.steps.len());
        let mut clauses: Vec<Clause> = Vec::with_capacity(pi.steps.len());
        for (i, step) in pi.steps.iter().enumerate() {
            let bad = || ResolutionError::Malformed(i);
            match step {
                ErStep::Premise(k) => {
                    let c = pi.premises.get(*k).ok_or_else(bad)?;
                    image.push(self.need(&clause_to_pb(c))?);
                    clauses.push(c.clone());
                }
                ErStep::Resolve { a, b, result, .. } => {
                    let (sa, sb) = (*image.get(*a).ok_or_else(bad)?, *image.get(*b).ok_or_else(bad)?);
                    let goal = clause_to_pb(result);
                    let s = match self.find(&goal) {
                        Some(s) => s,
                        None if goal.is_tautology() => self.tautology(&goal)?,
                        None => {
                            let sum = self.add(sa, 1, sb, 1);
                            self.round(sum, 2, &goal)?
                        }
                    };
                    image.push(s);
                    clauses.push(result.clone());
                }
                ErStep::Weaken { from, result } => {
                    let s = *image.get(*from).ok_or_else(bad)?;
                    let goal = clause_to_pb(result);
                    let s = match self.find(&goal) {
                        Some(t) => t,
                        None => self.weaken(s, &goal)?,
                    };
                    image.push(s);
                    clauses.push(result.clone());
                }
                ErStep::DropZero { from, result } => {
                    image.push(*image.get(*from).ok_or_else(bad)?);
                    clauses.push(result.clone());
                }
                ErStep::Extend(_) => return Err(ResolutionError::Extension(i)),
            }
        }
        Ok(image)
    }

    /// From the step holding ¬(C*), derives (¬p)* for every literal p of C
    /// using prefix and suffix sums of Boolean axioms. Returns the steps in
    /// the order of the variable literals of C.
    pub fn emit_negclause(&mut self, neg: usize, c: &Clause) -> Result<Vec<usize>, ResolutionError> {
        if c.is_tautologous() {
            return Err(ResolutionError::Tautologous(c.clone()));
        }
        let lits: Vec<Lit> = c.iter().filter(|l| !l.is_const()).collect();
        let k = lits.len();
        if k == 0 {
            return Ok(vec![]);
        }
        let axioms: Vec<usize> = lits.iter().map(|&l| self.lit_nonneg(l).unwrap()).collect();
        // prefix[i] = ¬(C*) + axioms[0..i]
        let mut prefix = vec![neg];
        for i in 0..k - 1 {
            let p = self.add(prefix[i], 1, axioms[i], 1);
            prefix.push(p);
        }
        // suffix[i] = axioms[i..k]
        let mut suffix = vec![0usize; k + 1];
        if k >= 2 {
            suffix[k - 1] = axioms[k - 1];
            for i in (1..k - 1).rev() {
                suffix[i] = self.add(axioms[i], 1, suffix[i + 1], 1);
            }
        }
        let mut out = Vec::with_capacity(k);
        for i in 0..k {
            let s = if i + 1 < k {
                self.add(prefix[i], 1, suffix[i + 1], 1)
            } else {
                prefix[i]
            };
            debug_assert_eq!(*self.fact(s), clause_to_pb(&Clause::unit(lits[i].negate())));
            out.push(s);
        }
        Ok(out)
    }
}

/// The CP image of a resolution derivation: hypotheses are the translated
/// premises and goals the translated conclusions.
pub fn res_to_cp(pi: &ErDerivation) -> Result<CpDerivation, ResolutionError> {
    if let Some(i) = pi.steps.iter().position(|s| matches!(s, ErStep::Extend(_))) {
        return Err(ResolutionError::Extension(i));
    }
    let hyps = PbFormula::from_cnf(&pi.premises);
    let mut b = CpBuilder::new(hyps.iter().cloned().collect());
    b.emit_resolution(pi)?;
    Ok(CpDerivation {
        hyps,
        steps: b.into_steps(),
        goals: PbFormula::from_cnf(&pi.conclusions),
    })
}

/// ¬(C*) ⊢ (¬C)*.
pub fn negclause_bridge(c: &Clause) -> Result<CpDerivation, ResolutionError> {
    let hyp = clause_to_pb(c).negate();
    let mut b = CpBuilder::new(vec![hyp.clone()]);
    let h = b.hyp(0);
    b.emit_negclause(h, c)?;
    let goals: PbFormula = c.negate().iter().map(clause_to_pb).filter(|g: &PbConstraint| !g.is_trivial()).collect();
    Ok(CpDerivation {
        hyps: PbFormula::from_iter([hyp]),
        steps: b.into_steps(),
        goals,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::check_cp;
    use crate::er::ErBuilder;
    use crate::syntax::Cnf;
    use std::collections::BTreeSet;

    fn cnf(cs: &[&[i64]]) -> Cnf {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    #[test]
    fn single_resolution() {
        let premises = cnf(&[&[1, 2], &[-1, 2]]);
        let mut b = ErBuilder::new(premises, BTreeSet::new());
        let (p, q) = (b.premise(0), b.premise(1));
        b.resolve_on(p, q, 1);
        let pi = b.finish(cnf(&[&[2]]));
        let cp = res_to_cp(&pi).unwrap();
        check_cp(&cp).unwrap();
    }

    #[test]
    fn weakening_adds_axiom() {
        let premises = cnf(&[&[1]]);
        let mut b = ErBuilder::new(premises, BTreeSet::from([2]));
        let p = b.premise(0);
        b.weaken(p, Clause::from_dimacs(&[1, 2]));
        let pi = b.finish(cnf(&[&[1, 2]]));
        let cp = res_to_cp(&pi).unwrap();
        check_cp(&cp).unwrap();
        assert!(cp.steps.iter().any(|s| matches!(s, crate::cp::CpStep::AxGe(2))));
    }

    #[test]
    fn refutation_derives_contradiction() {
        let premises = cnf(&[&[1], &[-1]]);
        let mut b = ErBuilder::new(premises, BTreeSet::new());
        let (p, q) = (b.premise(0), b.premise(1));
        b.resolve_on(p, q, 1);
        let pi = b.finish(cnf(&[&[]]));
        let cp = res_to_cp(&pi).unwrap();
        let trace = check_cp(&cp).unwrap();
        assert!(trace.derived.iter().any(|c| c.is_contradiction()));
    }

    #[test]
    fn merging_and_complementary_literals() {
        let premises = cnf(&[&[1, 2, 3], &[-1, 2, -3]]);
        let mut b = ErBuilder::new(premises, BTreeSet::new());
        let (p, q) = (b.premise(0), b.premise(1));
        b.resolve_on(p, q, 1);
        let pi = b.finish(cnf(&[&[2, 3, -3]]));
        check_cp(&res_to_cp(&pi).unwrap()).unwrap();
    }

    #[test]
    fn extension_rejected() {
        let mut b = ErBuilder::new(cnf(&[&[1]]), BTreeSet::new());
        b.extend(crate::er::ExtAxiom::Const { y: 2, value: true });
        let pi = b.finish(Cnf::new());
        assert_eq!(res_to_cp(&pi).unwrap_err(), ResolutionError::Extension(0));
    }

    #[test]
    fn bridge_cases() {
        check_cp(&negclause_bridge(&Clause::from_dimacs(&[1])).unwrap()).unwrap();
        let two = negclause_bridge(&Clause::from_dimacs(&[1, -2])).unwrap();
        check_cp(&two).unwrap();
        assert_eq!(two.goals.len(), 2);
        let four = negclause_bridge(&Clause::from_dimacs(&[1, -2, 3, -4])).unwrap();
        check_cp(&four).unwrap();
        assert!(four.steps.len() <= 4 * 4);
        let empty = negclause_bridge(&Clause::empty()).unwrap();
        assert!(empty.goals.is_empty());
        assert!(negclause_bridge(&Clause::from_dimacs(&[1, -1])).is_err());
    }
}
