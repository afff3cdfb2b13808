//! ER-PLS: extended resolution plus a dominance rule that adds a clause C
//! when every counterexample to C can be mapped by ω to a lexicographically
//! smaller model.

use std::collections::BTreeSet;

use crate::er::{check_er, ErDerivation, ExtensionBlock};
use crate::oracle::{is_sat, OracleError, VarOrder};
use crate::ordering::LexGadget;
use crate::syntax::{Clause, Cnf, Lit, Substitution, Var, VarAlloc};
use crate::Rejection;

/// One application of the dominance rule to the running CNF Γ.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomRule {
    /// The clause to add, over x̄.
    pub c: Clause,
    /// x̄: all variables of Γ, most significant first.
    pub order: VarOrder,
    /// Extension axioms defining ȳ from x̄.
    pub delta: ExtensionBlock,
    pub omega: Substitution,
    /// Γ ∧ Δ ∧ ¬C ⊢ Γ↾ω
    pub pi_a: ErDerivation,
    /// Γ ∧ Δ ∧ ¬C ∧ [x̄ ≤lex x̄↾ω] ⊢ ⊥
    pub pi_b: ErDerivation,
    /// [x̄ ≤lex x̄↾ω] on its own auxiliary variables.
    pub gadget: LexGadget,
}

impl DomRule {
    pub fn x(&self) -> Vec<Lit> {
        self.order.vars().iter().map(|&v| Lit::Pos(v)).collect()
    }

    /// x̄↾ω
    pub fn x_omega(&self) -> Vec<Lit> {
        self.order.vars().iter().map(|&v| self.omega.get(v)).collect()
    }

    /// The gadget [x̄ ≤lex x̄↾ω] with auxiliaries from `first_aux` on.
    pub fn make_gadget(order: &VarOrder, omega: &Substitution, first_aux: Var) -> Result<LexGadget, String> {
        let x: Vec<Lit> = order.vars().iter().map(|&v| Lit::Pos(v)).collect();
        let xw: Vec<Lit> = order.vars().iter().map(|&v| omega.get(v)).collect();
        let mut alloc = VarAlloc::starting_at(first_aux);
        LexGadget::new(&x, &xw, false, true, &mut alloc).map_err(|e| e.to_string())
    }

    /// Γ ∧ Δ ∧ ¬C
    pub fn premises_a(&self, gamma: &Cnf) -> Cnf {
        let mut out = gamma.clone();
        out.extend(self.delta.clauses());
        out.extend(self.c.negate().iter().cloned());
        out
    }

    pub fn premises_b(&self, gamma: &Cnf) -> Cnf {
        let mut out = self.premises_a(gamma);
        out.extend(self.gadget.cnf().iter().cloned());
        out
    }

    /// Clauses of Γ↾ω that π_a must conclude: all but the tautologous ones.
    pub fn required(&self, gamma: &Cnf) -> Vec<Clause> {
        gamma
            .iter()
            .map(|d| d.substitute(&self.omega))
            .filter(|d| !d.is_tautologous())
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErplsStep {
    /// Adds the conclusions of an ER derivation from the running CNF.
    Er(ErDerivation),
    Dom(Box<DomRule>),
}

impl ErplsStep {
    pub fn rule(&self) -> &'static str {
        match self {
            ErplsStep::Er(_) => "ER rule",
            ErplsStep::Dom(_) => "dominance rule",
        }
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErplsProof {
    pub input: Cnf,
    pub steps: Vec<ErplsStep>,
}

impl ErplsProof {
    /// Number of clauses and steps across all embedded derivations.
    pub fn size(&self) -> usize {
        let er = |pi: &ErDerivation| pi.clause_count() + pi.premises.len();
        self.input.len()
            + self
                .steps
                .iter()
                .map(|s| match s {
                    ErplsStep::Er(pi) => er(pi),
                    ErplsStep::Dom(d) => er(&d.pi_a) + er(&d.pi_b) + d.delta.axioms.len() + 1,
                })
                .sum::<usize>()
    }
}

/// The CNFs Γ_0 = input, Γ_1, … after each step.
#[derive(Clone, Debug)]
pub struct ErplsTrace {
    pub cnfs: Vec<Cnf>,
}

impl ErplsTrace {
    pub fn last(&self) -> &Cnf {
        self.cnfs.last().expect("holds the input")
    }
}

fn er_premises_match(pi: &ErDerivation, want: &Cnf, what: &str) -> Result<(), String> {
    if pi.premises != *want {
        let missing = want.iter().find(|c| !pi.premises.contains(c));
        let extra = pi.premises.iter().find(|c| !want.contains(c));
        return Err(match (missing, extra) {
            (Some(c), _) => format!("{what}: premise {c} is missing"),
            (_, Some(c)) => format!("{what}: {c} is not an allowed premise"),
            _ => format!("{what}: premises differ"),
        });
    }
    Ok(())
}

/// Checks a dominance rule application against the running CNF.
pub fn check_dom_rule(gamma: &Cnf, rule: &DomRule) -> Result<(), String> {
    let xs: BTreeSet<Var> = rule.order.vars().iter().copied().collect();
    if xs != gamma.vars() {
        return Err("the variable order must list exactly the variables of the running CNF".into());
    }
    if xs.is_empty() {
        return Err("the running CNF has no variables to order".into());
    }
    let block = ExtensionBlock {
        base: xs.clone(),
        axioms: rule.delta.axioms.clone(),
    };
    block.validate().map_err(|e| format!("Δ: {e}"))?;
    let ys: BTreeSet<Var> = block.defined().into_iter().collect();
    if let Some(l) = rule.c.iter().find(|l| l.var().is_none_or(|v| !xs.contains(&v))) {
        return Err(format!("C may only mention x̄ variables, found {l}"));
    }
    for (v, img) in rule.omega.entries() {
        if !xs.contains(&v) && img != Lit::Pos(v) {
            return Err(format!("ω moves x{v}, which is not in x̄"));
        }
        if let Some(u) = img.var() {
            if !xs.contains(&u) && !ys.contains(&u) {
                return Err(format!("ω maps x{v} to {img}, outside x̄ and ȳ"));
            }
        }
    }
    let expected = DomRule::make_gadget(&rule.order, &rule.omega, rule.gadget.first_aux)?;
    if expected != rule.gadget {
        return Err("the order gadget is not [x̄ ≤lex x̄↾ω] on its stated auxiliaries".into());
    }
    for v in rule.gadget.aux_vars() {
        if xs.contains(&v) || ys.contains(&v) {
            return Err(format!("gadget auxiliary x{v} may not appear in Γ, Δ, or C"));
        }
    }
    for (pi, name) in [(&rule.pi_a, "first derivation"), (&rule.pi_b, "second derivation")] {
        if !pi.protected.is_empty() {
            return Err(format!("{name}: protected variables are not allowed here"));
        }
    }
    er_premises_match(&rule.pi_a, &rule.premises_a(gamma), "first derivation")?;
    check_er(&rule.pi_a).map_err(|e| format!("first derivation: {e}"))?;
    for d in rule.required(gamma) {
        if !rule.pi_a.conclusions.contains(&d) && !rule.pi_a.conclusions.contains(&d.without(Lit::False)) {
            return Err(format!("first derivation does not conclude {d} of Γ↾ω"));
        }
    }
    er_premises_match(&rule.pi_b, &rule.premises_b(gamma), "second derivation")?;
    check_er(&rule.pi_b).map_err(|e| format!("second derivation: {e}"))?;
    if !rule.pi_b.conclusions.contains_empty() {
        return Err("second derivation does not conclude ⊥".into());
    }
    Ok(())
}

/// Applies one step, returning the next CNF.
pub fn apply_step(gamma: &Cnf, step: &ErplsStep) -> Result<Cnf, String> {
    match step {
        ErplsStep::Er(pi) => {
            er_premises_match(pi, gamma, "derivation")?;
            check_er(pi).map_err(|e| e.to_string())?;
            Ok(gamma.union(&pi.conclusions))
        }
        ErplsStep::Dom(rule) => {
            check_dom_rule(gamma, rule)?;
            let mut next = gamma.clone();
            next.push(rule.c.clone());
            Ok(next)
        }
    }
}

/// Checks every step, without requiring a refutation.
pub fn check_erpls_steps(p: &ErplsProof) -> Result<ErplsTrace, Rejection> {
    let mut cnfs = vec![p.input.clone()];
    for (i, step) in p.steps.iter().enumerate() {
        let next = apply_step(cnfs.last().unwrap(), step).map_err(|e| Rejection::at(i, format!("{}: {e}", step.rule())))?;
        cnfs.push(next);
    }
    Ok(ErplsTrace { cnfs })
}

/// Checks every step and that the final CNF contains the empty clause.
pub fn check_erpls(p: &ErplsProof) -> Result<ErplsTrace, Rejection> {
    let t = check_erpls_steps(p)?;
    if !t.last().contains_empty() {
        return Err(Rejection::global("the final CNF does not contain the empty clause"));
    }
    Ok(t)
}

/// Whether each consecutive pair of CNFs of an accepted proof is
/// equisatisfiable.
pub fn step_equisat_test(p: &ErplsProof) -> Result<bool, OracleError> {
    let t = check_erpls_steps(p).map_err(|e| OracleError::Precondition(e.to_string()))?;
    let sats: Vec<bool> = t.cnfs.iter().map(is_sat).collect::<Result<_, _>>()?;
    Ok(sats.windows(2).all(|w| w[0] == w[1]))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::er::search::refute;
    use crate::er::ErBuilder;

    fn cnf(cs: &[&[i64]]) -> Cnf {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    fn refutation(premises: Cnf) -> ErDerivation {
        let mut b = ErBuilder::new(premises.clone(), BTreeSet::new());
        let avail: Vec<usize> = (0..premises.len()).map(|i| b.premise(i)).collect();
        refute(&mut b, &avail, 100_000).expect("unsatisfiable");
        b.finish(cnf(&[&[]]))
    }

    fn identity_premises(premises: Cnf, keep: &Cnf) -> ErDerivation {
        let mut b = ErBuilder::new(premises, BTreeSet::new());
        for c in keep.iter() {
            b.find(c).unwrap();
        }
        b.finish(keep.clone())
    }

    fn all_four() -> Cnf {
        cnf(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]])
    }

    #[test]
    fn er_only() {
        let g = all_four();
        let p = ErplsProof {
            input: g.clone(),
            steps: vec![ErplsStep::Er(refutation(g))],
        };
        check_erpls(&p).unwrap();
        assert!(step_equisat_test(&p).unwrap());
    }

    fn swap_rule(gamma: &Cnf, first_aux: Var) -> DomRule {
        let order = VarOrder::new(vec![1, 2]).unwrap();
        let omega = Substitution::swap(1, 2);
        let c = Clause::from_dimacs(&[-1, 2]);
        let gadget = DomRule::make_gadget(&order, &omega, first_aux).unwrap();
        let mut rule = DomRule {
            c,
            order,
            delta: ExtensionBlock::default(),
            omega,
            pi_a: ErDerivation::default(),
            pi_b: ErDerivation::default(),
            gadget,
        };
        let pa = rule.premises_a(gamma);
        let target: Cnf = rule.required(gamma).into_iter().collect();
        rule.pi_a = identity_premises(pa, &target);
        rule.pi_b = refutation(rule.premises_b(gamma));
        rule
    }

    #[test]
    fn dominance_then_resolution() {
        let g = all_four();
        let rule = swap_rule(&g, 3);
        let mut next = g.clone();
        next.push(rule.c.clone());
        let p = ErplsProof {
            input: g,
            steps: vec![ErplsStep::Dom(Box::new(rule)), ErplsStep::Er(refutation(next))],
        };
        check_erpls(&p).unwrap();
        assert!(step_equisat_test(&p).unwrap());
    }

    #[test]
    fn gadget_reusing_gamma_variable() {
        let g = all_four();
        let rule = swap_rule(&g, 2);
        let err = check_dom_rule(&g, &rule).unwrap_err();
        assert!(err.contains("may not appear"), "{err}");
    }

    #[test]
    fn missing_conclusion_of_gamma_omega() {
        let g = cnf(&[&[1, -2]]);
        let mut rule = swap_rule(&cnf(&[&[1, 2], &[-1, -2]]), 3);
        rule.pi_a = identity_premises(rule.premises_a(&g), &Cnf::new());
        rule.pi_b = ErDerivation::default();
        assert!(check_dom_rule(&g, &rule).is_err());
    }

    #[test]
    fn not_a_refutation() {
        let p = ErplsProof {
            input: cnf(&[&[1]]),
            steps: vec![],
        };
        assert!(check_erpls(&p).is_err());
        assert!(step_equisat_test(&p).unwrap());
    }
}
