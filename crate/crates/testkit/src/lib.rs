//! Builders for small proofs, a corpus of ER-PLS refutations and random
//! generators shared by the integration tests.

use std::collections::BTreeSet;

use domproof::er::search::{derive_clause, refute};
use domproof::er::{ErBuilder, ErDerivation, ExtAxiom, ExtensionBlock};
use domproof::erpls::DomRule;
use domproof::oracle::{is_sat, VarOrder};
use domproof::ordering::LexGadget;
use domproof::{Clause, Cnf, Lit, Substitution, Var};

pub mod corpus;
pub mod fuzz;

pub fn cnf(cs: &[&[i64]]) -> Cnf {
    cs.iter().map(|c| Clause::from_dimacs(c)).collect()
}

pub const SEARCH_BUDGET: usize = 2_000_000;

/// Clauses over the interface of each adder bit (sum, carries and inputs)
/// of width at most two that the bit's own axioms imply, derived into `b`.
/// These let unit propagation see through bits whose two inputs coincide.
pub fn gadget_lemmas(b: &mut ErBuilder, g: &LexGadget) -> Vec<usize> {
    let mut out = Vec::new();
    for bit in &g.bits {
        let local: Cnf = bit.axioms.iter().flat_map(|a| a.clauses()).collect();
        let Some(avail) = local.iter().map(|c| b.find(c)).collect::<Option<Vec<usize>>>() else {
            continue;
        };
        let mut iface: BTreeSet<Var> = [Some(bit.sum), bit.carry, bit.inputs[1].var()].into_iter().flatten().collect();
        iface.extend(bit.inputs.iter().filter_map(|l| l.var()));
        let iface: Vec<Var> = iface.into_iter().collect();
        let mut candidates: Vec<Clause> = Vec::new();
        for (i, &u) in iface.iter().enumerate() {
            for su in [true, false] {
                candidates.push(Clause::unit(Lit::new(u, su)));
                for &v in &iface[i + 1..] {
                    for sv in [true, false] {
                        candidates.push(Clause::new([Lit::new(u, su), Lit::new(v, sv)]));
                    }
                }
            }
        }
        for cand in candidates {
            let mut probe = local.clone();
            probe.extend(cand.negate().iter().cloned());
            if is_sat(&probe).unwrap_or(true) {
                continue;
            }
            if let Some(p) = derive_clause(b, &avail, &cand, 10_000) {
                out.push(p);
            }
        }
    }
    out
}

/// A refutation of `premises`, helped along by lemmas about the given
/// gadgets. Tries without the clauses of `hint_skip` first.
pub fn er_refutation_with(premises: &Cnf, gadgets: &[&LexGadget], hint_skip: &Cnf) -> Option<ErDerivation> {
    let mut b = ErBuilder::new(premises.clone(), BTreeSet::new());
    let mut lemmas = Vec::new();
    for g in gadgets {
        lemmas.extend(gadget_lemmas(&mut b, g));
    }
    let mut narrow = lemmas.clone();
    for c in premises.iter().filter(|c| !hint_skip.contains(c)) {
        narrow.push(b.find(c).unwrap());
    }
    let found = if hint_skip.is_empty() {
        None
    } else {
        refute(&mut b, &narrow, SEARCH_BUDGET / 4)
    };
    if found.is_none() {
        let mut all = lemmas;
        for c in premises.iter() {
            all.push(b.find(c).unwrap());
        }
        refute(&mut b, &all, SEARCH_BUDGET)?;
    }
    Some(b.finish(cnf(&[&[]])))
}

pub fn er_refutation(premises: &Cnf) -> Option<ErDerivation> {
    er_refutation_with(premises, &[], &Cnf::new())
}

/// A derivation of every target from `premises`, concluding exactly the
/// targets.
pub fn er_derive(premises: &Cnf, targets: &Cnf) -> Option<ErDerivation> {
    let mut b = ErBuilder::new(premises.clone(), BTreeSet::new());
    let mut avail: Vec<usize> = premises.iter().map(|c| b.find(c).unwrap()).collect();
    for t in targets.iter() {
        let p = derive_clause(&mut b, &avail, t, SEARCH_BUDGET)?;
        avail.push(p);
    }
    Some(b.finish(targets.clone()))
}

/// An ER derivation that only adds extension axioms.
pub fn er_extend(premises: &Cnf, axioms: &[ExtAxiom]) -> ErDerivation {
    let mut b = ErBuilder::new(premises.clone(), BTreeSet::new());
    let mut out = Cnf::new();
    for ax in axioms {
        b.extend(*ax);
        out.extend(ax.clauses());
    }
    b.finish(out)
}

/// ¬a ∨ ω(a) for the first variable a of the order that ω moves: with a = 1
/// and ω(a) = 0 the tuple is lexicographically above its image.
pub fn lex_leader_clause(order: &VarOrder, omega: &Substitution) -> Option<Clause> {
    let a = *order.vars().iter().find(|&&v| omega.get(v) != Lit::Pos(v))?;
    let c = Clause::new([Lit::Neg(a), omega.get(a)]);
    Some(c.without(Lit::False))
}

/// A dominance rule application adding `c` to `gamma`, with both
/// derivations found by search. The order is the natural one on vars(Γ).
pub fn dom_rule(gamma: &Cnf, c: Clause, omega: Substitution, delta: Vec<ExtAxiom>) -> Result<DomRule, String> {
    let order = VarOrder::natural(gamma.vars());
    let xs: BTreeSet<Var> = gamma.vars();
    let delta = ExtensionBlock::new(xs, delta)?;
    let top = gamma
        .max_var()
        .max(delta.defined().into_iter().max().unwrap_or(0))
        .max(omega.max_var());
    let gadget = DomRule::make_gadget(&order, &omega, top + 1)?;
    let mut rule = DomRule {
        c,
        order,
        delta,
        omega,
        pi_a: ErDerivation::default(),
        pi_b: ErDerivation::default(),
        gadget,
    };
    let targets: Cnf = rule.required(gamma).into_iter().map(|d| d.without(Lit::False)).collect();
    rule.pi_a = er_derive(&rule.premises_a(gamma), &targets).ok_or("no derivation of Γ↾ω")?;
    rule.pi_b = er_refutation_with(&rule.premises_b(gamma), &[&rule.gadget], gamma).ok_or("no refutation with the order gadget")?;
    Ok(rule)
}

/// The lex-leader dominance rule for a symmetry ω of Γ.
pub fn symmetry_rule(gamma: &Cnf, omega: Substitution) -> Result<DomRule, String> {
    let order = VarOrder::natural(gamma.vars());
    let c = lex_leader_clause(&order, &omega).ok_or("ω is the identity on vars(Γ)")?;
    dom_rule(gamma, c, omega, Vec::new())
}
