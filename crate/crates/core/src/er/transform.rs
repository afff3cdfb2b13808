use std::collections::{BTreeSet, HashMap, HashSet};

use super::search::derive_clause;
use super::{rename_clause, rename_lit, ErBuilder, ErDerivation, ErStep, ExtAxiom, ExtensionBlock};
use crate::syntax::{Clause, Cnf, Lit, Var, VarAlloc};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum TransformError {
    #[error("variable disjointness violated: {0}")]
    Disjointness(String),
    #[error("premise {0} of the second derivation is not derived by the first")]
    MissingPremise(Clause),
    #[error("not an extension block: {0}")]
    NotABlock(String),
    #[error("the unit clause ¬x{0} is not a premise")]
    MissingNegatedUnit(Var),
    #[error("malformed input derivation at step {step}: {reason}")]
    Malformed { step: usize, reason: String },
    #[error("could not derive {0}")]
    Underivable(Clause),
}

/// Replays a derivation into a builder. Premise steps are resolved through
/// `premise`, which returns a builder position; everything else is copied
/// with renamed variables and remapped references. Returns the map from
/// source clause positions to builder positions.
fn replay(
    b: &mut ErBuilder,
    pi: &ErDerivation,
    rename: &impl Fn(Var) -> Var,
    mut premise: impl FnMut(&mut ErBuilder, &Clause) -> Result<usize, TransformError>,
) -> Result<Vec<usize>, TransformError> {
    let mut map: Vec<usize> = Vec::with_capacity(pi.clause_count());
    for (i, step) in pi.steps.iter().enumerate() {
        if let Some(bad) = referenced(step).into_iter().find(|&r| r >= map.len()) {
            return Err(TransformError::Malformed {
                step: i,
                reason: format!("reference {bad} is not an earlier clause"),
            });
        }
        match step {
            ErStep::Premise(k) => {
                let c = pi.premises.get(*k).ok_or_else(|| TransformError::Malformed {
                    step: i,
                    reason: format!("no premise {k}"),
                })?;
                let c = rename_clause(c, rename);
                map.push(premise(b, &c)?);
            }
            ErStep::Resolve { a, b: bb, pivot, .. } => {
                let p = b.resolve(map[*a], map[*bb], rename_lit(*pivot, rename));
                map.push(p);
            }
            ErStep::Weaken { from, result } => {
                let p = b.weaken(map[*from], rename_clause(result, rename));
                map.push(p);
            }
            ErStep::DropZero { from, .. } => {
                let p = b.drop_zero(map[*from]);
                map.push(p);
            }
            ErStep::Extend(ax) => {
                let first = b.extend(ax.rename(rename));
                map.extend((0..ax.clauses().len()).map(|k| first + k));
            }
        }
    }
    Ok(map)
}

fn referenced(step: &ErStep) -> Vec<usize> {
    match step {
        ErStep::Resolve { a, b, .. } => vec![*a, *b],
        ErStep::Weaken { from, .. } | ErStep::DropZero { from, .. } => vec![*from],
        _ => vec![],
    }
}

/// From π₁ : Γ∧A ⊢ B and π₂ : Γ∧B ⊢ Δ builds Γ∧A ⊢ Δ. Extension variables
/// of π₂ that do not occur in Δ get fresh names.
pub fn compose_er(pi1: &ErDerivation, pi2: &ErDerivation) -> Result<ErDerivation, TransformError> {
    let ext2: Vec<Var> = pi2.extension_axioms().map(|a| a.defined()).collect();
    let concl_vars = pi2.conclusions.vars();
    let kept: HashSet<Var> = ext2.iter().copied().filter(|v| concl_vars.contains(v)).collect();
    let outer: BTreeSet<Var> = pi1
        .premises
        .vars()
        .into_iter()
        .chain(pi1.protected.iter().copied())
        .chain(pi1.conclusions.vars())
        .collect();
    if let Some(w) = kept.iter().find(|w| outer.contains(w)) {
        return Err(TransformError::Disjointness(format!(
            "x{w} is defined by the second derivation but occurs in the first"
        )));
    }
    let mut alloc = VarAlloc::above(pi1.max_var().max(pi2.max_var()));
    let mut rename1: HashMap<Var, Var> = HashMap::new();
    for ax in pi1.extension_axioms() {
        if kept.contains(&ax.defined()) {
            rename1.insert(ax.defined(), alloc.fresh());
        }
    }
    let mut rename2: HashMap<Var, Var> = HashMap::new();
    for &v in &ext2 {
        if !kept.contains(&v) {
            rename2.insert(v, alloc.fresh());
        }
    }
    let r1 = |v: Var| rename1.get(&v).copied().unwrap_or(v);
    let r2 = |v: Var| rename2.get(&v).copied().unwrap_or(v);
    let protected: BTreeSet<Var> = pi1.protected.union(&pi2.protected).copied().collect();
    let mut b = ErBuilder::new(pi1.premises.clone(), protected);
    replay(&mut b, pi1, &r1, |b, c| {
        b.find(c).ok_or_else(|| TransformError::MissingPremise(c.clone()))
    })?;
    replay(&mut b, pi2, &r2, |b, c| {
        b.lookup(c)
            .or_else(|| b.find(c))
            .ok_or_else(|| TransformError::MissingPremise(c.clone()))
    })?;
    let conclusions = pi2.conclusions.iter().map(|c| rename_clause(c, r2)).collect();
    Ok(b.finish(conclusions))
}

/// Moves every extension axiom into the premises. The returned derivation
/// has the same clause positions, with each extension clause now a premise.
pub fn hoist_extensions(pi: &ErDerivation) -> (ErDerivation, ExtensionBlock) {
    let axioms: Vec<ExtAxiom> = pi.extension_axioms().copied().collect();
    let base: BTreeSet<Var> = pi
        .premises
        .vars()
        .into_iter()
        .chain(pi.protected.iter().copied())
        .collect();
    let mut premises = pi.premises.clone();
    for ax in &axioms {
        premises.extend(ax.clauses());
    }
    let mut steps = Vec::with_capacity(pi.steps.len());
    for s in &pi.steps {
        match s {
            ErStep::Extend(ax) => {
                for c in ax.clauses() {
                    steps.push(ErStep::Premise(premises.index_of(&c).unwrap()));
                }
            }
            other => steps.push(other.clone()),
        }
    }
    let out = ErDerivation {
        premises,
        protected: pi.protected.clone(),
        steps,
        conclusions: pi.conclusions.clone(),
    };
    (out, ExtensionBlock { base, axioms })
}

/// From π₁ : Γ ⊢ Δ∧A with Δ an extension block, builds Γ∧Δ ⊢ Δ∧A by
/// replaying π₁ on renamed copies of Δ's variables and proving each renamed
/// variable equivalent to the original.
pub fn pull_conclusions(pi1: &ErDerivation, delta: &ExtensionBlock) -> Result<ErDerivation, TransformError> {
    delta.validate().map_err(TransformError::NotABlock)?;
    let ys = delta.defined();
    let mut alloc = VarAlloc::above(pi1.max_var().max(delta.base.iter().copied().max().unwrap_or(0)));
    let rho: HashMap<Var, Var> = ys.iter().map(|&y| (y, alloc.fresh())).collect();
    let r = |v: Var| rho.get(&v).copied().unwrap_or(v);
    let mut premises = pi1.premises.clone();
    premises.extend(delta.clauses());
    let mut b = ErBuilder::new(premises, pi1.protected.clone());
    replay(&mut b, pi1, &r, |b, c| {
        b.find(c).ok_or_else(|| TransformError::MissingPremise(c.clone()))
    })?;
    // Equivalences y ↔ z for each defined variable, in block order.
    let mut forward: HashMap<Var, usize> = HashMap::new(); // ¬y ∨ z
    let mut backward: HashMap<Var, usize> = HashMap::new(); // ¬z ∨ y
    for ax in &delta.axioms {
        let y = ax.defined();
        let z = rho[&y];
        let mut local = Vec::new();
        for c in ax.clauses() {
            local.push(b.find(&c).expect("block clause is a premise"));
            let renamed = rename_clause(&c, r);
            let p = b
                .lookup(&renamed)
                .ok_or_else(|| TransformError::Underivable(renamed.clone()))?;
            local.push(p);
        }
        for l in ax.inputs() {
            if let Some(v) = l.var() {
                if let Some(&p) = forward.get(&v) {
                    local.push(p);
                    local.push(backward[&v]);
                }
            }
        }
        let fw = Clause::new([Lit::Neg(y), Lit::Pos(z)]);
        let bw = Clause::new([Lit::Neg(z), Lit::Pos(y)]);
        let pf = derive_clause(&mut b, &local, &fw, 10_000).ok_or(TransformError::Underivable(fw))?;
        let pb = derive_clause(&mut b, &local, &bw, 10_000).ok_or(TransformError::Underivable(bw))?;
        forward.insert(y, pf);
        backward.insert(y, pb);
    }
    for c in &pi1.conclusions {
        if b.lookup(c).is_some() || b.premises().contains(c) {
            b.find(c);
            continue;
        }
        let renamed = rename_clause(c, r);
        let mut pos = b
            .lookup(&renamed)
            .ok_or_else(|| TransformError::Underivable(renamed.clone()))?;
        for l in c.iter() {
            let Some(v) = l.var() else { continue };
            let Some(&z) = rho.get(&v) else { continue };
            let zl = if l.is_positive() { Lit::Pos(z) } else { Lit::Neg(z) };
            if !b.clause(pos).contains(zl) {
                continue;
            }
            let eq = if l.is_positive() { backward[&v] } else { forward[&v] };
            pos = b.resolve_on(pos, eq, z);
        }
        if b.clause(pos) != c {
            return Err(TransformError::Underivable(c.clone()));
        }
    }
    Ok(b.finish(pi1.conclusions.clone()))
}

/// Where the clauses of a refutation ended up after adding `z` to each.
pub(crate) struct RefutationImage {
    /// Builder position of the unit clause z.
    pub empty: usize,
}

/// Replays a refutation of Γ ∧ ¬z into `b`, deriving C ∨ z for each clause
/// C other than ¬z. Source premises other than ¬z are looked up in the
/// builder. Returns the position of the unit clause z.
pub(crate) fn refutation_into(
    b: &mut ErBuilder,
    pi: &ErDerivation,
    z: Var,
    alloc: &mut VarAlloc,
) -> Result<RefutationImage, TransformError> {
    let zl = Lit::Pos(z);
    let nz = Clause::unit(Lit::Neg(z));
    let mut image: Vec<Option<usize>> = Vec::with_capacity(pi.clause_count());
    let mut source: Vec<Clause> = Vec::with_capacity(pi.clause_count());
    let mut taut: Option<usize> = None;
    for (i, step) in pi.steps.iter().enumerate() {
        let malformed = |reason: &str| TransformError::Malformed {
            step: i,
            reason: reason.to_string(),
        };
        if let Some(bad) = referenced(step).into_iter().find(|&r| r >= image.len()) {
            return Err(malformed(&format!("reference {bad} is not an earlier clause")));
        }
        match step {
            ErStep::Premise(k) => {
                let c = pi.premises.get(*k).ok_or_else(|| malformed("no such premise"))?.clone();
                if c == nz {
                    image.push(None);
                } else {
                    let p = b.find(&c).ok_or_else(|| TransformError::MissingPremise(c.clone()))?;
                    image.push(Some(b.weaken_to(p, c.with(zl))));
                }
                source.push(c);
            }
            ErStep::Resolve { a, b: bb, pivot, result } => {
                let target = result.with(zl);
                if pivot.var() == Some(z) {
                    // the side holding z carries B ∨ z; the other side is ¬z or A ∨ ¬z
                    let z_side = if *pivot == zl { *a } else { *bb };
                    let p = image[z_side].ok_or_else(|| malformed("resolution of ¬z with itself"))?;
                    image.push(Some(b.weaken_to(p, target)));
                } else {
                    let (pa, pb) = match (image[*a], image[*bb]) {
                        (Some(pa), Some(pb)) => (pa, pb),
                        _ => return Err(malformed("¬z resolved on another variable")),
                    };
                    let p = b.resolve(pa, pb, *pivot);
                    if b.clause(p) != &target {
                        return Err(malformed("resolvent does not match"));
                    }
                    image.push(Some(p));
                }
                source.push(result.clone());
            }
            ErStep::Weaken { from, result } => {
                let target = result.with(zl);
                let p = match image[*from] {
                    Some(p) => b.weaken_to(p, target),
                    None => {
                        // ¬z weakened: produce the tautology z ∨ ¬z first
                        let t = match taut {
                            Some(t) => t,
                            None => {
                                let aux = alloc.fresh();
                                let first = b.extend(ExtAxiom::Alias { y: aux, u: zl });
                                let t = b.resolve_on(first + 1, first, aux);
                                taut = Some(t);
                                t
                            }
                        };
                        b.weaken_to(t, target)
                    }
                };
                image.push(Some(p));
                source.push(result.clone());
            }
            ErStep::DropZero { from, result } => {
                let p = image[*from].ok_or_else(|| malformed("DropZero on ¬z"))?;
                image.push(Some(b.drop_zero(p)));
                source.push(result.clone());
            }
            ErStep::Extend(ax) => {
                let first = b.extend(*ax);
                for (k, c) in ax.clauses().into_iter().enumerate() {
                    image.push(Some(b.weaken_to(first + k, c.with(zl))));
                    source.push(c);
                }
            }
        }
    }
    let empty = source
        .iter()
        .position(|c| c.is_empty())
        .ok_or_else(|| TransformError::Underivable(Clause::empty()))?;
    let pos = image[empty].expect("⊥ is not ¬z");
    Ok(RefutationImage { empty: pos })
}

/// From a refutation of Γ ∧ ¬z builds a derivation Γ ⊢ z.
pub fn refutation_to_derivation(pi: &ErDerivation, z: Var) -> Result<ErDerivation, TransformError> {
    let nz = Clause::unit(Lit::Neg(z));
    if !pi.premises.contains(&nz) {
        return Err(TransformError::MissingNegatedUnit(z));
    }
    let premises: Cnf = pi.premises.iter().filter(|c| **c != nz).cloned().collect();
    let mut protected = pi.protected.clone();
    protected.insert(z);
    let mut b = ErBuilder::new(premises, protected);
    let mut alloc = VarAlloc::above(pi.max_var());
    refutation_into(&mut b, pi, z, &mut alloc)?;
    Ok(b.finish(Cnf::from_iter([Clause::unit(Lit::Pos(z))])))
}

/// Runs two derivations from the same premises one after the other and
/// concludes both conclusion sets. Extension variables of π₁ that occur
/// anywhere in π₂ are renamed.
pub fn concat_er(pi1: &ErDerivation, pi2: &ErDerivation) -> Result<ErDerivation, TransformError> {
    let used2: BTreeSet<Var> = pi2
        .premises
        .vars()
        .into_iter()
        .chain(pi2.protected.iter().copied())
        .chain(pi2.conclusions.vars())
        .chain(pi2.extension_axioms().map(|a| a.defined()))
        .collect();
    let outer1: BTreeSet<Var> = pi1.premises.vars().into_iter().chain(pi1.protected.iter().copied()).collect();
    if let Some(w) = pi2.extension_axioms().map(|a| a.defined()).find(|w| outer1.contains(w)) {
        return Err(TransformError::Disjointness(format!(
            "x{w} is defined by the second derivation but is not fresh for the first"
        )));
    }
    let mut alloc = VarAlloc::above(pi1.max_var().max(pi2.max_var()));
    let mut rename1: HashMap<Var, Var> = HashMap::new();
    for ax in pi1.extension_axioms() {
        if used2.contains(&ax.defined()) {
            rename1.insert(ax.defined(), alloc.fresh());
        }
    }
    let r1 = |v: Var| rename1.get(&v).copied().unwrap_or(v);
    let protected: BTreeSet<Var> = pi1.protected.union(&pi2.protected).copied().collect();
    let mut b = ErBuilder::new(pi1.premises.clone(), protected);
    replay(&mut b, pi1, &r1, |b, c| {
        b.find(c).ok_or_else(|| TransformError::MissingPremise(c.clone()))
    })?;
    replay(&mut b, pi2, &|v| v, |b, c| {
        b.find(c).ok_or_else(|| TransformError::MissingPremise(c.clone()))
    })?;
    let mut conclusions: Cnf = pi1.conclusions.iter().map(|c| rename_clause(c, r1)).collect();
    conclusions.extend(pi2.conclusions.iter().cloned());
    Ok(b.finish(conclusions))
}
