//! Random formulas, proofs, dominance steps and mutations. Every generator
//! is driven by an explicit seeded RNG so failures replay.

use std::collections::BTreeSet;

use num_bigint::BigInt;
use rand::seq::SliceRandom;
use rand::{Rng as _, SeedableRng};
use rand_chacha::ChaCha8Rng;

use domproof::cp::{CpBuilder, CpDerivation, CpStep, CpWitness};
use domproof::dominance::{Checker, Configuration, CoreRemoval, DomProof, DomStep, Mode, OrderSpec, Removal};
use domproof::er::{ErBuilder, ErDerivation, ErStep, ExtAxiom};
use domproof::oracle::config_valid;
use domproof::translate::extension_redundance;
use domproof::{clause_to_pb, Assignment, Clause, Cnf, Lit, PbConstraint, PbFormula, Substitution, Var};

pub type Rng = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn random_lit(r: &mut Rng, n: Var) -> Lit {
    Lit::new(r.gen_range(1..=n), r.gen_bool(0.5))
}

pub fn random_clause(r: &mut Rng, n: Var, max_width: usize) -> Clause {
    let w = r.gen_range(1..=max_width);
    Clause::new((0..w).map(|_| random_lit(r, n)))
}

pub fn random_cnf(r: &mut Rng, n: Var, m: usize, max_width: usize) -> Cnf {
    (0..m).map(|_| random_clause(r, n, max_width)).collect()
}

pub fn random_pb(r: &mut Rng, n: Var, max_terms: usize, max_coef: i64) -> PbConstraint {
    let k = r.gen_range(1..=max_terms);
    let terms: Vec<(BigInt, Lit)> = (0..k)
        .map(|_| (BigInt::from(r.gen_range(1..=max_coef)), random_lit(r, n)))
        .collect();
    let total: i64 = max_coef * k as i64;
    let bound = r.gen_range(0..=total.max(1));
    PbConstraint::new(terms, domproof::Relation::Ge, bound)
}

pub fn random_pb_formula(r: &mut Rng, n: Var, m: usize) -> PbFormula {
    (0..m).map(|_| random_pb(r, n, 3, 3)).collect()
}

/// A map from x1..xn to literals over x1..xn and constants.
pub fn random_substitution(r: &mut Rng, n: Var, const_prob: f64) -> Substitution {
    Substitution::from_pairs((1..=n).map(|v| {
        let img = if r.gen_bool(const_prob) {
            Lit::constant(r.gen_bool(0.5))
        } else {
            random_lit(r, n)
        };
        (v, img)
    }))
}

/// A permutation of x1..xn with random signs.
pub fn random_signed_permutation(r: &mut Rng, n: Var) -> Substitution {
    let mut vars: Vec<Var> = (1..=n).collect();
    vars.shuffle(r);
    Substitution::from_pairs((1..=n).zip(vars).map(|(v, u)| (v, Lit::new(u, r.gen_bool(0.7)))))
}

/// A product of disjoint transpositions on x1..xn.
pub fn random_involution(r: &mut Rng, n: Var) -> Substitution {
    let mut vars: Vec<Var> = (1..=n).collect();
    vars.shuffle(r);
    let pairs = r.gen_range(1..=(n as usize / 2).max(1));
    let mut s = Substitution::identity();
    for k in 0..pairs.min(vars.len() / 2) {
        let (a, b) = (vars[2 * k], vars[2 * k + 1]);
        s.set(a, Lit::Pos(b));
        s.set(b, Lit::Pos(a));
    }
    s
}

/// Closes a CNF under ω by adding the images of each clause until the orbit
/// repeats. The result has ω as a symmetry.
pub fn close_under(cnf: &Cnf, omega: &Substitution) -> Cnf {
    let mut out = Cnf::new();
    for c in cnf.iter() {
        let mut d = c.clone();
        while out.push(d.clone()) {
            d = d.substitute(omega);
        }
    }
    out
}

/// A random CNF over x1..xn with a nontrivial symmetry ω moving only
/// variables (no constants), both returned.
pub fn symmetric_cnf(r: &mut Rng, n: Var, m: usize, max_width: usize) -> (Cnf, Substitution) {
    loop {
        let omega = if r.gen_bool(0.5) {
            random_involution(r, n)
        } else {
            random_signed_permutation(r, n)
        };
        if omega.is_identity() {
            continue;
        }
        let base = random_cnf(r, n, m, max_width);
        let g = close_under(&base, &omega);
        if g.iter().any(|c| c.is_tautologous()) || g.vars().len() != n as usize {
            continue;
        }
        return (g, omega);
    }
}

// ER ---------------------------------------------------------------------

/// A random ER derivation from `premises` by resolution, weakening and
/// extension. Variables range over x1..xn and the extension variables.
pub fn random_er(r: &mut Rng, premises: &Cnf, n: Var, steps: usize, extensions: bool) -> ErDerivation {
    let mut b = ErBuilder::new(premises.clone(), BTreeSet::new());
    for i in 0..premises.len() {
        b.premise(i);
    }
    let mut top = n.max(premises.max_var());
    for _ in 0..steps {
        let len = b.len();
        if len == 0 {
            break;
        }
        let seen: Vec<Var> = (0..len)
            .flat_map(|i| b.clause(i).vars())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let pick = |r: &mut Rng| Lit::new(seen[r.gen_range(0..seen.len())], r.gen_bool(0.5));
        match r.gen_range(0..10) {
            0..=5 => {
                let p = r.gen_range(0..len);
                let q = r.gen_range(0..len);
                let clash = b
                    .clause(p)
                    .iter()
                    .find(|&l| !l.is_const() && b.clause(q).contains(l.negate()));
                if let Some(l) = clash {
                    let (pos, neg) = if l.is_positive() { (p, q) } else { (q, p) };
                    b.resolve_on(pos, neg, l.var().unwrap());
                }
            }
            6 | 7 => {
                let p = r.gen_range(0..len);
                let extra = if seen.is_empty() || r.gen_bool(0.1) {
                    Lit::False
                } else {
                    pick(r)
                };
                let c = b.clause(p).with(extra);
                let w = b.weaken(p, c);
                if b.clause(w).contains(Lit::False) {
                    b.drop_zero(w);
                }
            }
            _ if extensions => {
                top += 1;
                let kind = if seen.is_empty() { 2 } else { r.gen_range(0..3) };
                let ax = match kind {
                    0 => ExtAxiom::And {
                        y: top,
                        u: pick(r),
                        v: pick(r),
                    },
                    1 => ExtAxiom::Alias { y: top, u: pick(r) },
                    _ => ExtAxiom::Const {
                        y: top,
                        value: r.gen_bool(0.5),
                    },
                };
                b.extend(ax);
            }
            _ => {}
        }
    }
    let len = b.len();
    let k = r.gen_range(1..=3.min(len.max(1)));
    let conclusions: Cnf = (0..k)
        .filter(|_| len > 0)
        .map(|_| b.clause(r.gen_range(0..len)).clone())
        .collect();
    b.finish(conclusions)
}

/// The definitions of the extension steps, in order.
fn er_definitions(pi: &ErDerivation) -> Vec<ExtAxiom> {
    pi.extension_axioms().copied().collect()
}

/// Whether every conclusion holds in every model of the premises extended
/// by evaluating the extension definitions in order.
pub fn er_claims_hold(pi: &ErDerivation) -> bool {
    let defs = er_definitions(pi);
    let defined: BTreeSet<Var> = defs.iter().map(|a| a.defined()).collect();
    let mut base: BTreeSet<Var> = pi.premises.vars();
    for c in pi.conclusions.iter() {
        base.extend(c.vars().filter(|v| !defined.contains(v)));
    }
    for d in &defs {
        base.extend(d.inputs().iter().filter_map(|l| l.var()).filter(|v| !defined.contains(v)));
    }
    let base: Vec<Var> = base.into_iter().collect();
    assert!(base.len() <= 20, "too many variables for the oracle");
    for bits in 0u64..1 << base.len() {
        let mut a = Assignment::from_pairs(base.iter().enumerate().map(|(i, &v)| (v, bits >> i & 1 == 1)));
        if !a.satisfies(&pi.premises) {
            continue;
        }
        for d in &defs {
            let val = d.eval(|v| a.value(v));
            a.set(d.defined(), val);
        }
        if !a.satisfies(&pi.conclusions) {
            return false;
        }
    }
    true
}

pub fn mutate_er(r: &mut Rng, pi: &ErDerivation) -> ErDerivation {
    let mut out = pi.clone();
    let top = pi.max_var().max(1);
    if out.steps.is_empty() || r.gen_bool(0.15) {
        out.conclusions.push(random_clause(r, top, 2));
        return out;
    }
    let i = r.gen_range(0..out.steps.len());
    let drop_lit = |r: &mut Rng, c: &Clause| -> Clause {
        if c.is_empty() {
            Clause::unit(random_lit(r, top))
        } else {
            let k = r.gen_range(0..c.len());
            Clause::new(c.iter().enumerate().filter(|(j, _)| *j != k).map(|(_, l)| l))
        }
    };
    match &mut out.steps[i] {
        ErStep::Premise(k) => *k = r.gen_range(0..pi.premises.len().max(1) + 1),
        ErStep::Resolve { a, b, pivot, result } => match r.gen_range(0..4) {
            0 => *result = drop_lit(r, result),
            1 => *pivot = random_lit(r, top),
            2 => *a = r.gen_range(0..=*a + 1),
            _ => *b = r.gen_range(0..=*b + 1),
        },
        ErStep::Weaken { result, .. } | ErStep::DropZero { result, .. } => *result = drop_lit(r, result),
        ErStep::Extend(ax) => {
            let old = *ax;
            let y = r.gen_range(1..=top);
            *ax = old.rename(|v| if v == old.defined() { y } else { v });
        }
    }
    out
}

// CP ---------------------------------------------------------------------

/// A random CP derivation whose goals are some of its own results.
pub fn random_cp(r: &mut Rng, hyps: &PbFormula, n: Var, steps: usize) -> CpDerivation {
    let hv: Vec<PbConstraint> = hyps.iter().cloned().collect();
    let mut b = CpBuilder::new(hv.clone());
    for i in 0..hv.len() {
        b.hyp(i);
    }
    for _ in 0..steps {
        let len = b.len();
        match r.gen_range(0..10) {
            0 => {
                b.axge(r.gen_range(1..=n));
            }
            1 => {
                b.axle(r.gen_range(1..=n));
            }
            2..=6 if len > 0 => {
                let (x, y) = (r.gen_range(0..len), r.gen_range(0..len));
                b.add(x, r.gen_range(0..4), y, r.gen_range(0..4));
            }
            _ if len > 0 => {
                let x = r.gen_range(0..len);
                let c = b.fact(x).clone();
                let d = (2..=4).find(|d| c.divisible_by(&BigInt::from(*d)));
                if let Some(d) = d {
                    b.div(x, d);
                }
            }
            _ => {}
        }
    }
    let len = b.len();
    let goals: PbFormula = (0..r.gen_range(1..=3))
        .filter(|_| len > 0)
        .map(|_| b.fact(r.gen_range(0..len)).clone())
        .collect();
    CpDerivation {
        hyps: hyps.clone(),
        steps: b.into_steps(),
        goals,
    }
}

fn implied(hyps: &PbFormula, goal: &PbConstraint) -> bool {
    let vars: Vec<Var> = hyps.vars().into_iter().chain(goal.vars()).collect::<BTreeSet<_>>().into_iter().collect();
    assert!(vars.len() <= 20, "too many variables for the oracle");
    (0u64..1 << vars.len()).all(|bits| {
        let val = |v: Var| vars.iter().position(|&u| u == v).is_some_and(|i| bits >> i & 1 == 1);
        !hyps.eval(val) || goal.eval(val)
    })
}

/// Whether every goal follows from the hypotheses over 0/1 points.
pub fn cp_claims_hold(pi: &CpDerivation) -> bool {
    pi.goals.iter().all(|g| implied(&pi.hyps, g))
}

fn mutate_steps(r: &mut Rng, steps: &mut [CpStep], nhyps: usize, top: Var) {
    if steps.is_empty() {
        return;
    }
    let i = r.gen_range(0..steps.len());
    match &mut steps[i] {
        CpStep::Hyp(k) => *k = r.gen_range(0..nhyps + 1),
        CpStep::AxGe(v) => *v = r.gen_range(1..=top),
        CpStep::AxLe(v) => *v = r.gen_range(1..=top),
        CpStep::Add { a, ma, b, mb } => match r.gen_range(0..4) {
            0 => *ma += 1,
            1 => *mb = mb.clone() * 2 + 1,
            2 => *a = r.gen_range(0..=*a + 1),
            _ => *b = r.gen_range(0..=*b + 1),
        },
        CpStep::Div { d, .. } => *d += 1,
    }
    if r.gen_bool(0.2) {
        let j = r.gen_range(0..steps.len());
        steps.swap(i, j);
    }
}

pub fn mutate_cp(r: &mut Rng, pi: &CpDerivation) -> CpDerivation {
    let mut out = pi.clone();
    let top = pi.hyps.max_var().max(pi.goals.max_var()).max(1);
    if out.steps.is_empty() || r.gen_bool(0.15) {
        let g = out.goals.iter().next().cloned().unwrap_or_else(|| random_pb(r, top, 2, 2));
        let stronger = PbConstraint::from_parts(g.terms().iter().cloned(), g.bound() + 1);
        out.goals.push(stronger);
        return out;
    }
    mutate_steps(r, &mut out.steps, pi.hyps.len(), top);
    out
}

// Dominance ---------------------------------------------------------------

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum RuleKind {
    Impl,
    Redundance,
    Deletion,
    Transfer,
    Dominance,
    OrderChange,
}

impl RuleKind {
    pub const ALL: [RuleKind; 6] = [
        RuleKind::Impl,
        RuleKind::Redundance,
        RuleKind::Deletion,
        RuleKind::Transfer,
        RuleKind::Dominance,
        RuleKind::OrderChange,
    ];

    pub fn of(step: &DomStep) -> RuleKind {
        match step {
            DomStep::Impl { .. } => RuleKind::Impl,
            DomStep::Redundance { .. } => RuleKind::Redundance,
            DomStep::Deletion { .. } => RuleKind::Deletion,
            DomStep::Transfer { .. } => RuleKind::Transfer,
            DomStep::Dominance { .. } => RuleKind::Dominance,
            DomStep::OrderChange { .. } => RuleKind::OrderChange,
        }
    }
}

fn available(cfg: &Configuration) -> Vec<PbConstraint> {
    cfg.core.iter().chain(cfg.derived.iter()).cloned().collect()
}

fn config_vars(cfg: &Configuration) -> Vec<Var> {
    let mut vs: BTreeSet<Var> = cfg.core.vars();
    vs.extend(cfg.derived.vars());
    vs.extend(cfg.zvars.iter().copied());
    vs.into_iter().collect()
}

fn is_symmetry_of(omega: &Substitution, f: &PbFormula) -> bool {
    f.substitute(omega) == *f
}

/// Coefficient of each order variable, zero outside the order.
fn order_coeff(cfg: &Configuration, v: Var) -> Option<BigInt> {
    let OrderSpec::Linear(b) = &cfg.order else {
        return None;
    };
    Some(cfg.zvars.iter().position(|&z| z == v).map(|i| b[i].clone()).unwrap_or_default())
}

fn gen_impl(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    let av = available(cfg);
    let mut b = CpBuilder::new(av.clone());
    let vars = config_vars(cfg);
    let s = if av.is_empty() || r.gen_bool(0.2) {
        let v = *vars.choose(r)?;
        let a = b.axge(v);
        let c = b.axle(v);
        b.add(a, r.gen_range(1..3), c, r.gen_range(1..3))
    } else {
        let x = b.hyp(r.gen_range(0..av.len()));
        let y = b.hyp(r.gen_range(0..av.len()));
        let s = b.add(x, r.gen_range(0..3), y, r.gen_range(1..3));
        if r.gen_bool(0.3) {
            let v = *vars.choose(r)?;
            let ax = b.axge(v);
            b.add(s, 1, ax, 1)
        } else {
            s
        }
    };
    let c = b.fact(s).clone();
    let d = (2..=3).find(|d| c.divisible_by(&BigInt::from(*d)) && r.gen_bool(0.5));
    let s = match d {
        Some(d) => b.div(s, d),
        None => s,
    };
    let c = b.fact(s).clone();
    Some(vec![DomStep::Impl {
        c,
        proof: b.into_witness(),
    }])
}

fn gen_redundance(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    let vars = config_vars(cfg);
    let fresh = vars.last().copied().unwrap_or(0) + 1;
    let e: PbFormula = available(cfg).into_iter().collect();
    match r.gen_range(0..3) {
        // a clause on a fresh variable, witnessed by setting it to 1
        0 => {
            let mut lits = vec![Lit::Pos(fresh)];
            if let Some(&v) = vars.choose(r) {
                lits.push(Lit::new(v, r.gen_bool(0.5)));
            }
            let c = clause_to_pb(&Clause::new(lits));
            Some(vec![DomStep::Redundance {
                c,
                omega: Substitution::from_pairs([(fresh, Lit::True)]),
                proof: CpWitness::default(),
            }])
        }
        // an extension axiom on a fresh variable
        1 => {
            let pick = |r: &mut Rng| vars.choose(r).map(|&v| Lit::new(v, r.gen_bool(0.5)));
            let ax = match r.gen_range(0..3) {
                0 => ExtAxiom::And {
                    y: fresh,
                    u: pick(r)?,
                    v: pick(r)?,
                },
                1 => ExtAxiom::Alias { y: fresh, u: pick(r)? },
                _ => ExtAxiom::Const {
                    y: fresh,
                    value: r.gen_bool(0.5),
                },
            };
            extension_redundance(&e, &ax, &cfg.order, &cfg.zvars).ok()
        }
        // ¬a ∨ b under a symmetry swapping a and b that fixes the order
        _ => {
            let (&a, &b) = (vars.choose(r)?, vars.choose(r)?);
            if a == b {
                return None;
            }
            let omega = Substitution::swap(a, b);
            if !is_symmetry_of(&omega, &e) {
                return None;
            }
            if !cfg.zvars.is_empty() && order_coeff(cfg, a) != order_coeff(cfg, b) {
                return None;
            }
            let c = clause_to_pb(&Clause::new([Lit::Neg(a), Lit::Pos(b)]));
            let neg = c.negate();
            let goal = c.substitute(&omega);
            let mut bld = CpBuilder::new(vec![neg.clone()]);
            let h = bld.hyp(0);
            bld.weaken(h, &goal).ok()?;
            Some(vec![DomStep::Redundance {
                c,
                omega,
                proof: bld.into_witness(),
            }])
        }
    }
}

fn gen_deletion(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    let derived: Vec<PbConstraint> = cfg.derived.iter().cloned().collect();
    let removal = if derived.is_empty() || r.gen_bool(0.3) {
        Removal::All
    } else {
        Removal::These(derived.iter().filter(|_| r.gen_bool(0.5)).cloned().collect())
    };
    let core = if r.gen_bool(0.5) {
        // a core constraint that is a weakening of another one
        let cs: Vec<PbConstraint> = cfg.core.iter().cloned().collect();
        let mut found = None;
        'outer: for c in &cs {
            for d in &cs {
                if c == d {
                    continue;
                }
                let mut b = CpBuilder::new(vec![d.clone()]);
                let h = b.hyp(0);
                if b.weaken(h, c).is_ok() {
                    found = Some(CoreRemoval {
                        constraint: c.clone(),
                        omega: Substitution::identity(),
                        proof: b.into_witness(),
                    });
                    break 'outer;
                }
            }
        }
        found
    } else {
        None
    };
    Some(vec![DomStep::Deletion { derived: removal, core }])
}

fn gen_transfer(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    let derived: Vec<PbConstraint> = cfg.derived.iter().cloned().collect();
    if derived.is_empty() {
        return None;
    }
    let mut constraints: Vec<PbConstraint> = derived.iter().filter(|_| r.gen_bool(0.6)).cloned().collect();
    if constraints.is_empty() {
        constraints.push(derived[0].clone());
    }
    Some(vec![DomStep::Transfer { constraints }])
}

/// ¬a ∨ ω(a) for a symmetry ω of the core, where a is the moved variable
/// of largest order coefficient.
fn gen_dominance(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    if cfg.zvars.is_empty() {
        return None;
    }
    let vars = config_vars(cfg);
    let n = vars.len() as Var;
    let omega = loop_symmetry(r, &cfg.core, &vars, n)?;
    let a = *cfg
        .zvars
        .iter()
        .filter(|&&z| omega.get(z) != Lit::Pos(z))
        .max_by_key(|&&z| order_coeff(cfg, z))?;
    let c = clause_to_pb(&Clause::new([Lit::Neg(a), omega.get(a)]).without(Lit::False));
    let neg = c.negate();
    let z = cfg.zlits();
    let zw = cfg.zlits_under(&omega);
    let fwd = cfg.order.instantiate(&zw, &z).ok()?;
    let back = cfg.order.instantiate(&z, &zw).ok()?;
    let scale = order_coeff(cfg, a)?;
    let mut b1 = CpBuilder::new(vec![neg.clone()]);
    let h = b1.hyp(0);
    let scaled = b1.add(h, scale.clone(), h, 0);
    for g in fwd.iter() {
        if !g.is_tautology() {
            b1.weaken(scaled, g).ok()?;
        }
    }
    let mut hyps = vec![neg];
    hyps.extend(back.iter().cloned());
    let mut b2 = CpBuilder::new(hyps);
    let h = b2.hyp(0);
    let mut acc = b2.add(h, scale, h, 0);
    for i in 1..=back.len() {
        let s = b2.hyp(i);
        acc = b2.add(acc, 1, s, 1);
    }
    b2.weaken(acc, &PbConstraint::contradiction()).ok()?;
    Some(vec![DomStep::Dominance {
        c,
        omega,
        proof: b1.into_witness(),
        refute: b2.into_witness(),
    }])
}

/// A random involution over the given variables that is a symmetry of `f`.
fn loop_symmetry(r: &mut Rng, f: &PbFormula, vars: &[Var], n: Var) -> Option<Substitution> {
    for _ in 0..20 {
        let local = random_involution(r, n);
        let omega = Substitution::from_pairs(local.entries().map(|(v, l)| {
            let u = l.var().unwrap();
            (vars[v as usize - 1], Lit::Pos(vars[u as usize - 1]))
        }));
        if !omega.is_identity() && is_symmetry_of(&omega, f) {
            return Some(omega);
        }
    }
    None
}

fn gen_order_change(r: &mut Rng, cfg: &Configuration) -> Option<Vec<DomStep>> {
    let mut steps = Vec::new();
    if !cfg.derived.is_empty() {
        steps.push(DomStep::Deletion {
            derived: Removal::All,
            core: None,
        });
    }
    let mut vars = config_vars(cfg);
    vars.shuffle(r);
    let k = r.gen_range(0..=vars.len());
    let zvars: Vec<Var> = vars[..k].to_vec();
    let order = if r.gen_bool(0.5) {
        OrderSpec::lex(k)
    } else {
        OrderSpec::Linear((0..k).map(|_| BigInt::from(r.gen_range(0..6))).collect())
    };
    steps.push(DomStep::OrderChange { order, zvars });
    Some(steps)
}

/// Candidate steps for one application of `kind`, possibly preceded by
/// preparatory steps. The checker decides whether they are accepted.
pub fn gen_rule(r: &mut Rng, cfg: &Configuration, kind: RuleKind) -> Option<Vec<DomStep>> {
    match kind {
        RuleKind::Impl => gen_impl(r, cfg),
        RuleKind::Redundance => gen_redundance(r, cfg),
        RuleKind::Deletion => gen_deletion(r, cfg),
        RuleKind::Transfer => gen_transfer(r, cfg),
        RuleKind::Dominance => gen_dominance(r, cfg),
        RuleKind::OrderChange => gen_order_change(r, cfg),
    }
}

/// Applies up to `len` randomly chosen, checker-accepted steps.
pub fn random_dom_steps(r: &mut Rng, ch: &mut Checker, len: usize) -> Vec<DomStep> {
    let mut out = Vec::new();
    for _ in 0..len * 3 {
        if out.len() >= len {
            break;
        }
        let kind = *RuleKind::ALL.choose(r).unwrap();
        let Some(cands) = gen_rule(r, ch.config(), kind) else {
            continue;
        };
        let mut trial = ch.clone();
        if cands.iter().all(|s| trial.apply(s).is_ok()) {
            *ch = trial;
            out.extend(cands);
        }
    }
    out
}

/// A dominance proof over `input` made of random steps and, when the input
/// clauses refute, a final implicational step deriving 0 ≥ 1 from them.
pub fn random_dom_proof(r: &mut Rng, input: &Cnf, mode: Mode, len: usize) -> DomProof {
    let pb = PbFormula::from_cnf(input);
    let mut ch = Checker::new(pb.clone(), mode);
    let mut steps = random_dom_steps(r, &mut ch, len);
    if let Some(pi) = crate::er_refutation(input) {
        let cp = domproof::cp::res_to_cp(&pi).expect("no extensions");
        let proof = CpWitness {
            hyps: cp.hyps.clone(),
            steps: cp.steps,
        };
        let step = DomStep::Impl {
            c: PbConstraint::contradiction(),
            proof,
        };
        if ch.apply(&step).is_ok() {
            steps.push(step);
        }
    }
    DomProof { input: pb, mode, steps }
}

fn mutate_subst(r: &mut Rng, omega: &Substitution, top: Var) -> Substitution {
    let mut out = omega.clone();
    let v = r.gen_range(1..=top);
    out.set(v, random_lit(r, top));
    out
}

fn mutate_pb(r: &mut Rng, c: &PbConstraint) -> PbConstraint {
    if r.gen_bool(0.5) || c.terms().is_empty() {
        PbConstraint::from_parts(c.terms().iter().cloned(), c.bound() + 1)
    } else {
        let mut terms = c.terms().to_vec();
        let k = r.gen_range(0..terms.len());
        terms[k].1 = -terms[k].1.clone();
        PbConstraint::from_parts(terms, c.bound().clone())
    }
}

fn mutate_witness(r: &mut Rng, w: &mut CpWitness, top: Var) {
    if w.steps.is_empty() || r.gen_bool(0.2) {
        w.steps.push(CpStep::AxGe(r.gen_range(1..=top)));
        return;
    }
    mutate_steps(r, &mut w.steps, w.hyps.len(), top);
}

/// Changes one random step of a dominance proof.
pub fn mutate_dom(r: &mut Rng, p: &DomProof) -> DomProof {
    let mut out = p.clone();
    if out.steps.is_empty() {
        return out;
    }
    let top = p.input.max_var().max(2) + 2;
    let i = r.gen_range(0..out.steps.len());
    match &mut out.steps[i] {
        DomStep::Impl { c, proof } => {
            if r.gen_bool(0.5) {
                *c = mutate_pb(r, c);
            } else {
                mutate_witness(r, proof, top);
            }
        }
        DomStep::Redundance { c, omega, proof } => match r.gen_range(0..3) {
            0 => *c = mutate_pb(r, c),
            1 => *omega = mutate_subst(r, omega, top),
            _ => mutate_witness(r, proof, top),
        },
        DomStep::Dominance { c, omega, proof, refute } => match r.gen_range(0..4) {
            0 => *c = mutate_pb(r, c),
            1 => *omega = mutate_subst(r, omega, top),
            2 => mutate_witness(r, proof, top),
            _ => mutate_witness(r, refute, top),
        },
        DomStep::Deletion { derived, core } => match core {
            Some(rm) if r.gen_bool(0.7) => {
                if r.gen_bool(0.5) {
                    rm.omega = mutate_subst(r, &rm.omega, top);
                } else {
                    mutate_witness(r, &mut rm.proof, top);
                }
            }
            _ => {
                *core = p.input.iter().next().map(|c| CoreRemoval {
                    constraint: c.clone(),
                    omega: Substitution::identity(),
                    proof: CpWitness::default(),
                });
                *derived = Removal::All;
            }
        },
        DomStep::Transfer { constraints } => constraints.push(random_pb(r, top, 2, 2)),
        DomStep::OrderChange { order, zvars } => {
            if r.gen_bool(0.5) {
                zvars.push(zvars.first().copied().unwrap_or(1));
                if let OrderSpec::Linear(b) = order {
                    b.push(BigInt::from(1));
                }
            } else if let OrderSpec::Linear(b) = order {
                if let Some(x) = b.first_mut() {
                    *x = -x.clone() - 1;
                }
            }
        }
    }
    out
}

/// Replays the proof without checking and returns the first step after
/// which the configuration stops being valid, if any.
pub fn first_invalid_step(p: &DomProof, mode: Mode) -> Option<usize> {
    let mut ch = Checker::new(p.input.clone(), mode);
    if !config_valid(ch.config()).unwrap_or(true) {
        return None;
    }
    for (i, s) in p.steps.iter().enumerate() {
        ch.apply_unchecked(s);
        if !config_valid(ch.config()).unwrap_or(true) {
            return Some(i);
        }
    }
    None
}
