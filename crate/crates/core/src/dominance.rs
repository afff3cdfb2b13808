//! The dominance proof system over configurations (core, derived, order,
//! z̄), with the linear and weak linear restrictions.

use std::fmt;

use num_bigint::BigInt;

use crate::cp::{CpTrace, CpWitness};
use crate::pb::{LinearSum, PbConstraint, PbFormula};
use crate::syntax::{Lit, Substitution, Var};
use crate::Rejection;

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash, Default)]
pub enum Mode {
    Full,
    #[default]
    Linear,
    WeakLinear,
}

impl Mode {
    pub fn name(self) -> &'static str {
        match self {
            Mode::Full => "full",
            Mode::Linear => "linear",
            Mode::WeakLinear => "weak",
        }
    }
}

impl std::str::FromStr for Mode {
    type Err = String;
    fn from_str(s: &str) -> Result<Mode, String> {
        match s {
            "full" => Ok(Mode::Full),
            "linear" => Ok(Mode::Linear),
            "weak" | "weak-linear" => Ok(Mode::WeakLinear),
            _ => Err(format!("unknown mode {s}")),
        }
    }
}

/// An order O(x̄, ȳ) on k-tuples given by a PB formula over x̄ = 1..k and
/// ȳ = k+1..2k, with CP proofs that it is reflexive and transitive. The
/// transitivity proof works over ū = 1..k, v̄ = k+1..2k and w̄ = 2k+1..3k.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GeneralOrder {
    pub arity: usize,
    pub formula: PbFormula,
    pub refl: CpWitness,
    pub trans: CpWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum OrderSpec {
    /// Σ b_i x_i ≤ Σ b_i y_i.
    Linear(Vec<BigInt>),
    General(GeneralOrder),
}

impl Default for OrderSpec {
    fn default() -> OrderSpec {
        OrderSpec::top()
    }
}

fn block(k: usize, which: usize) -> impl Fn(usize) -> Var {
    move |i| (which * k + i + 1) as Var
}

impl OrderSpec {
    /// The trivial order on the empty tuple.
    pub fn top() -> OrderSpec {
        OrderSpec::Linear(Vec::new())
    }

    /// Lexicographic order on n variables, most significant first.
    pub fn lex(n: usize) -> OrderSpec {
        OrderSpec::Linear((0..n).map(|i| BigInt::from(1) << (n - 1 - i)).collect())
    }

    pub fn arity(&self) -> usize {
        match self {
            OrderSpec::Linear(b) => b.len(),
            OrderSpec::General(g) => g.arity,
        }
    }

    pub fn is_linear(&self) -> bool {
        matches!(self, OrderSpec::Linear(_))
    }

    /// O(lhs, rhs), that is lhs ⪯ rhs, at tuples of literals.
    pub fn instantiate(&self, lhs: &[Lit], rhs: &[Lit]) -> Result<PbFormula, String> {
        let k = self.arity();
        if lhs.len() != k || rhs.len() != k {
            return Err(format!(
                "order has arity {k} but was given tuples of length {} and {}",
                lhs.len(),
                rhs.len()
            ));
        }
        match self {
            OrderSpec::Linear(b) => Ok(PbFormula::from_iter([linear_order_constraint(b, lhs, rhs)])),
            OrderSpec::General(g) => {
                let (x, y) = (block(k, 0), block(k, 1));
                let sub = Substitution::from_pairs(
                    (0..k).map(|i| (x(i), lhs[i])).chain((0..k).map(|i| (y(i), rhs[i]))),
                );
                Ok(g.formula.substitute(&sub))
            }
        }
    }

    /// Whether lhs ⪯ rhs for 0/1 tuples.
    pub fn holds(&self, lhs: &[bool], rhs: &[bool]) -> bool {
        match self {
            OrderSpec::Linear(b) => {
                let f = |t: &[bool]| -> BigInt { b.iter().zip(t).filter(|(_, on)| **on).map(|(c, _)| c.clone()).sum() };
                f(lhs) <= f(rhs)
            }
            OrderSpec::General(g) => {
                let k = g.arity;
                g.formula.eval(|v| {
                    let i = v as usize - 1;
                    if i < k {
                        lhs[i]
                    } else if i < 2 * k {
                        rhs[i - k]
                    } else {
                        false
                    }
                })
            }
        }
    }

    /// Checks the reflexivity and transitivity proofs of a general order.
    /// Linear orders need none.
    pub fn validate(&self) -> Result<(), String> {
        let OrderSpec::General(g) = self else {
            return Ok(());
        };
        let k = g.arity;
        if let Some(v) = g.formula.vars().into_iter().find(|&v| v as usize > 2 * k || v == 0) {
            return Err(format!("order formula mentions x{v}, outside its 2·{k} dummy variables"));
        }
        let (u, v, w) = (block(k, 0), block(k, 1), block(k, 2));
        let lits = |f: &dyn Fn(usize) -> Var| -> Vec<Lit> { (0..k).map(|i| Lit::Pos(f(i))).collect() };
        let (uu, vv, ww) = (lits(&u), lits(&v), lits(&w));
        let refl_goal = self.instantiate(&uu, &uu)?;
        g.refl
            .check(|_| false, refl_goal.iter())
            .map_err(|e| format!("reflexivity proof: {e}"))?;
        let uv = self.instantiate(&uu, &vv)?;
        let vw = self.instantiate(&vv, &ww)?;
        let uw = self.instantiate(&uu, &ww)?;
        g.trans
            .check(|c| uv.contains(c) || vw.contains(c), uw.iter())
            .map_err(|e| format!("transitivity proof: {e}"))?;
        Ok(())
    }
}

/// Σ b_i·lhs_i ≤ Σ b_i·rhs_i.
pub fn linear_order_constraint(b: &[BigInt], lhs: &[Lit], rhs: &[Lit]) -> PbConstraint {
    let mut s = LinearSum::new();
    for ((c, &l), &r) in b.iter().zip(lhs).zip(rhs) {
        s.add_lit(c.clone(), r);
        s.add_lit(-c.clone(), l);
    }
    s.ge(0)
}

/// The single constraint of a linear order at two tuples of literals.
pub fn linear_order_formula(b: &[BigInt], lhs: &[Lit], rhs: &[Lit]) -> Result<PbFormula, String> {
    OrderSpec::Linear(b.to_vec()).instantiate(lhs, rhs)
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Configuration {
    pub core: PbFormula,
    pub derived: PbFormula,
    pub order: OrderSpec,
    pub zvars: Vec<Var>,
}

impl Configuration {
    pub fn initial(input: PbFormula) -> Configuration {
        Configuration {
            core: input,
            ..Configuration::default()
        }
    }

    pub fn has_contradiction(&self) -> bool {
        self.core.contains_contradiction() || self.derived.contains_contradiction()
    }

    pub fn contains(&self, c: &PbConstraint) -> bool {
        self.core.contains(c) || self.derived.contains(c)
    }

    pub fn zlits(&self) -> Vec<Lit> {
        self.zvars.iter().map(|&z| Lit::Pos(z)).collect()
    }

    /// z̄↾ω
    pub fn zlits_under(&self, omega: &Substitution) -> Vec<Lit> {
        self.zvars.iter().map(|&z| omega.get(z)).collect()
    }

    pub fn max_var(&self) -> Var {
        self.core
            .max_var()
            .max(self.derived.max_var())
            .max(self.zvars.iter().copied().max().unwrap_or(0))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Removal {
    All,
    These(Vec<PbConstraint>),
}

/// A core constraint removed by deletion, with the redundance witness
/// deriving it from the remaining core.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoreRemoval {
    pub constraint: PbConstraint,
    pub omega: Substitution,
    pub proof: CpWitness,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DomStep {
    Impl {
        c: PbConstraint,
        proof: CpWitness,
    },
    Redundance {
        c: PbConstraint,
        omega: Substitution,
        proof: CpWitness,
    },
    Deletion {
        derived: Removal,
        core: Option<CoreRemoval>,
    },
    Transfer {
        constraints: Vec<PbConstraint>,
    },
    Dominance {
        c: PbConstraint,
        omega: Substitution,
        /// C ∪ D ∪ {¬C} ⊢ C↾ω ∪ O(z̄↾ω, z̄)
        proof: CpWitness,
        /// C ∪ D ∪ {¬C} ∪ O(z̄, z̄↾ω) ⊢ ⊥
        refute: CpWitness,
    },
    OrderChange {
        order: OrderSpec,
        zvars: Vec<Var>,
    },
}

impl DomStep {
    pub fn rule(&self) -> &'static str {
        match self {
            DomStep::Impl { .. } => "implicational derivation",
            DomStep::Redundance { .. } => "redundance",
            DomStep::Deletion { .. } => "deletion",
            DomStep::Transfer { .. } => "transfer",
            DomStep::Dominance { .. } => "dominance",
            DomStep::OrderChange { .. } => "order change",
        }
    }

    pub fn witnesses(&self) -> Vec<&CpWitness> {
        match self {
            DomStep::Impl { proof, .. } | DomStep::Redundance { proof, .. } => vec![proof],
            DomStep::Dominance { proof, refute, .. } => vec![proof, refute],
            DomStep::Deletion { core: Some(r), .. } => vec![&r.proof],
            DomStep::OrderChange {
                order: OrderSpec::General(g),
                ..
            } => vec![&g.refl, &g.trans],
            _ => vec![],
        }
    }

    /// Total number of CP steps in the embedded witnesses.
    pub fn cp_len(&self) -> usize {
        self.witnesses().iter().map(|w| w.steps.len()).sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DomProof {
    pub input: PbFormula,
    pub mode: Mode,
    pub steps: Vec<DomStep>,
}

impl DomProof {
    /// Proof steps plus the CP steps of all witnesses.
    pub fn size(&self) -> usize {
        self.steps.iter().map(|s| 1 + s.cp_len()).sum()
    }
}

#[derive(Clone, Debug)]
pub struct DomTrace {
    pub config: Configuration,
    pub cp_steps: usize,
    pub max_bits: u64,
}

/// Applies dominance steps to a configuration, checking each.
#[derive(Clone, Debug)]
pub struct Checker {
    pub mode: Mode,
    config: Configuration,
    cp_steps: usize,
    max_bits: u64,
}

impl Checker {
    pub fn new(input: PbFormula, mode: Mode) -> Checker {
        Checker::from_config(Configuration::initial(input), mode)
    }

    pub fn from_config(config: Configuration, mode: Mode) -> Checker {
        Checker {
            mode,
            config,
            cp_steps: 0,
            max_bits: 0,
        }
    }

    pub fn config(&self) -> &Configuration {
        &self.config
    }

    pub fn into_config(self) -> Configuration {
        self.config
    }

    fn record(&mut self, t: &CpTrace) {
        self.cp_steps += t.derived.len();
        self.max_bits = self.max_bits.max(t.max_bits);
    }

    fn order_goal(&self, lhs: &[Lit], rhs: &[Lit]) -> Result<PbFormula, String> {
        self.config.order.instantiate(lhs, rhs)
    }

    /// Goals of the redundance rule: (C ∪ D ∪ {c})↾ω ∪ O(z̄↾ω, z̄), over the
    /// given core and derived sets.
    fn redundance_goals(
        &self,
        core: &PbFormula,
        derived: &PbFormula,
        c: &PbConstraint,
        omega: &Substitution,
    ) -> Result<Vec<PbConstraint>, String> {
        let mut goals: Vec<PbConstraint> = core
            .iter()
            .chain(derived.iter())
            .chain(std::iter::once(c))
            .map(|d| d.substitute(omega))
            .collect();
        let z = self.config.zlits();
        goals.extend(self.order_goal(&self.config.zlits_under(omega), &z)?.iter().cloned());
        Ok(goals)
    }

    /// Checks and applies one step.
    pub fn apply(&mut self, step: &DomStep) -> Result<(), String> {
        let cfg = &self.config;
        match step {
            DomStep::Impl { c, proof } => {
                let t = proof.check(|h| cfg.contains(h), [c]).map_err(|e| e.to_string())?;
                self.record(&t);
            }
            DomStep::Redundance { c, omega, proof } => {
                let neg = c.negate();
                let goals = self.redundance_goals(&cfg.core, &cfg.derived, c, omega)?;
                let t = proof
                    .check(|h| cfg.contains(h) || *h == neg, goals.iter())
                    .map_err(|e| e.to_string())?;
                self.record(&t);
            }
            DomStep::Deletion { derived, core } => {
                if let Removal::These(cs) = derived {
                    if let Some(c) = cs.iter().find(|c| !cfg.derived.contains(c)) {
                        return Err(format!("{c} is not a derived constraint"));
                    }
                }
                if let Some(r) = core {
                    if !cfg.core.contains(&r.constraint) {
                        return Err(format!("{} is not a core constraint", r.constraint));
                    }
                    let mut rest = cfg.core.clone();
                    rest.remove(&r.constraint);
                    let neg = r.constraint.negate();
                    let goals = self.redundance_goals(&rest, &PbFormula::new(), &r.constraint, &r.omega)?;
                    let t = r
                        .proof
                        .check(|h| rest.contains(h) || *h == neg, goals.iter())
                        .map_err(|e| format!("witness for removing {}: {e}", r.constraint))?;
                    self.record(&t);
                }
            }
            DomStep::Transfer { constraints } => {
                if let Some(c) = constraints.iter().find(|c| !cfg.contains(c)) {
                    return Err(format!("{c} is not a derived constraint"));
                }
            }
            DomStep::Dominance { c, omega, proof, refute } => {
                if self.mode == Mode::WeakLinear && !cfg.derived.is_empty() {
                    return Err(format!(
                        "weak mode allows dominance only with no derived constraints, found {}",
                        cfg.derived.len()
                    ));
                }
                let neg = c.negate();
                let z = cfg.zlits();
                let zw = cfg.zlits_under(omega);
                let mut goals: Vec<PbConstraint> = cfg.core.iter().map(|d| d.substitute(omega)).collect();
                goals.extend(self.order_goal(&zw, &z)?.iter().cloned());
                let t1 = proof
                    .check(|h| cfg.contains(h) || *h == neg, goals.iter())
                    .map_err(|e| format!("first witness: {e}"))?;
                let back = self.order_goal(&z, &zw)?;
                let t2 = refute
                    .check(
                        |h| cfg.contains(h) || *h == neg || back.contains(h),
                        [&PbConstraint::contradiction()],
                    )
                    .map_err(|e| format!("second witness: {e}"))?;
                self.record(&t1);
                self.record(&t2);
            }
            DomStep::OrderChange { order, zvars } => {
                if !cfg.derived.is_empty() {
                    return Err(format!(
                        "the order can only change with no derived constraints, found {}",
                        cfg.derived.len()
                    ));
                }
                if self.mode != Mode::Full && !order.is_linear() {
                    return Err(format!("{} mode allows only linear orders", self.mode.name()));
                }
                if order.arity() != zvars.len() {
                    return Err(format!(
                        "order has arity {} but {} variables were given",
                        order.arity(),
                        zvars.len()
                    ));
                }
                let mut seen = std::collections::HashSet::new();
                if let Some(z) = zvars.iter().find(|z| !seen.insert(**z) || **z == 0) {
                    return Err(format!("x{z} repeats in the order variables"));
                }
                order.validate()?;
            }
        }
        self.apply_unchecked(step);
        Ok(())
    }

    /// Applies the effect of a step without checking it.
    pub fn apply_unchecked(&mut self, step: &DomStep) {
        let cfg = &mut self.config;
        match step {
            DomStep::Impl { c, .. } | DomStep::Redundance { c, .. } | DomStep::Dominance { c, .. } => {
                if !cfg.core.contains(c) {
                    cfg.derived.push(c.clone());
                }
            }
            DomStep::Deletion { derived, core } => {
                match derived {
                    Removal::All => cfg.derived.clear(),
                    Removal::These(cs) => {
                        for c in cs {
                            cfg.derived.remove(c);
                        }
                    }
                }
                if let Some(r) = core {
                    cfg.core.remove(&r.constraint);
                }
            }
            DomStep::Transfer { constraints } => {
                for c in constraints {
                    cfg.core.push(c.clone());
                }
            }
            DomStep::OrderChange { order, zvars } => {
                cfg.order = order.clone();
                cfg.zvars = zvars.clone();
            }
        }
    }

    pub fn finish(self) -> DomTrace {
        DomTrace {
            config: self.config,
            cp_steps: self.cp_steps,
            max_bits: self.max_bits,
        }
    }
}

/// Checks every step and that the final configuration contains 0 ≥ 1.
pub fn check_dom(p: &DomProof) -> Result<DomTrace, Rejection> {
    check_dom_mode(p, p.mode)
}

pub fn check_dom_mode(p: &DomProof, mode: Mode) -> Result<DomTrace, Rejection> {
    let mut ch = Checker::new(p.input.clone(), mode);
    for (i, step) in p.steps.iter().enumerate() {
        ch.apply(step).map_err(|e| Rejection::at(i, format!("{}: {e}", step.rule())))?;
    }
    if !ch.config().has_contradiction() {
        return Err(Rejection::global("the final configuration does not contain 0 >= 1"));
    }
    Ok(ch.finish())
}

impl fmt::Display for Mode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::{CpBuilder, CpStep};
    use crate::pb::clause_to_pb;
    use crate::syntax::Clause;

    fn cl(lits: &[i64]) -> PbConstraint {
        clause_to_pb(&Clause::from_dimacs(lits))
    }

    fn witness(hyps: Vec<PbConstraint>, build: impl FnOnce(&mut CpBuilder)) -> CpWitness {
        let mut b = CpBuilder::new(hyps);
        build(&mut b);
        b.into_witness()
    }

    // x ≥ 1 and 1 − x ≥ 1 refuted by a single addition.
    #[test]
    fn implicational_refutation() {
        let (a, na) = (cl(&[1]), cl(&[-1]));
        let proof = witness(vec![a.clone(), na.clone()], |b| {
            let (s, t) = (b.need(&a).unwrap(), b.need(&na).unwrap());
            b.add(s, 1, t, 1);
        });
        let p = DomProof {
            input: PbFormula::from_iter([a, na]),
            mode: Mode::Linear,
            steps: vec![DomStep::Impl {
                c: PbConstraint::contradiction(),
                proof,
            }],
        };
        check_dom(&p).unwrap();
    }

    // The three redundance steps that introduce y ↔ u ∧ v.
    #[test]
    fn extension_axiom_by_redundance() {
        let (u, v, y) = (1, 2, 3);
        let a = cl(&[-1, -2, 3]);
        let bc = cl(&[-3, 1]);
        let cc = cl(&[-3, 2]);
        let sigma = Substitution::from_pairs([(y, Lit::Pos(u))]);
        let a_sigma = a.substitute(&sigma);
        assert_eq!(a_sigma, PbConstraint::axiom_le(v));
        let s1 = witness(vec![], |b| {
            b.axle(v);
        });
        let s2 = witness(vec![], |b| {
            b.axle(v);
        });
        let omega = Substitution::from_pairs([(y, Lit::False)]);
        let goal = a.substitute(&omega);
        let neg_c = cc.negate();
        let s3 = witness(vec![neg_c.clone()], |b| {
            let s = b.need(&neg_c).unwrap();
            b.weaken(s, &goal).unwrap();
        });
        let mut ch = Checker::new(PbFormula::new(), Mode::Linear);
        ch.apply(&DomStep::Redundance { c: a, omega: sigma.clone(), proof: s1 }).unwrap();
        ch.apply(&DomStep::Redundance { c: bc, omega: sigma, proof: s2 }).unwrap();
        ch.apply(&DomStep::Redundance { c: cc, omega, proof: s3 }).unwrap();
        assert_eq!(ch.config().derived.len(), 3);
    }

    #[test]
    fn weak_mode_needs_empty_derived() {
        // core {x1}; derived {x2 ≥ 0 ... } nonempty; dominance deriving ¬x1? use trivial witness
        let x1 = cl(&[1]);
        let mut ch = Checker::new(PbFormula::from_iter([x1.clone()]), Mode::WeakLinear);
        let impl_step = DomStep::Impl {
            c: cl(&[1, 2]),
            proof: witness(vec![x1.clone()], |b| {
                let s = b.need(&x1).unwrap();
                b.weaken(s, &cl(&[1, 2])).unwrap();
            }),
        };
        ch.apply(&impl_step).unwrap();
        let dom = DomStep::Dominance {
            c: cl(&[1]),
            omega: Substitution::identity(),
            proof: CpWitness::default(),
            refute: CpWitness::default(),
        };
        let err = ch.apply(&dom).unwrap_err();
        assert!(err.contains("weak mode"), "{err}");
    }

    #[test]
    fn core_deletion_needs_witness() {
        let x1 = cl(&[1]);
        let mut ch = Checker::new(PbFormula::from_iter([x1.clone()]), Mode::Linear);
        let del = DomStep::Deletion {
            derived: Removal::All,
            core: Some(CoreRemoval {
                constraint: x1.clone(),
                omega: Substitution::identity(),
                proof: CpWitness::default(),
            }),
        };
        assert!(ch.apply(&del).is_err());
        // ω = {x1 ↦ 1} makes every goal trivial
        let ok = DomStep::Deletion {
            derived: Removal::All,
            core: Some(CoreRemoval {
                constraint: x1,
                omega: Substitution::from_pairs([(1, Lit::True)]),
                proof: CpWitness::default(),
            }),
        };
        ch.apply(&ok).unwrap();
        assert!(ch.config().core.is_empty());
    }

    #[test]
    fn order_change_requires_empty_derived() {
        let mut ch = Checker::new(PbFormula::from_iter([cl(&[1])]), Mode::Linear);
        ch.apply(&DomStep::OrderChange { order: OrderSpec::lex(1), zvars: vec![1] }).unwrap();
        let s = DomStep::Impl {
            c: cl(&[1, 2]),
            proof: witness(vec![cl(&[1])], |b| {
                let s = b.need(&cl(&[1])).unwrap();
                b.weaken(s, &cl(&[1, 2])).unwrap();
            }),
        };
        ch.apply(&s).unwrap();
        assert!(ch.apply(&DomStep::OrderChange { order: OrderSpec::top(), zvars: vec![] }).is_err());
    }

    #[test]
    fn linear_order_at_equal_tuples_is_trivial() {
        let b = vec![BigInt::from(1), BigInt::from(2)];
        let z = [Lit::Pos(1), Lit::Pos(2)];
        let f = linear_order_formula(&b, &z, &z).unwrap();
        assert!(f.iter().all(|c| c.is_trivial()));
        assert!(linear_order_formula(&b, &z[..1], &z).is_err());
    }

    #[test]
    fn wide_coefficients() {
        let o = OrderSpec::lex(64);
        let OrderSpec::Linear(b) = &o else { unreachable!() };
        assert_eq!(b[0], BigInt::from(1u128 << 63));
        let lhs: Vec<Lit> = (1..=64).map(Lit::Pos).collect();
        let rhs: Vec<Lit> = (65..=128).map(Lit::Pos).collect();
        let f = o.instantiate(&lhs, &rhs).unwrap();
        assert!(f.iter().next().unwrap().max_bits() >= 64);
    }

    // x ≤ y on one bit, with its reflexivity and transitivity proofs.
    #[test]
    fn general_order_validation() {
        let formula = PbFormula::from_iter([cl(&[-1, 2])]);
        let refl = CpWitness {
            hyps: PbFormula::new(),
            steps: vec![],
        };
        let uv = cl(&[-1, 2]);
        let vw = cl(&[-2, 3]);
        let trans = witness(vec![uv.clone(), vw.clone()], |b| {
            let (s, t) = (b.need(&uv).unwrap(), b.need(&vw).unwrap());
            b.add(s, 1, t, 1);
        });
        let order = OrderSpec::General(GeneralOrder {
            arity: 1,
            formula,
            refl,
            trans,
        });
        order.validate().unwrap();
        assert!(order.holds(&[false], &[true]) && !order.holds(&[true], &[false]));
        let mut ch = Checker::new(PbFormula::new(), Mode::Full);
        ch.apply(&DomStep::OrderChange { order: order.clone(), zvars: vec![7] }).unwrap();
        let mut lin = Checker::new(PbFormula::new(), Mode::Linear);
        assert!(lin.apply(&DomStep::OrderChange { order, zvars: vec![7] }).is_err());
        let _ = CpStep::AxGe(1);
    }
}
