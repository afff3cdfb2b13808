//! Lex-leader constraints, refutations that add them (the system Q_k),
//! a gadget that destroys all symmetries, and a circuit that maps a model to
//! a model satisfying a lex-leader constraint.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;

use crate::er::circuit::{CircuitDesc, NodeLit};
use crate::er::{check_er, ErDerivation};
use crate::oracle::VarOrder;
use crate::ordering::{LexGadget, OrderingError};
use crate::syntax::{is_symmetry, iterate_substitution, Clause, Cnf, Lit, Substitution, Var, VarAlloc};
use crate::Rejection;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("the substitution is not a symmetry of the formula")]
    NotSymmetry,
    #[error("the order is empty")]
    EmptyOrder,
    #[error("x{0} occurs in the formula but not in the order")]
    NotCovered(Var),
    #[error("the substitution maps into x{0}, which is outside the order")]
    OutsideOrder(Var),
    #[error("{0} variables is too many for the circuit")]
    TooWide(usize),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
}

fn check_setting(gamma: &Cnf, omega: &Substitution, order: &VarOrder) -> Result<(), SymmetryError> {
    if order.is_empty() {
        return Err(SymmetryError::EmptyOrder);
    }
    if let Some(v) = gamma.vars().into_iter().find(|&v| !order.contains(v)) {
        return Err(SymmetryError::NotCovered(v));
    }
    for &v in order.vars() {
        if let Some(u) = omega.get(v).var() {
            if !order.contains(u) {
                return Err(SymmetryError::OutsideOrder(u));
            }
        }
    }
    if !is_symmetry(omega, gamma) {
        return Err(SymmetryError::NotSymmetry);
    }
    Ok(())
}

/// [z̄ ≤lex z̄↾ω] over the order, most significant first, with auxiliaries
/// taken from `alloc`.
pub fn lex_leader(order: &VarOrder, omega: &Substitution, alloc: &mut VarAlloc) -> Result<LexGadget, OrderingError> {
    let z: Vec<Lit> = order.vars().iter().map(|&v| Lit::Pos(v)).collect();
    let image: Vec<Lit> = z.iter().map(|&l| omega.apply(l)).collect();
    LexGadget::new(&z, &image, false, true, alloc)
}

/// The lex-leader clauses for ω with auxiliaries above every variable of Γ,
/// ω and the order.
pub fn gen_lex_leader(gamma: &Cnf, omega: &Substitution, order: &VarOrder) -> Result<Cnf, SymmetryError> {
    check_setting(gamma, omega, order)?;
    let top = [gamma.max_var(), omega.max_var(), order.vars().iter().copied().max().unwrap_or(0)];
    let mut alloc = VarAlloc::above(top.into_iter().max().unwrap());
    Ok(lex_leader(order, omega, &mut alloc)?.cnf())
}

/// A refutation of Γ that may first add one lex-leader constraint per
/// listed symmetry, all over the same order.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QRefutation {
    pub gamma: Cnf,
    pub order: VarOrder,
    pub symmetries: Vec<Substitution>,
    pub leaders: Vec<LexGadget>,
    pub pi: ErDerivation,
}

impl QRefutation {
    /// Γ together with every lex-leader constraint.
    pub fn augmented(&self) -> Cnf {
        let mut out = self.gamma.clone();
        for g in &self.leaders {
            out.extend(g.cnf().iter().cloned());
        }
        out
    }

    /// Builds the leaders for `symmetries` with auxiliaries above Γ and the
    /// order; `pi` is filled in by the caller.
    pub fn leaders_for(gamma: &Cnf, order: &VarOrder, symmetries: &[Substitution]) -> Result<Vec<LexGadget>, SymmetryError> {
        let top = order.vars().iter().copied().max().unwrap_or(0).max(gamma.max_var());
        let mut alloc = VarAlloc::above(top);
        symmetries
            .iter()
            .map(|w| {
                check_setting(gamma, w, order)?;
                Ok(lex_leader(order, w, &mut alloc)?)
            })
            .collect()
    }
}

/// Accepts when every ω_i is a symmetry, each leader is the expected gadget
/// on fresh auxiliaries, there are at most `k_limit` of them, and π refutes
/// a subset of the augmented formula.
pub fn check_q(p: &QRefutation, k_limit: Option<usize>) -> Result<(), Rejection> {
    let k = p.symmetries.len();
    if let Some(limit) = k_limit {
        if k > limit {
            return Err(Rejection::global(format!("{k} symmetries exceed the limit of {limit}")));
        }
    }
    if p.leaders.len() != k {
        return Err(Rejection::global(format!("{k} symmetries but {} lex-leader blocks", p.leaders.len())));
    }
    let mut used: BTreeSet<Var> = p.gamma.vars();
    used.extend(p.order.vars().iter().copied());
    for (i, (omega, g)) in p.symmetries.iter().zip(&p.leaders).enumerate() {
        check_setting(&p.gamma, omega, &p.order).map_err(|e| Rejection::global(format!("symmetry {i}: {e}")))?;
        let mut alloc = VarAlloc::starting_at(g.first_aux);
        let expected = lex_leader(&p.order, omega, &mut alloc).map_err(|e| Rejection::global(format!("leader {i}: {e}")))?;
        if expected != *g {
            return Err(Rejection::global(format!("leader {i} is not the lex-leader gadget for its symmetry")));
        }
        for v in g.aux_vars() {
            if !used.insert(v) {
                return Err(Rejection::global(format!("leader {i}: auxiliary x{v} is not fresh")));
            }
        }
    }
    let full = p.augmented();
    if let Some(c) = p.pi.premises.iter().find(|c| !full.contains(c)) {
        return Err(Rejection::global(format!("premise {c} is neither in the formula nor in a leader")));
    }
    check_er(&p.pi).map_err(|e| e.context("refutation"))?;
    if !p.pi.conclusions.contains(&Clause::empty()) {
        return Err(Rejection::global("the refutation does not conclude the empty clause"));
    }
    Ok(())
}

/// Γ plus x_i ∨ y_1 ∨ … ∨ y_i for the variables x_1 < … < x_m of Γ and fresh
/// y_1 … y_m. Returns the new formula and the y variables.
pub fn asymmetrize(gamma: &Cnf) -> (Cnf, Vec<Var>) {
    let xs: Vec<Var> = gamma.vars().into_iter().collect();
    let mut alloc = VarAlloc::above(gamma.max_var());
    let ys: Vec<Var> = xs.iter().map(|_| alloc.fresh()).collect();
    let mut out = gamma.clone();
    for (i, &x) in xs.iter().enumerate() {
        let lits = std::iter::once(Lit::Pos(x)).chain(ys[..=i].iter().map(|&y| Lit::Pos(y)));
        out.push(Clause::new(lits));
    }
    (out, ys)
}

struct Builder<'a> {
    c: CircuitDesc,
    index: HashMap<Var, usize>,
    gamma: &'a Cnf,
    t: NodeLit,
}

impl Builder<'_> {
    fn lit(&self, a: &[NodeLit], l: Lit) -> NodeLit {
        match l {
            Lit::True => self.t,
            Lit::False => !self.t,
            Lit::Pos(v) => a[self.index[&v]],
            Lit::Neg(v) => !a[self.index[&v]],
        }
    }

    fn konst(&self, b: bool) -> NodeLit {
        if b {
            self.t
        } else {
            !self.t
        }
    }

    fn number(&self, n: u128, width: usize) -> Vec<NodeLit> {
        (0..width).map(|i| self.konst(n >> i & 1 == 1)).collect()
    }

    /// α↾σ for α given positionally over the order.
    fn restrict(&self, a: &[NodeLit], sigma: &Substitution, order: &VarOrder) -> Vec<NodeLit> {
        order.vars().iter().map(|&v| self.lit(a, sigma.get(v))).collect()
    }

    /// α↾ω^m with m given by its bits, least significant first.
    fn power(&mut self, a: &[NodeLit], m: &[NodeLit], powers: &[Substitution], order: &VarOrder) -> Vec<NodeLit> {
        let mut cur = a.to_vec();
        for (bit, sigma) in m.iter().zip(powers) {
            let moved = self.restrict(&cur, sigma, order);
            cur = cur.iter().zip(&moved).map(|(&keep, &mv)| self.c.mux(*bit, mv, keep)).collect();
        }
        cur
    }

    fn satisfies(&mut self, a: &[NodeLit]) -> NodeLit {
        let mut clauses = Vec::new();
        for cl in self.gamma.iter() {
            if cl.contains(Lit::True) {
                continue;
            }
            let lits: Vec<NodeLit> = cl.iter().filter(|&l| l != Lit::False).map(|l| self.lit(a, l)).collect();
            clauses.push(self.c.or_all(&lits));
        }
        self.c.and_all(&clauses)
    }

    /// a + b over equal widths, one bit wider.
    fn add(&mut self, a: &[NodeLit], b: &[NodeLit]) -> Vec<NodeLit> {
        let mut carry = !self.t;
        let mut out = Vec::with_capacity(a.len() + 1);
        for (&x, &y) in a.iter().zip(b) {
            let h = self.c.xor(x, y);
            out.push(self.c.xor(h, carry));
            let both = self.c.and(x, y);
            let prop = self.c.and(h, carry);
            carry = self.c.or(both, prop);
        }
        out.push(carry);
        out
    }

    /// s ≤ k for a constant k.
    fn le_const(&mut self, s: &[NodeLit], k: u128) -> NodeLit {
        let mut gt = !self.t;
        let mut eq = self.t;
        for i in (0..s.len()).rev() {
            if k >> i & 1 == 1 {
                eq = self.c.and(eq, s[i]);
            } else {
                let over = self.c.and(eq, s[i]);
                gt = self.c.or(gt, over);
                eq = self.c.and(eq, !s[i]);
            }
        }
        !gt
    }
}

/// A circuit from α (inputs in order) to some α_i = α↾ω^i. A binary search
/// over i ∈ [0, 2^n + 1] keeps cond(lo) true and cond(hi) false, where
/// cond(i) says α_i ⊨ Γ and val(α_i) ≤ 2^n − i; the final α_lo is a model
/// with α_lo ≤lex α_lo↾ω whenever α ⊨ Γ.
pub fn q1_circuit(gamma: &Cnf, omega: &Substitution, order: &VarOrder) -> Result<CircuitDesc, SymmetryError> {
    check_setting(gamma, omega, order)?;
    let n = order.len();
    if n > 120 {
        return Err(SymmetryError::TooWide(n));
    }
    let width = n + 2;
    let powers: Vec<Substitution> =
        (0..width).map(|k| iterate_substitution(omega, &(BigUint::from(1u8) << k))).collect();
    let mut c = CircuitDesc::new(n);
    let t = c.constant(true);
    let mut b = Builder {
        c,
        index: order.vars().iter().enumerate().map(|(i, &v)| (v, i)).collect(),
        gamma,
        t,
    };
    let alpha: Vec<NodeLit> = (0..n).map(NodeLit::pos).collect();
    let top = 1u128 << n;
    let mut lo = b.number(0, width);
    let mut hi = b.number(top + 1, width);
    for _ in 0..=n {
        let sum = b.add(&lo, &hi);
        let mid: Vec<NodeLit> = sum[1..].to_vec();
        let a = b.power(&alpha, &mid, &powers, order);
        let sat = b.satisfies(&a);
        // val(α_mid) + mid ≤ 2^n
        let val: Vec<NodeLit> = (0..width).map(|i| if i < n { a[n - 1 - i] } else { !b.t }).collect();
        let total = b.add(&val, &mid);
        let small = b.le_const(&total, top);
        let cond = b.c.and(sat, small);
        lo = lo.iter().zip(&mid).map(|(&l, &m)| b.c.mux(cond, m, l)).collect();
        hi = hi.iter().zip(&mid).map(|(&h, &m)| b.c.mux(cond, h, m)).collect();
    }
    let out = b.power(&alpha, &lo, &powers, order);
    let mut c = b.c;
    c.outputs = out;
    Ok(c)
}

/// Runs the circuit on α, read positionally over the order.
pub fn eval_q1(c: &CircuitDesc, order: &VarOrder, alpha: &crate::Assignment) -> crate::Assignment {
    let inputs: Vec<bool> = order.vars().iter().map(|&v| alpha.value(v)).collect();
    let vals = c.eval(&inputs);
    crate::Assignment::from_pairs(
        order
            .vars()
            .iter()
            .zip(&c.outputs)
            .map(|(&v, &o)| (v, CircuitDesc::eval_lit(&vals, o))),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::er::search::refute;
    use crate::er::ErBuilder;
    use crate::oracle::{equisatisfiable, is_sat, lex_le, local_min_descent, sat_by_extension};
    use crate::Assignment;

    fn cnf(cs: &[&[i64]]) -> Cnf {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    fn xor2() -> Cnf {
        cnf(&[&[1, 2], &[-1, -2]])
    }

    #[test]
    fn identity_leader_is_trivial() {
        let g = xor2();
        let order = VarOrder::natural([1, 2]);
        let leader = gen_lex_leader(&g, &Substitution::identity(), &order).unwrap();
        for bits in 0..4u32 {
            let a = Assignment::from_pairs([(1, bits & 1 == 1), (2, bits & 2 == 2)]);
            assert!(sat_by_extension(&leader, &a).unwrap());
        }
    }

    #[test]
    fn swap_leader_keeps_satisfiability() {
        let g = xor2();
        let order = VarOrder::natural([1, 2]);
        let leader = gen_lex_leader(&g, &Substitution::swap(1, 2), &order).unwrap();
        let both = g.union(&leader);
        assert!(is_sat(&both).unwrap());
        assert!(equisatisfiable(&g, &both).unwrap());
        // 10 is cut off, 01 survives
        assert!(!sat_by_extension(&both, &Assignment::from_pairs([(1, true), (2, false)])).unwrap());
        assert!(sat_by_extension(&both, &Assignment::from_pairs([(1, false), (2, true)])).unwrap());
    }

    #[test]
    fn non_symmetry_is_refused() {
        let g = cnf(&[&[1, 2], &[-1]]);
        let order = VarOrder::natural([1, 2]);
        assert_eq!(
            gen_lex_leader(&g, &Substitution::swap(1, 2), &order),
            Err(SymmetryError::NotSymmetry)
        );
    }

    fn all_four_q() -> QRefutation {
        let gamma = cnf(&[&[1, 2], &[1, -2], &[-1, 2], &[-1, -2]]);
        let order = VarOrder::natural([1, 2]);
        let syms = vec![Substitution::swap(1, 2)];
        let leaders = QRefutation::leaders_for(&gamma, &order, &syms).unwrap();
        let mut b = ErBuilder::new(gamma.clone(), BTreeSet::new());
        let all: Vec<usize> = (0..gamma.len()).map(|i| b.premise(i)).collect();
        refute(&mut b, &all, 1000).unwrap();
        let pi = b.finish([Clause::empty()].into_iter().collect());
        QRefutation {
            gamma,
            order,
            symmetries: syms,
            leaders,
            pi,
        }
    }

    #[test]
    fn q_refutation_checks() {
        let p = all_four_q();
        check_q(&p, Some(1)).unwrap();
        assert!(check_q(&p, Some(0)).is_err());
    }

    #[test]
    fn q_rejects_non_symmetry() {
        let mut p = all_four_q();
        p.symmetries[0] = Substitution::from_pairs([(1, Lit::Neg(2)), (2, Lit::Pos(2))]);
        assert!(check_q(&p, None).is_err());
    }

    #[test]
    fn q_rejects_shared_auxiliaries() {
        let mut p = all_four_q();
        p.symmetries.push(Substitution::swap(1, 2));
        p.leaders.push(p.leaders[0].clone());
        let err = check_q(&p, None).unwrap_err();
        assert!(err.reason.contains("not fresh"), "{err}");
    }

    #[test]
    fn asymmetrize_one_variable() {
        let (out, ys) = asymmetrize(&cnf(&[&[1]]));
        assert_eq!(ys, vec![2]);
        assert_eq!(out, cnf(&[&[1], &[1, 2]]));
    }

    #[test]
    fn asymmetrize_restricted_to_ones() {
        let g = xor2();
        let (out, ys) = asymmetrize(&g);
        let ones = Substitution::from_pairs(ys.iter().map(|&y| (y, Lit::True)));
        for c in out.substitute(&ones).iter() {
            assert!(c.is_tautologous() || g.contains(c));
        }
    }

    #[test]
    fn circuit_on_swap() {
        let g = xor2();
        let order = VarOrder::natural([1, 2]);
        let c = q1_circuit(&g, &Substitution::swap(1, 2), &order).unwrap();
        let out = eval_q1(&c, &order, &Assignment::from_pairs([(1, true), (2, false)]));
        assert_eq!(out, Assignment::from_pairs([(1, false), (2, true)]));
        let out = eval_q1(&c, &order, &Assignment::from_pairs([(1, false), (2, true)]));
        assert_eq!(out, Assignment::from_pairs([(1, false), (2, true)]));
    }

    #[test]
    fn circuit_output_is_descent_fixpoint() {
        // a 3-cycle on x1 x2 x3 with Γ = at least one true
        let g = cnf(&[&[1, 2, 3]]);
        let omega = Substitution::from_pairs([(1, Lit::Pos(2)), (2, Lit::Pos(3)), (3, Lit::Pos(1))]);
        let order = VarOrder::natural([1, 2, 3]);
        let c = q1_circuit(&g, &omega, &order).unwrap();
        for bits in 1..8u32 {
            let a = Assignment::from_pairs((0..3).map(|i| (i + 1, bits >> i & 1 == 1)));
            let out = eval_q1(&c, &order, &a);
            assert!(out.satisfies(&g));
            assert!(lex_le(&out, &out.compose_subst(&omega), &order));
            assert_eq!(local_min_descent(&g, &omega, &out, &order).unwrap(), out);
        }
    }
}
