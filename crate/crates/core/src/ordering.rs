//! Lexicographic order gadgets built from a borrow adder.
//!
//! Internally bit 1 is the least significant and the adder computes
//! x_i + z_i + c_i = y_i + 2c_{i+1} for i = 1..r+1 with x_{r+1} = 0,
//! y_{r+1} = 1 and no carry into bit 1 or out of bit r+1, so that
//! Σ 2^{i−1} z_i = Y − X + 2^r. Tuples handed to the public constructors
//! are most significant first unless `msb_first` is false.

use std::collections::BTreeSet;

use num_bigint::BigInt;

use crate::cp::{derive_bit_equation, AdderBit, BitShape, CpBuildError, CpBuilder, CpDerivation};
use crate::er::{refutation_into, ErBuilder, ErDerivation, ExtAxiom, ExtensionBlock, TransformError};
use crate::pb::{clause_to_pb, LinearSum, PbConstraint, PbFormula};
use crate::syntax::{Clause, Cnf, Lit, Var, VarAlloc};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OrderingError {
    #[error("the order gadget needs at least one bit")]
    ZeroArity,
    #[error("tuples of length {0} and {1}")]
    ArityMismatch(usize, usize),
    #[error("expected a {0} gadget")]
    WrongKind(&'static str),
    #[error("the derivation does not have the gadget clause {0} as a premise")]
    MissingGadget(Clause),
    #[error(transparent)]
    Transform(#[from] TransformError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LexGadget {
    pub arity: usize,
    /// The compared tuples as given.
    pub x: Vec<Lit>,
    pub y: Vec<Lit>,
    pub strict: bool,
    pub msb_first: bool,
    /// The adder, least significant bit first; r+1 bits.
    pub bits: Vec<AdderBit>,
    /// For the non-strict gadget: n_2..n_r of the OR chain, then w.
    pub chain: Vec<ExtAxiom>,
    pub first_aux: Var,
}

fn lsb_first(t: &[Lit], msb_first: bool) -> Vec<Lit> {
    if msb_first {
        t.iter().rev().copied().collect()
    } else {
        t.to_vec()
    }
}

impl LexGadget {
    /// [x̄ <lex ȳ] when `strict`, else [x̄ ≤lex ȳ], with auxiliary variables
    /// taken from `alloc` in order.
    pub fn new(x: &[Lit], y: &[Lit], strict: bool, msb_first: bool, alloc: &mut VarAlloc) -> Result<LexGadget, OrderingError> {
        if x.len() != y.len() {
            return Err(OrderingError::ArityMismatch(x.len(), y.len()));
        }
        let r = x.len();
        if r == 0 {
            return Err(OrderingError::ZeroArity);
        }
        let first_aux = alloc.peek();
        // P_≤(x̄, ȳ) is the negation of P_<(ȳ, x̄)
        let (a, b) = if strict { (x, y) } else { (y, x) };
        let (a, b) = (lsb_first(a, msb_first), lsb_first(b, msb_first));
        let mut bits = Vec::with_capacity(r + 1);
        let mut carry = Lit::False;
        for i in 0..=r {
            let shape = match i {
                0 => BitShape::First,
                _ if i == r => BitShape::Last,
                _ => BitShape::Interior,
            };
            let (ai, bi) = if i < r { (a[i], b[i]) } else { (Lit::False, Lit::True) };
            let bit = AdderBit::build(shape, ai, carry, bi, alloc);
            carry = bit.carry.map(Lit::Pos).unwrap_or(Lit::False);
            bits.push(bit);
        }
        let mut chain = Vec::new();
        if !strict {
            let z = |i: usize| Lit::Pos(bits[i].sum);
            let mut o = z(0);
            for j in 1..r {
                let n = alloc.fresh();
                chain.push(ExtAxiom::And { y: n, u: !o, v: !z(j) });
                o = Lit::Neg(n);
            }
            chain.push(ExtAxiom::And {
                y: alloc.fresh(),
                u: z(r),
                v: o,
            });
        }
        Ok(LexGadget {
            arity: r,
            x: x.to_vec(),
            y: y.to_vec(),
            strict,
            msb_first,
            bits,
            chain,
            first_aux,
        })
    }

    /// Sum bits z_1..z_{r+1}.
    pub fn z(&self) -> Vec<Var> {
        self.bits.iter().map(|b| b.sum).collect()
    }

    /// Carries c_2..c_{r+1}.
    pub fn carries(&self) -> Vec<Var> {
        self.bits.iter().filter_map(|b| b.carry).collect()
    }

    /// The strictness flag w of a non-strict gadget.
    pub fn w(&self) -> Option<Var> {
        self.chain.last().map(|a| a.defined())
    }

    pub fn delta_axioms(&self) -> Vec<ExtAxiom> {
        self.bits.iter().flat_map(|b| b.axioms.iter().copied()).collect()
    }

    pub fn axioms(&self) -> Vec<ExtAxiom> {
        let mut v = self.delta_axioms();
        v.extend(self.chain.iter().copied());
        v
    }

    pub fn aux_vars(&self) -> Vec<Var> {
        self.axioms().iter().map(|a| a.defined()).collect()
    }

    pub fn input_vars(&self) -> BTreeSet<Var> {
        self.x.iter().chain(&self.y).filter_map(|l| l.var()).collect()
    }

    /// Δ with the gadget inputs as base.
    pub fn block(&self) -> ExtensionBlock {
        ExtensionBlock {
            base: self.input_vars(),
            axioms: self.axioms(),
        }
    }

    /// z_1 ∨ … ∨ z_r
    pub fn or_clause(&self) -> Clause {
        Clause::new(self.bits[..self.arity].iter().map(|b| Lit::Pos(b.sum)))
    }

    pub fn top_unit(&self) -> Clause {
        Clause::unit(Lit::Pos(self.bits[self.arity].sum))
    }

    /// The clauses beyond the extension axioms: z_{r+1} and the OR clause
    /// when strict, ¬w otherwise.
    pub fn side_clauses(&self) -> Vec<Clause> {
        match self.w() {
            None => vec![self.top_unit(), self.or_clause()],
            Some(w) => vec![Clause::unit(Lit::Neg(w))],
        }
    }

    pub fn cnf(&self) -> Cnf {
        let mut out: Cnf = self.axioms().iter().flat_map(|a| a.clauses()).collect();
        out.extend(self.side_clauses());
        out
    }

    /// L_<: Σ 2^{i−1} b_i ≥ Σ 2^{i−1} a_i + 1 over the adder inputs, that is
    /// x̄ < ȳ for a strict gadget.
    pub fn l_strict(&self) -> PbConstraint {
        let mut s = LinearSum::new();
        for (i, bit) in self.bits[..self.arity].iter().enumerate() {
            let c = BigInt::from(1) << i;
            // d = ¬b_i
            s.add_lit(c.clone(), !bit.inputs[2]);
            s.add_lit(-c, bit.inputs[0]);
        }
        s.ge(1)
    }
}

/// The gadget on x̄ = x1..xr and ȳ = x(r+1)..x(2r) with auxiliaries from
/// x(2r+1) on.
pub fn gen_lex(r: usize, strict: bool, msb_first: bool) -> Result<LexGadget, OrderingError> {
    if r == 0 {
        return Err(OrderingError::ZeroArity);
    }
    let x: Vec<Lit> = (1..=r as Var).map(Lit::Pos).collect();
    let y: Vec<Lit> = (r as Var + 1..=2 * r as Var).map(Lit::Pos).collect();
    let mut alloc = VarAlloc::starting_at(2 * r as Var + 1);
    LexGadget::new(&x, &y, strict, msb_first, &mut alloc)
}

/// L_< on x̄ = x1..xr, ȳ = x(r+1)..x(2r) with x_i weighted 2^{i−1}.
#[allow(non_snake_case)]
pub fn gen_L_strict(r: usize) -> Result<PbConstraint, OrderingError> {
    Ok(gen_lex(r, true, false)?.l_strict())
}

/// Derives L_< from the clauses of a strict gadget, which must be
/// available to the builder. Returns the step.
pub fn derive_l_strict(b: &mut CpBuilder, g: &LexGadget) -> Result<usize, CpBuildError> {
    assert!(g.strict, "derive_l_strict needs a strict gadget");
    let r = g.arity;
    let mut acc = None;
    for (i, bit) in g.bits.iter().enumerate() {
        let (_, le) = derive_bit_equation(b, bit)?;
        acc = Some(match acc {
            None => le,
            Some(a) => b.add(a, 1, le, BigInt::from(1) << i),
        });
    }
    let mut acc = acc.expect("at least two bits");
    let top = b.need(&clause_to_pb(&g.top_unit()))?;
    acc = b.add(acc, 1, top, BigInt::from(1) << r);
    let or = b.need(&clause_to_pb(&g.or_clause()))?;
    acc = b.add(acc, 1, or, 1);
    for (i, bit) in g.bits[..r].iter().enumerate().skip(1) {
        let ax = b.axge(bit.sum);
        acc = b.add(acc, 1, ax, (BigInt::from(1) << i) - 1);
    }
    b.weaken(acc, &g.l_strict())
}

/// P_<(x̄, ȳ)* ⊢ L_<(x̄, ȳ) on the variables of `gen_lex(r, true, false)`.
#[allow(non_snake_case)]
pub fn derive_L_from_P(r: usize) -> Result<CpDerivation, OrderingError> {
    let g = gen_lex(r, true, false)?;
    let hyps: PbFormula = g.cnf().iter().map(clause_to_pb).collect();
    let mut b = CpBuilder::new(hyps.iter().cloned().collect());
    derive_l_strict(&mut b, &g).expect("the gadget clauses are hypotheses");
    Ok(CpDerivation {
        hyps,
        steps: b.into_steps(),
        goals: PbFormula::from_iter([g.l_strict()]),
    })
}

/// From a refutation of Γ ∧ [x̄ ≤lex ȳ], where the non-strict gadget's
/// clauses are premises, builds an ER derivation of [ȳ <lex x̄] from Γ.
/// The conclusions are the clauses of the strict gadget on (ȳ, x̄) with
/// the same auxiliary variables for the adder.
pub fn strictify(pi: &ErDerivation, gadget: &LexGadget) -> Result<ErDerivation, OrderingError> {
    let Some(w) = gadget.w() else {
        return Err(OrderingError::WrongKind("non-strict"));
    };
    let gcnf = gadget.cnf();
    if let Some(c) = gcnf.iter().find(|c| !pi.premises.contains(c)) {
        return Err(OrderingError::MissingGadget(c.clone()));
    }
    let premises: Cnf = pi.premises.iter().filter(|c| !gcnf.contains(c)).cloned().collect();
    let mut protected = pi.protected.clone();
    protected.extend(gadget.input_vars());
    let mut b = ErBuilder::new(premises, protected);
    for ax in gadget.axioms() {
        b.extend(ax);
    }
    let mut alloc = VarAlloc::above(pi.max_var());
    let image = refutation_into(&mut b, pi, w, &mut alloc)?;
    let unit_w = image.empty;
    let z = gadget.z();
    let r = gadget.arity;
    let lookup = |b: &ErBuilder, c: Clause| b.lookup(&c).expect("gadget clause was introduced");
    let w_top = lookup(&b, Clause::new([Lit::Neg(w), Lit::Pos(z[r])]));
    b.resolve_on(unit_w, w_top, w);
    let ExtAxiom::And { v: o_r, .. } = gadget.chain[r - 1] else {
        unreachable!("w is a conjunction")
    };
    let w_or = lookup(&b, Clause::new([Lit::Neg(w), o_r]));
    let mut k = b.resolve_on(unit_w, w_or, w);
    // unfold o_j = ¬n_j into o_{j−1} ∨ z_j
    for ax in gadget.chain[..r - 1].iter().rev() {
        let ExtAxiom::And { y: n, u, v } = *ax else { unreachable!() };
        let a = lookup(&b, Clause::new([!u, !v, Lit::Pos(n)]));
        k = b.resolve_on(a, k, n);
    }
    debug_assert_eq!(b.clause(k), &gadget.or_clause());
    let mut conclusions: Cnf = gadget.delta_axioms().iter().flat_map(|a| a.clauses()).collect();
    conclusions.push(gadget.top_unit());
    conclusions.push(gadget.or_clause());
    Ok(b.finish(conclusions))
}
