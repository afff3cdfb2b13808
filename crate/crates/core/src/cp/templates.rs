//! One bit of the borrow adder used by the ordering gadgets, and fixed CP
//! derivations of its bit equation `a + b + d = p + 2·carry` from the gate
//! clauses, where a = x_i, b = c_i, d = ¬y_i and p = ¬z_i.

use super::{CpBuildError, CpBuilder, CpDerivation};
use crate::er::ExtAxiom;
use crate::pb::{clause_to_pb, LinearSum, PbConstraint, PbFormula};
use crate::syntax::{Clause, Lit, Var, VarAlloc};

#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum BitShape {
    /// No carry in.
    First,
    Interior,
    /// x = 0, y = 1 and no carry out; only the carry in remains.
    Last,
}

impl BitShape {
    /// Number of gates, and so of fresh variables, in a bit of this shape.
    pub fn gates(self) -> usize {
        match self {
            BitShape::First => 4,
            BitShape::Interior => 9,
            BitShape::Last => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdderBit {
    pub shape: BitShape,
    /// x_i, c_i and ¬y_i; positions a shape does not use hold the constant 0.
    pub inputs: [Lit; 3],
    pub axioms: Vec<ExtAxiom>,
    pub sum: Var,
    pub carry: Option<Var>,
}

fn and(y: Var, u: Lit, v: Lit) -> ExtAxiom {
    ExtAxiom::And { y, u, v }
}

impl AdderBit {
    /// Defines the bit on fresh variables taken from `alloc` in gate order.
    pub fn build(shape: BitShape, x: Lit, carry_in: Lit, y: Lit, alloc: &mut VarAlloc) -> AdderBit {
        let (a, b, d) = match shape {
            BitShape::First => (x, Lit::False, !y),
            BitShape::Interior => (x, carry_in, !y),
            BitShape::Last => (Lit::False, carry_in, Lit::False),
        };
        let v: Vec<Var> = (0..shape.gates()).map(|_| alloc.fresh()).collect();
        let p = |i: usize| Lit::Pos(v[i]);
        let n = |i: usize| Lit::Neg(v[i]);
        let (axioms, sum, carry) = match shape {
            BitShape::First => (
                vec![
                    and(v[0], a, d),
                    and(v[1], !a, !d),
                    and(v[2], n(1), n(0)),
                    ExtAxiom::Alias { y: v[3], u: n(2) },
                ],
                v[3],
                Some(v[0]),
            ),
            BitShape::Interior => (
                vec![
                    and(v[0], a, b),
                    and(v[1], !a, !b),
                    and(v[2], n(1), d),
                    and(v[3], p(1), !d),
                    and(v[4], n(0), n(2)),
                    and(v[5], p(0), p(2)),
                    ExtAxiom::Alias { y: v[6], u: n(4) },
                    and(v[7], n(3), p(4)),
                    and(v[8], n(7), n(5)),
                ],
                v[8],
                Some(v[6]),
            ),
            BitShape::Last => (vec![ExtAxiom::Alias { y: v[0], u: !b }], v[0], None),
        };
        AdderBit {
            shape,
            inputs: [a, b, d],
            axioms,
            sum,
            carry,
        }
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.axioms.iter().flat_map(|a| a.clauses()).collect()
    }

    /// a + b + d − ¬z − 2·carry.
    pub fn equation_sum(&self) -> LinearSum {
        let mut s = LinearSum::new();
        for l in self.inputs {
            s.add_lit(1, l);
        }
        s.add_lit(-1, Lit::Neg(self.sum));
        if let Some(c) = self.carry {
            s.add_lit(-2, Lit::Pos(c));
        }
        s
    }

    /// The bit equation as the pair (≥ 0, ≤ 0).
    pub fn equation(&self) -> (PbConstraint, PbConstraint) {
        let s = self.equation_sum();
        (s.ge(0), s.le(0))
    }
}

fn lin(terms: &[(i64, Lit)]) -> PbConstraint {
    let mut s = LinearSum::new();
    for &(c, l) in terms {
        s.add_lit(c, l);
    }
    s.ge(0)
}

struct Gates<'a> {
    axioms: &'a [ExtAxiom],
}

impl Gates<'_> {
    fn clause(&self, b: &mut CpBuilder, gate: usize, k: usize) -> Result<usize, CpBuildError> {
        b.need(&clause_to_pb(&self.axioms[gate].clauses()[k]))
    }

    fn var(&self, gate: usize) -> Var {
        self.axioms[gate].defined()
    }

    /// For m = P ∧ Q and nn = ¬P ∧ ¬Q, with o = ¬nn, derives
    /// P + Q − o − m ≥ 0 and o + m − P − Q ≥ 0.
    fn comparator(
        &self,
        b: &mut CpBuilder,
        m: usize,
        nn: usize,
        p: Lit,
        q: Lit,
    ) -> Result<(usize, usize), CpBuildError> {
        let (mv, nv) = (self.var(m), self.var(nn));
        let o = Lit::Neg(nv);
        let nn_a = self.clause(b, nn, 0)?;
        let m_b = self.clause(b, m, 1)?;
        let m_c = self.clause(b, m, 2)?;
        let ge_nn = b.axge(nv);
        let le = b.derive(
            &[(nn_a, 1), (m_b, 1), (m_c, 1), (ge_nn, 1)],
            2,
            &lin(&[(1, p), (1, q), (-1, o), (-1, Lit::Pos(mv))]),
        )?;
        let m_a = self.clause(b, m, 0)?;
        let nn_b = self.clause(b, nn, 1)?;
        let nn_c = self.clause(b, nn, 2)?;
        let ge_m = b.axge(mv);
        let ge = b.derive(
            &[(m_a, 1), (nn_b, 1), (nn_c, 1), (ge_m, 1)],
            2,
            &lin(&[(-1, p), (-1, q), (1, o), (1, Lit::Pos(mv))]),
        )?;
        Ok((le, ge))
    }
}

/// Derives both halves of the bit equation from the bit's clauses, which
/// must be available to the builder. Returns the steps for (≥ 0, ≤ 0).
pub fn derive_bit_equation(b: &mut CpBuilder, bit: &AdderBit) -> Result<(usize, usize), CpBuildError> {
    let g = Gates { axioms: &bit.axioms };
    let (goal_ge, goal_le) = bit.equation();
    let [a, bb, d] = bit.inputs;
    let pos = |i: usize| Lit::Pos(g.var(i));
    let neg = |i: usize| Lit::Neg(g.var(i));
    match bit.shape {
        BitShape::Last => {
            let up = g.clause(b, 0, 0)?;
            let down = g.clause(b, 0, 1)?;
            Ok((b.weaken(up, &goal_ge)?, b.weaken(down, &goal_le)?))
        }
        BitShape::First => {
            // gates: c2, n, t, z
            let (c_le, c_ge) = g.comparator(b, 0, 1, a, d)?;
            let parts = [
                (g.clause(b, 2, 1)?, 1),
                (g.clause(b, 2, 2)?, 1),
                (g.clause(b, 0, 1)?, 1),
                (g.clause(b, 1, 1)?, 1),
            ];
            let t_le = b.derive(&parts, 2, &lin(&[(1, neg(1)), (-1, pos(0)), (-1, pos(2))]))?;
            let t_ge = g.clause(b, 2, 0)?;
            let z_a = g.clause(b, 3, 0)?;
            let z_b = g.clause(b, 3, 1)?;
            let ge = b.derive(&[(c_le, 1), (t_le, 1), (z_a, 1)], 1, &goal_ge)?;
            let le = b.derive(&[(c_ge, 1), (t_ge, 1), (z_b, 1)], 1, &goal_le)?;
            Ok((ge, le))
        }
        BitShape::Interior => {
            // gates: m1, n1, m2, n2, n3, u3, co, q, z
            let (c1_le, c1_ge) = g.comparator(b, 0, 1, a, bb)?;
            let (c2_le, c2_ge) = g.comparator(b, 2, 3, neg(1), d)?;
            let (c3_le, c3_ge) = g.comparator(b, 5, 4, pos(0), pos(2))?;
            // u2 ≤ u1, that is n2 ≤ n3
            let parts = [
                (g.clause(b, 4, 0)?, 1),
                (g.clause(b, 0, 1)?, 1),
                (g.clause(b, 1, 1)?, 1),
                (g.clause(b, 2, 1)?, 1),
                (g.clause(b, 3, 1)?, 2),
                (b.axge(g.var(4)), 1),
            ];
            let l1 = b.derive(&parts, 2, &lin(&[(1, neg(3)), (-1, neg(4))]))?;
            // q = u1 − u2
            let parts = [(g.clause(b, 7, 1)?, 1), (g.clause(b, 7, 2)?, 1), (l1, 1)];
            let q_le = b.derive(&parts, 2, &lin(&[(1, neg(3)), (-1, neg(4)), (-1, pos(7))]))?;
            let q_ge = g.clause(b, 7, 0)?;
            // ¬z = q + u3
            let parts = [
                (g.clause(b, 8, 1)?, 1),
                (g.clause(b, 8, 2)?, 1),
                (g.clause(b, 7, 2)?, 1),
                (g.clause(b, 5, 1)?, 1),
                (g.clause(b, 4, 1)?, 1),
            ];
            let p_ge = b.derive(&parts, 2, &lin(&[(1, neg(8)), (-1, pos(7)), (-1, pos(5))]))?;
            let p_le = g.clause(b, 8, 0)?;
            let co_up = g.clause(b, 6, 0)?;
            let co_down = g.clause(b, 6, 1)?;
            let ge = b.derive(
                &[(c1_le, 1), (c2_le, 1), (c3_le, 1), (q_le, 1), (p_le, 1), (co_down, 2)],
                1,
                &goal_ge,
            )?;
            let le = b.derive(
                &[(c1_ge, 1), (c2_ge, 1), (c3_ge, 1), (q_ge, 1), (p_ge, 1), (co_up, 2)],
                1,
                &goal_le,
            )?;
            Ok((ge, le))
        }
    }
}

/// The bit equation derivation for one shape, on x = x1, c = x2, y = x3
/// and gates from x4 on. Hypotheses are the gate clauses and goals the two
/// halves of the equation.
pub fn equation_template(shape: BitShape) -> CpDerivation {
    let mut alloc = VarAlloc::starting_at(4);
    let bit = AdderBit::build(shape, Lit::Pos(1), Lit::Pos(2), Lit::Pos(3), &mut alloc);
    let hyps: PbFormula = bit.clauses().iter().map(clause_to_pb).collect();
    let mut b = CpBuilder::new(hyps.iter().cloned().collect());
    derive_bit_equation(&mut b, &bit).expect("templates are closed");
    let (ge, le) = bit.equation();
    CpDerivation {
        hyps,
        steps: b.into_steps(),
        goals: PbFormula::from_iter([ge, le]),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cp::check_cp;
    use crate::er::ExtensionBlock;
    use crate::syntax::Assignment;
    use std::collections::BTreeSet;

    const SHAPES: [BitShape; 3] = [BitShape::First, BitShape::Interior, BitShape::Last];

    #[test]
    fn templates_check() {
        for shape in SHAPES {
            let d = equation_template(shape);
            check_cp(&d).unwrap_or_else(|e| panic!("{shape:?}: {e}"));
            assert!(d.steps.len() <= 100, "{shape:?} uses {} steps", d.steps.len());
        }
    }

    // Gate-by-gate evaluation against the arithmetic definition of the bit.
    #[test]
    fn gates_compute_sum_and_carry() {
        for shape in SHAPES {
            let mut alloc = VarAlloc::starting_at(4);
            let bit = AdderBit::build(shape, Lit::Pos(1), Lit::Pos(2), Lit::Pos(3), &mut alloc);
            let block = ExtensionBlock::new(BTreeSet::from([1, 2, 3]), bit.axioms.clone()).unwrap();
            for bits in 0..8u32 {
                let (x, c, y) = (bits & 1, bits >> 1 & 1, bits >> 2 & 1);
                let base = Assignment::from_pairs([(1, x == 1), (2, c == 1), (3, y == 1)]);
                let ext = block.extend_assignment(&base);
                let (x, c, y) = match shape {
                    BitShape::First => (x, 0, y),
                    BitShape::Interior => (x, c, y),
                    BitShape::Last => (0, c, 1),
                };
                // x + z + c = y + 2·carry
                let z = ext.value(bit.sum) as u32;
                let carry = bit.carry.map_or(0, |v| ext.value(v) as u32);
                assert_eq!(x + z + c, y + 2 * carry, "{shape:?} x={x} c={c} y={y}");
                let (ge, le) = bit.equation();
                assert!(ge.eval(|v| ext.value(v)) && le.eval(|v| ext.value(v)));
            }
        }
    }

    // The derived constraints hold in exactly the models of the gate
    // clauses that satisfy the equation: check every point of the cube.
    #[test]
    fn equation_is_semantic_consequence() {
        for shape in SHAPES {
            let mut alloc = VarAlloc::starting_at(4);
            let bit = AdderBit::build(shape, Lit::Pos(1), Lit::Pos(2), Lit::Pos(3), &mut alloc);
            let n = 3 + shape.gates();
            let clauses = bit.clauses();
            let (ge, le) = bit.equation();
            for bits in 0u32..1 << n {
                let val = |v: Var| bits >> (v - 1) & 1 == 1;
                if clauses.iter().all(|c| c.eval(val)) {
                    assert!(ge.eval(val) && le.eval(val));
                }
            }
        }
    }

    #[test]
    fn literal_inputs() {
        let mut alloc = VarAlloc::starting_at(10);
        let bit = AdderBit::build(BitShape::Interior, Lit::Neg(1), Lit::Pos(2), Lit::Neg(1), &mut alloc);
        let hyps: Vec<PbConstraint> = bit.clauses().iter().map(clause_to_pb).collect();
        let mut b = CpBuilder::new(hyps.clone());
        derive_bit_equation(&mut b, &bit).unwrap();
        let (ge, le) = bit.equation();
        crate::cp::check_steps(&hyps, b.steps(), [&ge, &le]).unwrap();
    }
}
