//! Pseudo-Boolean constraints in normal form.
//!
//! A constraint is kept as Σ a_i x_i ≥ b over positive variables with
//! nonzero merged coefficients sorted by variable, so syntactic equality
//! coincides with equality of normal forms.

use std::collections::BTreeMap;
use std::fmt;

use indexmap::IndexSet;
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::syntax::{Clause, Lit, Substitution, Var};

#[derive(Copy, Clone, Debug, PartialEq, Eq)]
pub enum Relation {
    Ge,
    Le,
}

/// Σ a_i x_i ≥ b with positive variables, merged coefficients, no zero terms.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PbConstraint {
    terms: Vec<(Var, BigInt)>,
    bound: BigInt,
}

/// Accumulator for linear forms over literals with a constant part.
#[derive(Clone, Debug, Default)]
pub struct LinearSum {
    terms: BTreeMap<Var, BigInt>,
    constant: BigInt,
}

impl LinearSum {
    pub fn new() -> LinearSum {
        LinearSum::default()
    }

    /// Adds `coeff · lit`.
    pub fn add_lit(&mut self, coeff: impl Into<BigInt>, lit: Lit) -> &mut Self {
        let coeff = coeff.into();
        match lit {
            Lit::False => {}
            Lit::True => self.constant += coeff,
            Lit::Pos(v) => *self.terms.entry(v).or_default() += coeff,
            Lit::Neg(v) => {
                self.constant += &coeff;
                *self.terms.entry(v).or_default() -= coeff;
            }
        }
        self
    }

    pub fn add_constant(&mut self, c: impl Into<BigInt>) -> &mut Self {
        self.constant += c.into();
        self
    }

    /// The constraint `self ≥ rhs`.
    pub fn ge(&self, rhs: impl Into<BigInt>) -> PbConstraint {
        PbConstraint::from_parts(
            self.terms.iter().map(|(&v, c)| (v, c.clone())),
            rhs.into() - &self.constant,
        )
    }

    /// The constraint `self ≤ rhs`.
    pub fn le(&self, rhs: impl Into<BigInt>) -> PbConstraint {
        PbConstraint::from_parts(
            self.terms.iter().map(|(&v, c)| (v, -c.clone())),
            &self.constant - rhs.into(),
        )
    }
}

impl PbConstraint {
    /// Builds the normal form of `Σ coeff·lit (rel) bound`.
    pub fn new(
        terms: impl IntoIterator<Item = (BigInt, Lit)>,
        rel: Relation,
        bound: impl Into<BigInt>,
    ) -> PbConstraint {
        let mut sum = LinearSum::new();
        for (c, l) in terms {
            sum.add_lit(c, l);
        }
        match rel {
            Relation::Ge => sum.ge(bound),
            Relation::Le => sum.le(bound),
        }
    }

    /// Normalizes a ≥-constraint over positive variables.
    pub fn from_parts(terms: impl IntoIterator<Item = (Var, BigInt)>, bound: BigInt) -> PbConstraint {
        let mut merged: BTreeMap<Var, BigInt> = BTreeMap::new();
        for (v, c) in terms {
            *merged.entry(v).or_default() += c;
        }
        PbConstraint {
            terms: merged.into_iter().filter(|(_, c)| !c.is_zero()).collect(),
            bound,
        }
    }

    /// The contradiction 0 ≥ 1.
    pub fn contradiction() -> PbConstraint {
        PbConstraint {
            terms: Vec::new(),
            bound: BigInt::one(),
        }
    }

    /// x ≥ 0.
    pub fn axiom_ge(v: Var) -> PbConstraint {
        PbConstraint {
            terms: vec![(v, BigInt::one())],
            bound: BigInt::zero(),
        }
    }

    /// x ≤ 1, stored as −x ≥ −1.
    pub fn axiom_le(v: Var) -> PbConstraint {
        PbConstraint {
            terms: vec![(v, -BigInt::one())],
            bound: -BigInt::one(),
        }
    }

    pub fn terms(&self) -> &[(Var, BigInt)] {
        &self.terms
    }

    pub fn bound(&self) -> &BigInt {
        &self.bound
    }

    pub fn coeff(&self, v: Var) -> BigInt {
        match self.terms.binary_search_by_key(&v, |(w, _)| *w) {
            Ok(i) => self.terms[i].1.clone(),
            Err(_) => BigInt::zero(),
        }
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.terms.iter().map(|(v, _)| *v)
    }

    pub fn max_var(&self) -> Var {
        self.terms.last().map(|(v, _)| *v).unwrap_or(0)
    }

    /// Empty left side with bound ≤ 0.
    pub fn is_trivial(&self) -> bool {
        self.terms.is_empty() && !self.bound.is_positive()
    }

    /// Empty left side with positive bound; the constraint 0 ≥ 1 and its multiples.
    pub fn is_contradiction(&self) -> bool {
        self.terms.is_empty() && self.bound.is_positive()
    }

    /// Ax ≤ b − 1, i.e. −Ax ≥ 1 − b.
    pub fn negate(&self) -> PbConstraint {
        PbConstraint {
            terms: self.terms.iter().map(|(v, c)| (*v, -c)).collect(),
            bound: BigInt::one() - &self.bound,
        }
    }

    pub fn substitute(&self, omega: &Substitution) -> PbConstraint {
        let mut sum = LinearSum::new();
        for (v, c) in &self.terms {
            sum.add_lit(c.clone(), omega.apply(Lit::Pos(*v)));
        }
        sum.ge(self.bound.clone())
    }

    /// ma·self + mb·other.
    pub fn add_scaled(&self, ma: &BigInt, other: &PbConstraint, mb: &BigInt) -> PbConstraint {
        let mut terms = Vec::with_capacity(self.terms.len() + other.terms.len());
        let (mut i, mut j) = (0, 0);
        while i < self.terms.len() || j < other.terms.len() {
            let a = self.terms.get(i);
            let b = other.terms.get(j);
            let (v, c) = match (a, b) {
                (Some((va, ca)), Some((vb, _))) if va < vb => {
                    i += 1;
                    (*va, ca * ma)
                }
                (Some((va, _)), Some((vb, cb))) if vb < va => {
                    j += 1;
                    (*vb, cb * mb)
                }
                (Some((va, ca)), Some((_, cb))) => {
                    i += 1;
                    j += 1;
                    (*va, ca * ma + cb * mb)
                }
                (Some((va, ca)), None) => {
                    i += 1;
                    (*va, ca * ma)
                }
                (None, Some((vb, cb))) => {
                    j += 1;
                    (*vb, cb * mb)
                }
                (None, None) => unreachable!(),
            };
            if !c.is_zero() {
                terms.push((v, c));
            }
        }
        PbConstraint {
            terms,
            bound: &self.bound * ma + &other.bound * mb,
        }
    }

    pub fn divisible_by(&self, d: &BigInt) -> bool {
        d.is_positive() && self.terms.iter().all(|(_, c)| c.is_multiple_of(d))
    }

    /// Divides every coefficient by `d` and rounds the bound up.
    /// Caller checks divisibility.
    pub fn divide(&self, d: &BigInt) -> PbConstraint {
        PbConstraint {
            terms: self.terms.iter().map(|(v, c)| (*v, c / d)).collect(),
            bound: self.bound.div_ceil(d),
        }
    }

    /// Value of the left side under a valuation.
    pub fn lhs_value(&self, value: impl Fn(Var) -> bool) -> BigInt {
        let mut s = BigInt::zero();
        for (v, c) in &self.terms {
            if value(*v) {
                s += c;
            }
        }
        s
    }

    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.lhs_value(value) >= self.bound
    }

    /// The least achievable value of the left side minus the bound.
    pub fn min_slack(&self) -> BigInt {
        let lhs_min: BigInt = self
            .terms
            .iter()
            .filter(|(_, c)| c.is_negative())
            .map(|(_, c)| c.clone())
            .sum();
        lhs_min - &self.bound
    }

    /// Holds under every 0/1 assignment.
    pub fn is_tautology(&self) -> bool {
        !self.min_slack().is_negative()
    }

    /// Largest bit length of any coefficient or the bound.
    pub fn max_bits(&self) -> u64 {
        self.terms
            .iter()
            .map(|(_, c)| c.bits())
            .chain(std::iter::once(self.bound.bits()))
            .max()
            .unwrap_or(0)
    }
}

impl fmt::Display for PbConstraint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (v, c) in &self.terms {
            if c.is_negative() {
                write!(f, "{c} x{v} ")?;
            } else {
                write!(f, "+{c} x{v} ")?;
            }
        }
        write!(f, ">= {}", self.bound)
    }
}

/// C*: Σ x + Σ (1 − y) ≥ 1 for the positive literals x and negative literals y of C.
pub fn clause_to_pb(c: &Clause) -> PbConstraint {
    let mut sum = LinearSum::new();
    for l in c.iter() {
        sum.add_lit(1, l);
    }
    sum.ge(1)
}

pub fn pb_negate(c: &PbConstraint) -> PbConstraint {
    c.negate()
}

/// An ordered collection of PB constraints; membership uses normal forms.
#[derive(Clone, Debug, Default)]
pub struct PbFormula {
    items: IndexSet<PbConstraint>,
}

impl PbFormula {
    pub fn new() -> PbFormula {
        PbFormula::default()
    }

    pub fn push(&mut self, c: PbConstraint) -> bool {
        self.items.insert(c)
    }

    pub fn contains(&self, c: &PbConstraint) -> bool {
        self.items.contains(c)
    }

    pub fn index_of(&self, c: &PbConstraint) -> Option<usize> {
        self.items.get_index_of(c)
    }

    pub fn get(&self, i: usize) -> Option<&PbConstraint> {
        self.items.get_index(i)
    }

    /// Removes a constraint, keeping the order of the rest.
    pub fn remove(&mut self, c: &PbConstraint) -> bool {
        self.items.shift_remove(c)
    }

    pub fn clear(&mut self) {
        self.items.clear();
    }

    pub fn iter(&self) -> impl Iterator<Item = &PbConstraint> + '_ {
        self.items.iter()
    }

    pub fn len(&self) -> usize {
        self.items.len()
    }

    pub fn is_empty(&self) -> bool {
        self.items.is_empty()
    }

    pub fn vars(&self) -> std::collections::BTreeSet<Var> {
        self.items.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn max_var(&self) -> Var {
        self.items.iter().map(|c| c.max_var()).max().unwrap_or(0)
    }

    pub fn contains_contradiction(&self) -> bool {
        self.items.iter().any(|c| c.is_contradiction())
    }

    pub fn substitute(&self, omega: &Substitution) -> PbFormula {
        self.iter().map(|c| c.substitute(omega)).collect()
    }

    pub fn is_subset(&self, other: &PbFormula) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.items.iter().all(|c| c.eval(&value))
    }

    pub fn from_cnf<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> PbFormula {
        clauses.into_iter().map(clause_to_pb).collect()
    }
}

impl PartialEq for PbFormula {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for PbFormula {}

impl FromIterator<PbConstraint> for PbFormula {
    fn from_iter<T: IntoIterator<Item = PbConstraint>>(iter: T) -> Self {
        PbFormula {
            items: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a PbFormula {
    type Item = &'a PbConstraint;
    type IntoIter = indexmap::set::Iter<'a, PbConstraint>;
    fn into_iter(self) -> Self::IntoIter {
        self.items.iter()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn clause_translation() {
        let c = Clause::new([Lit::Pos(1), Lit::Neg(2)]);
        // x1 + (1 − x2) ≥ 1 is x1 − x2 ≥ 0
        assert_eq!(clause_to_pb(&c), PbConstraint::from_parts([(1, big(1)), (2, big(-1))], big(0)));
        assert_eq!(clause_to_pb(&Clause::empty()), PbConstraint::contradiction());
        let taut = clause_to_pb(&Clause::new([Lit::Pos(1), Lit::Neg(1)]));
        assert!(taut.is_trivial());
        assert_eq!(taut.bound(), &big(0));
    }

    #[test]
    fn extension_clause_under_alias() {
        // (1−u) + (1−v) + y ≥ 1 with y ↦ u gives 2 − v ≥ 1
        let (u, v, y) = (1, 2, 3);
        let a = clause_to_pb(&Clause::new([Lit::Neg(u), Lit::Neg(v), Lit::Pos(y)]));
        let sigma = Substitution::from_pairs([(y, Lit::Pos(u))]);
        let expected = PbConstraint::new([(big(1), Lit::Neg(v))], Relation::Ge, 0);
        assert_eq!(a.substitute(&sigma), expected);
        assert_eq!(expected, PbConstraint::from_parts([(v, big(-1))], big(-1)));
    }

    #[test]
    fn negation() {
        let c = PbConstraint::new([(big(1), Lit::Pos(1)), (big(1), Lit::Pos(2))], Relation::Ge, 1);
        let n = c.negate();
        assert_eq!(n, PbConstraint::new([(big(1), Lit::Pos(1)), (big(1), Lit::Pos(2))], Relation::Le, 0));
        let d = PbConstraint::new([(big(2), Lit::Pos(1)), (big(-3), Lit::Pos(2))], Relation::Ge, 0);
        assert_eq!(
            d.negate(),
            PbConstraint::new([(big(2), Lit::Pos(1)), (big(-3), Lit::Pos(2))], Relation::Le, -1)
        );
        assert_eq!(d.negate().negate(), d);
    }

    #[test]
    fn add_and_divide() {
        let a = PbConstraint::from_parts([(1, big(2)), (2, big(2))], big(1));
        assert!(a.divisible_by(&big(2)));
        assert_eq!(a.divide(&big(2)), PbConstraint::from_parts([(1, big(1)), (2, big(1))], big(1)));
        let x = PbConstraint::from_parts([(1, big(1))], big(1));
        let y = PbConstraint::from_parts([(1, big(-1)), (2, big(1))], big(0));
        assert_eq!(x.add_scaled(&big(1), &y, &big(1)), PbConstraint::from_parts([(2, big(1))], big(1)));
        let neg = PbConstraint::from_parts([(1, big(-3))], big(-2));
        assert_eq!(neg.divide(&big(3)), PbConstraint::from_parts([(1, big(-1))], big(0)));
    }

    #[test]
    fn normalization_preserves_solutions() {
        // 3·~x1 + 2·x1 − x2 ≤ 1
        let c = PbConstraint::new(
            [(big(3), Lit::Neg(1)), (big(2), Lit::Pos(1)), (big(-1), Lit::Pos(2))],
            Relation::Le,
            1,
        );
        for bits in 0..4u32 {
            let val = |v: Var| bits >> (v - 1) & 1 == 1;
            let x1 = val(1) as i64;
            let x2 = val(2) as i64;
            let direct = 3 * (1 - x1) + 2 * x1 - x2 <= 1;
            assert_eq!(c.eval(val), direct);
        }
    }
}
