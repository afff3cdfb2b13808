//! Literals, clauses, CNFs, substitutions and assignments.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;

use indexmap::IndexSet;
use num_bigint::BigUint;
use num_traits::ToPrimitive;

/// Variable identifier. Always positive.
pub type Var = u32;

/// A propositional literal or one of the constants 0 and 1.
#[derive(Copy, Clone, Debug, PartialEq, Eq, Hash)]
pub enum Lit {
    False,
    True,
    Pos(Var),
    Neg(Var),
}

impl Lit {
    pub fn constant(value: bool) -> Lit {
        if value {
            Lit::True
        } else {
            Lit::False
        }
    }

    pub fn new(var: Var, positive: bool) -> Lit {
        debug_assert!(var > 0);
        if positive {
            Lit::Pos(var)
        } else {
            Lit::Neg(var)
        }
    }

    /// Parses a DIMACS-style integer literal.
    pub fn from_dimacs(n: i64) -> Option<Lit> {
        match n {
            0 => None,
            n if n > 0 => Var::try_from(n).ok().map(Lit::Pos),
            n => Var::try_from(-n).ok().map(Lit::Neg),
        }
    }

    /// DIMACS integer for a non-constant literal.
    pub fn to_dimacs(self) -> Option<i64> {
        match self {
            Lit::Pos(v) => Some(v as i64),
            Lit::Neg(v) => Some(-(v as i64)),
            _ => None,
        }
    }

    pub fn negate(self) -> Lit {
        match self {
            Lit::False => Lit::True,
            Lit::True => Lit::False,
            Lit::Pos(v) => Lit::Neg(v),
            Lit::Neg(v) => Lit::Pos(v),
        }
    }

    pub fn var(self) -> Option<Var> {
        match self {
            Lit::Pos(v) | Lit::Neg(v) => Some(v),
            _ => None,
        }
    }

    pub fn is_const(self) -> bool {
        matches!(self, Lit::False | Lit::True)
    }

    pub fn is_positive(self) -> bool {
        matches!(self, Lit::Pos(_))
    }

    /// Value under a total valuation of the variables.
    pub fn eval(self, value: impl Fn(Var) -> bool) -> bool {
        match self {
            Lit::False => false,
            Lit::True => true,
            Lit::Pos(v) => value(v),
            Lit::Neg(v) => !value(v),
        }
    }

    fn key(self) -> (Var, u8) {
        match self {
            Lit::False => (0, 0),
            Lit::True => (0, 1),
            Lit::Pos(v) => (v, 2),
            Lit::Neg(v) => (v, 3),
        }
    }
}

impl std::ops::Not for Lit {
    type Output = Lit;
    fn not(self) -> Lit {
        self.negate()
    }
}

impl PartialOrd for Lit {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Lit {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl fmt::Display for Lit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Lit::False => write!(f, "0"),
            Lit::True => write!(f, "1"),
            Lit::Pos(v) => write!(f, "x{v}"),
            Lit::Neg(v) => write!(f, "~x{v}"),
        }
    }
}

/// A clause: a set of literals, kept sorted and without duplicates.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct Clause(Vec<Lit>);

impl Clause {
    pub fn new(lits: impl IntoIterator<Item = Lit>) -> Clause {
        let mut v: Vec<Lit> = lits.into_iter().collect();
        v.sort_unstable();
        v.dedup();
        Clause(v)
    }

    pub fn empty() -> Clause {
        Clause(Vec::new())
    }

    pub fn unit(lit: Lit) -> Clause {
        Clause(vec![lit])
    }

    pub fn from_dimacs(lits: &[i64]) -> Clause {
        Clause::new(lits.iter().map(|&n| Lit::from_dimacs(n).expect("nonzero literal")))
    }

    pub fn lits(&self) -> &[Lit] {
        &self.0
    }

    pub fn iter(&self) -> impl Iterator<Item = Lit> + '_ {
        self.0.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, lit: Lit) -> bool {
        self.0.binary_search(&lit).is_ok()
    }

    pub fn is_subset(&self, other: &Clause) -> bool {
        self.0.iter().all(|&l| other.contains(l))
    }

    /// Contains 1, or a literal together with its negation.
    pub fn is_tautologous(&self) -> bool {
        self.0
            .iter()
            .any(|&l| l == Lit::True || (l.is_positive() && self.contains(l.negate())))
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.0.iter().filter_map(|l| l.var())
    }

    pub fn with(&self, lit: Lit) -> Clause {
        let mut c = self.clone();
        if let Err(pos) = c.0.binary_search(&lit) {
            c.0.insert(pos, lit);
        }
        c
    }

    pub fn without(&self, lit: Lit) -> Clause {
        Clause(self.0.iter().copied().filter(|&l| l != lit).collect())
    }

    pub fn union(&self, other: &Clause) -> Clause {
        Clause::new(self.iter().chain(other.iter()))
    }

    pub fn substitute(&self, omega: &Substitution) -> Clause {
        Clause::new(self.iter().map(|l| omega.apply(l)))
    }

    /// The CNF of unit clauses {¬p} for each p in the clause.
    pub fn negate(&self) -> Cnf {
        Cnf::from_iter(self.iter().map(|l| Clause::unit(l.negate())))
    }

    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.0.iter().any(|l| l.eval(&value))
    }
}

impl FromIterator<Lit> for Clause {
    fn from_iter<T: IntoIterator<Item = Lit>>(iter: T) -> Self {
        Clause::new(iter)
    }
}

impl fmt::Display for Clause {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "⊥");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ∨ ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Negation of a clause as a CNF of unit clauses.
pub fn negate_clause(c: &Clause) -> Cnf {
    c.negate()
}

/// A CNF: a set of clauses. Insertion order is kept so that clauses can be
/// referred to by position; equality ignores order.
#[derive(Clone, Debug, Default)]
pub struct Cnf {
    clauses: IndexSet<Clause>,
}

impl Cnf {
    pub fn new() -> Cnf {
        Cnf::default()
    }

    /// Returns false when the clause was already present.
    pub fn push(&mut self, c: Clause) -> bool {
        self.clauses.insert(c)
    }

    pub fn extend(&mut self, cs: impl IntoIterator<Item = Clause>) {
        for c in cs {
            self.clauses.insert(c);
        }
    }

    pub fn contains(&self, c: &Clause) -> bool {
        self.clauses.contains(c)
    }

    pub fn index_of(&self, c: &Clause) -> Option<usize> {
        self.clauses.get_index_of(c)
    }

    pub fn get(&self, i: usize) -> Option<&Clause> {
        self.clauses.get_index(i)
    }

    pub fn iter(&self) -> impl Iterator<Item = &Clause> + '_ {
        self.clauses.iter()
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn vars(&self) -> BTreeSet<Var> {
        self.clauses.iter().flat_map(|c| c.vars()).collect()
    }

    pub fn max_var(&self) -> Var {
        self.clauses
            .iter()
            .flat_map(|c| c.vars())
            .max()
            .unwrap_or(0)
    }

    pub fn contains_empty(&self) -> bool {
        self.clauses.iter().any(|c| c.is_empty())
    }

    pub fn substitute(&self, omega: &Substitution) -> Cnf {
        Cnf::from_iter(self.iter().map(|c| c.substitute(omega)))
    }

    pub fn is_subset(&self, other: &Cnf) -> bool {
        self.iter().all(|c| other.contains(c))
    }

    pub fn union(&self, other: &Cnf) -> Cnf {
        let mut out = self.clone();
        out.extend(other.iter().cloned());
        out
    }

    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        self.clauses.iter().all(|c| c.eval(&value))
    }
}

impl PartialEq for Cnf {
    fn eq(&self, other: &Self) -> bool {
        self.len() == other.len() && self.is_subset(other)
    }
}

impl Eq for Cnf {}

impl FromIterator<Clause> for Cnf {
    fn from_iter<T: IntoIterator<Item = Clause>>(iter: T) -> Self {
        Cnf {
            clauses: iter.into_iter().collect(),
        }
    }
}

impl<'a> IntoIterator for &'a Cnf {
    type Item = &'a Clause;
    type IntoIter = indexmap::set::Iter<'a, Clause>;
    fn into_iter(self) -> Self::IntoIter {
        self.clauses.iter()
    }
}

/// A negation-respecting map on literals, identity outside its domain.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Substitution {
    map: BTreeMap<Var, Lit>,
}

impl Substitution {
    pub fn identity() -> Substitution {
        Substitution::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, Lit)>) -> Substitution {
        let mut s = Substitution::identity();
        for (v, l) in pairs {
            s.set(v, l);
        }
        s
    }

    /// Swaps two variables.
    pub fn swap(a: Var, b: Var) -> Substitution {
        Substitution::from_pairs([(a, Lit::Pos(b)), (b, Lit::Pos(a))])
    }

    pub fn set(&mut self, v: Var, image: Lit) {
        if image == Lit::Pos(v) {
            self.map.remove(&v);
        } else {
            self.map.insert(v, image);
        }
    }

    pub fn get(&self, v: Var) -> Lit {
        self.map.get(&v).copied().unwrap_or(Lit::Pos(v))
    }

    pub fn apply(&self, lit: Lit) -> Lit {
        match lit {
            Lit::Pos(v) => self.get(v),
            Lit::Neg(v) => self.get(v).negate(),
            c => c,
        }
    }

    pub fn is_identity(&self) -> bool {
        self.map.is_empty()
    }

    /// Variables not mapped to themselves.
    pub fn domain(&self) -> impl Iterator<Item = Var> + '_ {
        self.map.keys().copied()
    }

    pub fn entries(&self) -> impl Iterator<Item = (Var, Lit)> + '_ {
        self.map.iter().map(|(&v, &l)| (v, l))
    }

    pub fn max_var(&self) -> Var {
        self.map
            .iter()
            .flat_map(|(&v, l)| [Some(v), l.var()])
            .flatten()
            .max()
            .unwrap_or(0)
    }

    /// Restricts the domain to the given variables.
    pub fn restrict(&self, keep: impl Fn(Var) -> bool) -> Substitution {
        Substitution {
            map: self
                .map
                .iter()
                .filter(|(&v, _)| keep(v))
                .map(|(&v, &l)| (v, l))
                .collect(),
        }
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, (v, l)) in self.map.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "x{v} ↦ {l}")?;
        }
        write!(f, "}}")
    }
}

/// τ∘ω: the substitution p ↦ τ(ω(p)).
pub fn compose(tau: &Substitution, omega: &Substitution) -> Substitution {
    let mut out = Substitution::identity();
    for v in omega.domain().chain(tau.domain()) {
        out.set(v, tau.apply(omega.apply(Lit::Pos(v))));
    }
    out
}

/// Γ↾ω = Γ as a set of clause sets.
pub fn is_symmetry(omega: &Substitution, cnf: &Cnf) -> bool {
    cnf.substitute(omega) == *cnf
}

/// ω ⊨ Γ: every clause of Γ↾ω is tautologous.
pub fn satisfies(omega: &Substitution, cnf: &Cnf) -> bool {
    cnf.iter().all(|c| c.substitute(omega).is_tautologous())
}

/// ω^m, computed per variable from the tail and cycle of its orbit.
pub fn iterate_substitution(omega: &Substitution, m: &BigUint) -> Substitution {
    let mut out = Substitution::identity();
    for v in omega.domain() {
        let mut walk = vec![Lit::Pos(v)];
        let mut first_seen: HashMap<Lit, usize> = HashMap::from([(Lit::Pos(v), 0)]);
        let (tail, cycle) = loop {
            let next = omega.apply(*walk.last().unwrap());
            if let Some(&k) = first_seen.get(&next) {
                break (k, walk.len() - k);
            }
            first_seen.insert(next, walk.len());
            walk.push(next);
        };
        let pos = match m.to_usize() {
            Some(small) if small < walk.len() => small,
            _ => {
                let offset = (m - BigUint::from(tail)) % BigUint::from(cycle);
                tail + offset.to_usize().unwrap()
            }
        };
        out.set(v, walk[pos]);
    }
    out
}

/// Generator of fresh variable ids.
#[derive(Clone, Debug)]
pub struct VarAlloc {
    next: Var,
}

impl VarAlloc {
    /// The first fresh variable will be `max + 1`.
    pub fn above(max: Var) -> VarAlloc {
        VarAlloc { next: max + 1 }
    }

    pub fn starting_at(first: Var) -> VarAlloc {
        assert!(first > 0);
        VarAlloc { next: first }
    }

    pub fn fresh(&mut self) -> Var {
        let v = self.next;
        self.next += 1;
        v
    }

    pub fn peek(&self) -> Var {
        self.next
    }

    /// Makes sure later fresh variables are above `max`.
    pub fn reserve(&mut self, max: Var) {
        self.next = self.next.max(max + 1);
    }
}

/// A 0/1 assignment to a declared set of variables.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct Assignment {
    values: BTreeMap<Var, bool>,
}

impl Assignment {
    pub fn new() -> Assignment {
        Assignment::default()
    }

    pub fn from_pairs(pairs: impl IntoIterator<Item = (Var, bool)>) -> Assignment {
        Assignment {
            values: pairs.into_iter().collect(),
        }
    }

    pub fn set(&mut self, v: Var, b: bool) {
        self.values.insert(v, b);
    }

    pub fn get(&self, v: Var) -> Option<bool> {
        self.values.get(&v).copied()
    }

    /// Value of `v`, treating unassigned variables as 0.
    pub fn value(&self, v: Var) -> bool {
        self.get(v).unwrap_or(false)
    }

    pub fn vars(&self) -> impl Iterator<Item = Var> + '_ {
        self.values.keys().copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (Var, bool)> + '_ {
        self.values.iter().map(|(&v, &b)| (v, b))
    }

    pub fn is_total_over(&self, vars: impl IntoIterator<Item = Var>) -> bool {
        vars.into_iter().all(|v| self.values.contains_key(&v))
    }

    /// Value of a literal; None when its variable is unassigned.
    pub fn lit_value(&self, l: Lit) -> Option<bool> {
        match l {
            Lit::False => Some(false),
            Lit::True => Some(true),
            Lit::Pos(v) => self.get(v),
            Lit::Neg(v) => self.get(v).map(|b| !b),
        }
    }

    pub fn as_substitution(&self) -> Substitution {
        Substitution::from_pairs(self.iter().map(|(v, b)| (v, Lit::constant(b))))
    }

    /// α∘ω restricted to the variables of α.
    pub fn compose_subst(&self, omega: &Substitution) -> Assignment {
        Assignment::from_pairs(self.vars().map(|v| {
            let image = omega.apply(Lit::Pos(v));
            (v, self.lit_value(image).unwrap_or(false))
        }))
    }

    pub fn satisfies(&self, cnf: &Cnf) -> bool {
        cnf.eval(|v| self.value(v))
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .values
            .iter()
            .map(|(v, b)| format!("x{v}={}", u8::from(*b)))
            .collect();
        write!(f, "{}", parts.join(" "))
    }
}

/// Variables of a list of clauses.
pub fn vars_of<'a>(clauses: impl IntoIterator<Item = &'a Clause>) -> HashSet<Var> {
    clauses.into_iter().flat_map(|c| c.vars()).collect()
}
