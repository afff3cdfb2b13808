//! Exhaustive semantic checks for small formulas.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};

use num_bigint::BigInt;
use num_traits::ToPrimitive;
use thiserror::Error;

use crate::dominance::{Configuration, OrderSpec};
use crate::pb::{PbConstraint, PbFormula};
use crate::syntax::{is_symmetry, Assignment, Clause, Cnf, Lit, Substitution, Var};

pub const DEFAULT_CAP: usize = 24;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("{vars} variables exceed the enumeration cap of {cap}")]
    CapExceeded { vars: usize, cap: usize },
    #[error("precondition violated: {0}")]
    Precondition(String),
}

/// Variables listed most significant first.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct VarOrder(Vec<Var>);

impl VarOrder {
    /// Fails on duplicate entries.
    pub fn new(vars: Vec<Var>) -> Result<VarOrder, OracleError> {
        let mut seen = HashSet::new();
        for &v in &vars {
            if !seen.insert(v) {
                return Err(OracleError::Precondition(format!("x{v} listed twice")));
            }
        }
        Ok(VarOrder(vars))
    }

    pub fn natural(vars: impl IntoIterator<Item = Var>) -> VarOrder {
        let set: BTreeSet<Var> = vars.into_iter().collect();
        VarOrder(set.into_iter().collect())
    }

    pub fn vars(&self) -> &[Var] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn contains(&self, v: Var) -> bool {
        self.0.contains(&v)
    }
}

/// Anything the oracle can evaluate.
pub trait Formula {
    fn formula_vars(&self) -> BTreeSet<Var>;
    fn compile_into(&self, index: &HashMap<Var, usize>, out: &mut Compiled);
}

impl Formula for Cnf {
    fn formula_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
    fn compile_into(&self, index: &HashMap<Var, usize>, out: &mut Compiled) {
        for c in self {
            out.add_clause(c, index);
        }
    }
}

impl Formula for PbFormula {
    fn formula_vars(&self) -> BTreeSet<Var> {
        self.vars()
    }
    fn compile_into(&self, index: &HashMap<Var, usize>, out: &mut Compiled) {
        for c in self {
            out.add_pb(c, index);
        }
    }
}

impl Formula for [&PbFormula] {
    fn formula_vars(&self) -> BTreeSet<Var> {
        self.iter().flat_map(|f| f.vars()).collect()
    }
    fn compile_into(&self, index: &HashMap<Var, usize>, out: &mut Compiled) {
        for f in self {
            f.compile_into(index, out);
        }
    }
}

enum CompiledPb {
    Small(Vec<(usize, i128)>, i128),
    Big(Vec<(usize, BigInt)>, BigInt),
}

/// A formula compiled to bitmask evaluation; bit i is the variable at position i.
#[derive(Default)]
pub struct Compiled {
    clauses: Vec<(u64, u64)>,
    pbs: Vec<CompiledPb>,
    falsum: bool,
}

impl Compiled {
    fn add_clause(&mut self, c: &Clause, index: &HashMap<Var, usize>) {
        if c.is_tautologous() {
            return;
        }
        let (mut pos, mut neg) = (0u64, 0u64);
        for l in c.iter() {
            match l {
                Lit::Pos(v) => pos |= 1 << index[&v],
                Lit::Neg(v) => neg |= 1 << index[&v],
                _ => {}
            }
        }
        if pos == 0 && neg == 0 {
            self.falsum = true;
        }
        self.clauses.push((pos, neg));
    }

    fn add_pb(&mut self, c: &PbConstraint, index: &HashMap<Var, usize>) {
        let small: Option<Vec<(usize, i128)>> = c
            .terms()
            .iter()
            .map(|(v, a)| a.to_i64().map(|a| (index[v], a as i128)))
            .collect();
        match (small, c.bound().to_i64()) {
            (Some(terms), Some(b)) => self.pbs.push(CompiledPb::Small(terms, b as i128)),
            _ => self.pbs.push(CompiledPb::Big(
                c.terms().iter().map(|(v, a)| (index[v], a.clone())).collect(),
                c.bound().clone(),
            )),
        }
    }

    pub fn eval(&self, bits: u64) -> bool {
        if self.falsum {
            return false;
        }
        for &(pos, neg) in &self.clauses {
            if bits & pos == 0 && !bits & neg == 0 {
                return false;
            }
        }
        for pb in &self.pbs {
            let ok = match pb {
                CompiledPb::Small(terms, b) => {
                    let mut s = 0i128;
                    for &(i, a) in terms {
                        if bits >> i & 1 == 1 {
                            s += a;
                        }
                    }
                    s >= *b
                }
                CompiledPb::Big(terms, b) => {
                    let mut s = BigInt::from(0);
                    for (i, a) in terms {
                        if bits >> i & 1 == 1 {
                            s += a;
                        }
                    }
                    s >= *b
                }
            };
            if !ok {
                return false;
            }
        }
        true
    }
}

/// Enumeration frame: `order` first (most significant), then the rest.
/// Counting upward through `0..2^n` visits assignments in lex order.
pub struct Space {
    vars: Vec<Var>,
    index: HashMap<Var, usize>,
}

impl Space {
    pub fn new(order: &[Var], extra: impl IntoIterator<Item = Var>, cap: usize) -> Result<Space, OracleError> {
        let mut vars: Vec<Var> = order.to_vec();
        let listed: HashSet<Var> = vars.iter().copied().collect();
        let rest: BTreeSet<Var> = extra.into_iter().filter(|v| !listed.contains(v)).collect();
        vars.extend(rest);
        if vars.len() > cap.min(63) {
            return Err(OracleError::CapExceeded {
                vars: vars.len(),
                cap: cap.min(63),
            });
        }
        let n = vars.len();
        let index = vars.iter().enumerate().map(|(i, &v)| (v, n - 1 - i)).collect();
        Ok(Space { vars, index })
    }

    pub fn len(&self) -> usize {
        self.vars.len()
    }

    pub fn is_empty(&self) -> bool {
        self.vars.is_empty()
    }

    pub fn size(&self) -> u64 {
        1u64 << self.vars.len()
    }

    pub fn compile<F: Formula + ?Sized>(&self, f: &F) -> Compiled {
        let mut out = Compiled::default();
        f.compile_into(&self.index, &mut out);
        out
    }

    pub fn bit(&self, v: Var) -> usize {
        self.index[&v]
    }

    pub fn assignment(&self, bits: u64) -> Assignment {
        Assignment::from_pairs(self.vars.iter().map(|&v| (v, bits >> self.index[&v] & 1 == 1)))
    }

    pub fn bits_of(&self, a: &Assignment) -> u64 {
        self.vars
            .iter()
            .filter(|&&v| a.value(v))
            .fold(0, |acc, &v| acc | 1 << self.index[&v])
    }
}

pub fn brute_sat<F: Formula + ?Sized>(f: &F, vars: &VarOrder) -> Result<Option<Assignment>, OracleError> {
    brute_sat_capped(f, vars, DEFAULT_CAP)
}

pub fn brute_sat_capped<F: Formula + ?Sized>(
    f: &F,
    vars: &VarOrder,
    cap: usize,
) -> Result<Option<Assignment>, OracleError> {
    let space = Space::new(vars.vars(), f.formula_vars(), cap)?;
    let compiled = space.compile(f);
    Ok((0..space.size()).find(|&b| compiled.eval(b)).map(|b| space.assignment(b)))
}

pub fn is_sat<F: Formula + ?Sized>(f: &F) -> Result<bool, OracleError> {
    Ok(brute_sat(f, &VarOrder::default())?.is_some())
}

pub fn equisatisfiable(a: &Cnf, b: &Cnf) -> Result<bool, OracleError> {
    Ok(is_sat(a)? == is_sat(b)?)
}

/// The least model under `order`; variables outside the order are
/// existentially chosen.
pub fn lex_min_model(cnf: &Cnf, order: &VarOrder) -> Result<Option<Assignment>, OracleError> {
    brute_sat(cnf, order)
}

/// All models of `f` over `space`, as bit patterns in increasing order.
pub fn models<F: Formula + ?Sized>(f: &F, space: &Space) -> Vec<u64> {
    let compiled = space.compile(f);
    (0..space.size()).filter(|&b| compiled.eval(b)).collect()
}

/// Whether some assignment to the free variables of `cnf` extends `fixed`.
pub fn sat_by_extension(cnf: &Cnf, fixed: &Assignment) -> Result<bool, OracleError> {
    match propagate(cnf, fixed) {
        Some(rest) => is_sat(&rest),
        None => Ok(false),
    }
}

/// Applies `fixed` and then unit propagation to a fixpoint. Returns the
/// remaining nontautologous clauses, or None on a conflict.
pub fn propagate(cnf: &Cnf, fixed: &Assignment) -> Option<Cnf> {
    let mut sub = fixed.as_substitution();
    let mut current = cnf.substitute(&sub);
    loop {
        let mut rest = Cnf::new();
        let mut units: BTreeMap<Var, bool> = BTreeMap::new();
        for c in current.iter() {
            let c = c.without(Lit::False);
            if c.is_tautologous() {
                continue;
            }
            if c.is_empty() {
                return None;
            }
            if c.len() == 1 {
                let l = c.iter().next().unwrap();
                let v = l.var().expect("constants were removed");
                if *units.entry(v).or_insert(l.is_positive()) != l.is_positive() {
                    return None;
                }
            }
            rest.push(c);
        }
        if units.is_empty() {
            return Some(rest);
        }
        sub = Substitution::from_pairs(units.into_iter().map(|(v, b)| (v, Lit::constant(b))));
        current = rest.substitute(&sub);
    }
}

/// Core satisfiable, and each core model is dominated by a model of core ∪ derived.
pub fn config_valid(cfg: &Configuration) -> Result<bool, OracleError> {
    config_valid_capped(cfg, DEFAULT_CAP)
}

pub fn config_valid_capped(cfg: &Configuration, cap: usize) -> Result<bool, OracleError> {
    let extra: BTreeSet<Var> = cfg
        .core
        .vars()
        .into_iter()
        .chain(cfg.derived.vars())
        .collect();
    let space = Space::new(&cfg.zvars, extra, cap)?;
    let core_models = models(&cfg.core, &space);
    if core_models.is_empty() {
        return Ok(false);
    }
    let both = [&cfg.core, &cfg.derived];
    let full_models = models(&both[..], &space);
    let zbits: Vec<usize> = cfg.zvars.iter().map(|&z| space.bit(z)).collect();
    let project = |b: u64| -> Vec<bool> { zbits.iter().map(|&i| b >> i & 1 == 1).collect() };
    match &cfg.order {
        OrderSpec::Linear(coeffs) => {
            let f = |b: u64| -> BigInt {
                project(b)
                    .iter()
                    .zip(coeffs)
                    .filter(|(on, _)| **on)
                    .map(|(_, c)| c.clone())
                    .sum()
            };
            let Some(best) = full_models.iter().map(|&b| f(b)).min() else {
                return Ok(false);
            };
            Ok(core_models.iter().all(|&a| best <= f(a)))
        }
        order => {
            let full: BTreeSet<Vec<bool>> = full_models.iter().map(|&b| project(b)).collect();
            let core: BTreeSet<Vec<bool>> = core_models.iter().map(|&b| project(b)).collect();
            Ok(core
                .iter()
                .all(|alpha| full.iter().any(|beta| order.holds(beta, alpha))))
        }
    }
}

/// Repeats α ← α∘ω while that is a lex-smaller model of Γ.
pub fn local_min_descent(
    cnf: &Cnf,
    omega: &Substitution,
    alpha: &Assignment,
    order: &VarOrder,
) -> Result<Assignment, OracleError> {
    if !alpha.satisfies(cnf) {
        return Err(OracleError::Precondition("α does not satisfy Γ".into()));
    }
    if !is_symmetry(omega, cnf) {
        return Err(OracleError::Precondition("ω is not a symmetry of Γ".into()));
    }
    let space = Space::new(order.vars(), cnf.vars().into_iter().chain(alpha.vars()), DEFAULT_CAP)?;
    let mut current = alpha.clone();
    loop {
        let next = current.compose_subst(omega);
        if space.bits_of(&next) < space.bits_of(&current) && next.satisfies(cnf) {
            current = next;
        } else {
            return Ok(current);
        }
    }
}

/// Compares two assignments lexicographically over `order`.
pub fn lex_le(a: &Assignment, b: &Assignment, order: &VarOrder) -> bool {
    for &v in order.vars() {
        match (a.value(v), b.value(v)) {
            (false, true) => return true,
            (true, false) => return false,
            _ => {}
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(cs: &[&[i64]]) -> Cnf {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    #[test]
    fn sat_basics() {
        let bot = cnf(&[&[]]);
        assert_eq!(brute_sat(&bot, &VarOrder::default()).unwrap(), None);
        let unit = cnf(&[&[1]]);
        let m = brute_sat(&unit, &VarOrder::natural([1])).unwrap().unwrap();
        assert_eq!(m, Assignment::from_pairs([(1, true)]));
        // two pigeons, one hole
        let php = cnf(&[&[1], &[2], &[-1, -2]]);
        assert_eq!(brute_sat(&php, &VarOrder::default()).unwrap(), None);
    }

    #[test]
    fn cap_is_enforced() {
        let wide: Cnf = (1..=30).map(|v| Clause::unit(Lit::Pos(v))).collect();
        assert!(matches!(
            brute_sat(&wide, &VarOrder::default()),
            Err(OracleError::CapExceeded { .. })
        ));
    }

    #[test]
    fn equisat() {
        let a = cnf(&[&[1]]);
        assert!(equisatisfiable(&a, &a).unwrap());
        assert!(!equisatisfiable(&a, &cnf(&[&[1], &[-1]])).unwrap());
    }

    #[test]
    fn lex_min() {
        let g = cnf(&[&[1, 2]]);
        let m = lex_min_model(&g, &VarOrder::natural([1, 2])).unwrap().unwrap();
        assert_eq!(m, Assignment::from_pairs([(1, false), (2, true)]));
        let top = Cnf::new();
        let m = lex_min_model(&top, &VarOrder::natural([1])).unwrap().unwrap();
        assert_eq!(m, Assignment::from_pairs([(1, false)]));
        assert!(lex_min_model(&cnf(&[&[1], &[-1]]), &VarOrder::natural([1])).unwrap().is_none());
    }

    #[test]
    fn lex_min_is_least() {
        let g = cnf(&[&[1, 2, 3], &[-1, -3], &[2, -3]]);
        let order = VarOrder::new(vec![3, 1, 2]).unwrap();
        let best = lex_min_model(&g, &order).unwrap().unwrap();
        let space = Space::new(order.vars(), [], 24).unwrap();
        for b in models(&g, &space) {
            assert!(lex_le(&best, &space.assignment(b), &order));
        }
    }

    #[test]
    fn descent_swaps_once() {
        let g = cnf(&[&[1, 2], &[-1, -2]]);
        let order = VarOrder::natural([1, 2]);
        let alpha = Assignment::from_pairs([(1, true), (2, false)]);
        let beta = local_min_descent(&g, &Substitution::swap(1, 2), &alpha, &order).unwrap();
        assert_eq!(beta, Assignment::from_pairs([(1, false), (2, true)]));
        let again = local_min_descent(&g, &Substitution::swap(1, 2), &beta, &order).unwrap();
        assert_eq!(again, beta);
    }

    #[test]
    fn duplicate_order_rejected() {
        assert!(VarOrder::new(vec![1, 1]).is_err());
    }
}
