//! Extended resolution: derivations, their checker, extension blocks and a
//! builder used by every transformer that emits ER steps.

pub mod circuit;
pub mod search;
mod transform;

use std::collections::{BTreeSet, HashMap, HashSet};
use std::fmt;

use crate::syntax::{Assignment, Clause, Cnf, Lit, Var};
use crate::Rejection;

pub use transform::{
    compose_er, concat_er, hoist_extensions, pull_conclusions, refutation_to_derivation, TransformError,
};
pub(crate) use transform::refutation_into;

/// An extension axiom defining `y`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtAxiom {
    /// y ↔ u ∧ v
    And { y: Var, u: Lit, v: Lit },
    /// y ↔ u
    Alias { y: Var, u: Lit },
    /// y ↔ value
    Const { y: Var, value: bool },
}

impl ExtAxiom {
    pub fn defined(&self) -> Var {
        match *self {
            ExtAxiom::And { y, .. } | ExtAxiom::Alias { y, .. } | ExtAxiom::Const { y, .. } => y,
        }
    }

    pub fn inputs(&self) -> Vec<Lit> {
        match *self {
            ExtAxiom::And { u, v, .. } => vec![u, v],
            ExtAxiom::Alias { u, .. } => vec![u],
            ExtAxiom::Const { .. } => vec![],
        }
    }

    /// The clauses the axiom contributes, in a fixed order.
    pub fn clauses(&self) -> Vec<Clause> {
        match *self {
            ExtAxiom::And { y, u, v } => {
                let y = Lit::Pos(y);
                vec![
                    Clause::new([!u, !v, y]),
                    Clause::new([!y, u]),
                    Clause::new([!y, v]),
                ]
            }
            ExtAxiom::Alias { y, u } => {
                let y = Lit::Pos(y);
                vec![Clause::new([!u, y]), Clause::new([!y, u])]
            }
            ExtAxiom::Const { y, value } => vec![Clause::unit(Lit::new(y, value))],
        }
    }

    /// Value of `y` given the values of the inputs.
    pub fn eval(&self, value: impl Fn(Var) -> bool) -> bool {
        match *self {
            ExtAxiom::And { u, v, .. } => u.eval(&value) && v.eval(&value),
            ExtAxiom::Alias { u, .. } => u.eval(&value),
            ExtAxiom::Const { value: b, .. } => b,
        }
    }

    pub fn rename(&self, f: impl Fn(Var) -> Var) -> ExtAxiom {
        let rl = |l: Lit| rename_lit(l, &f);
        match *self {
            ExtAxiom::And { y, u, v } => ExtAxiom::And { y: f(y), u: rl(u), v: rl(v) },
            ExtAxiom::Alias { y, u } => ExtAxiom::Alias { y: f(y), u: rl(u) },
            ExtAxiom::Const { y, value } => ExtAxiom::Const { y: f(y), value },
        }
    }
}

impl fmt::Display for ExtAxiom {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtAxiom::And { y, u, v } => write!(f, "x{y} ↔ {u} ∧ {v}"),
            ExtAxiom::Alias { y, u } => write!(f, "x{y} ↔ {u}"),
            ExtAxiom::Const { y, value } => write!(f, "x{y} ↔ {}", u8::from(*value)),
        }
    }
}

pub(crate) fn rename_lit(l: Lit, f: impl Fn(Var) -> Var) -> Lit {
    match l {
        Lit::Pos(v) => Lit::Pos(f(v)),
        Lit::Neg(v) => Lit::Neg(f(v)),
        c => c,
    }
}

pub(crate) fn rename_clause(c: &Clause, f: impl Fn(Var) -> Var) -> Clause {
    Clause::new(c.iter().map(|l| rename_lit(l, &f)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ErStep {
    /// Copies premise number `i`.
    Premise(usize),
    /// Resolves clause `a` (containing `pivot`) with clause `b` (containing ¬pivot).
    Resolve { a: usize, b: usize, pivot: Lit, result: Clause },
    Weaken { from: usize, result: Clause },
    DropZero { from: usize, result: Clause },
    Extend(ExtAxiom),
}

impl ErStep {
    /// Number of clauses the step appends to the clause sequence.
    pub fn width(&self) -> usize {
        match self {
            ErStep::Extend(ax) => ax.clauses().len(),
            _ => 1,
        }
    }
}

/// An ER derivation. Step references (`a`, `b`, `from`) index the sequence
/// of clauses produced so far, counting every clause an extension step adds.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ErDerivation {
    pub premises: Cnf,
    pub protected: BTreeSet<Var>,
    pub steps: Vec<ErStep>,
    pub conclusions: Cnf,
}

impl ErDerivation {
    pub fn has_extensions(&self) -> bool {
        self.steps.iter().any(|s| matches!(s, ErStep::Extend(_)))
    }

    pub fn extension_axioms(&self) -> impl Iterator<Item = &ExtAxiom> + '_ {
        self.steps.iter().filter_map(|s| match s {
            ErStep::Extend(ax) => Some(ax),
            _ => None,
        })
    }

    /// Largest variable mentioned anywhere.
    pub fn max_var(&self) -> Var {
        let mut m = self.premises.max_var().max(self.conclusions.max_var());
        m = m.max(self.protected.iter().copied().max().unwrap_or(0));
        for s in &self.steps {
            let v = match s {
                ErStep::Premise(_) => 0,
                ErStep::Resolve { result, pivot, .. } => {
                    result.vars().max().unwrap_or(0).max(pivot.var().unwrap_or(0))
                }
                ErStep::Weaken { result, .. } | ErStep::DropZero { result, .. } => {
                    result.vars().max().unwrap_or(0)
                }
                ErStep::Extend(ax) => ax
                    .inputs()
                    .iter()
                    .filter_map(|l| l.var())
                    .chain([ax.defined()])
                    .max()
                    .unwrap_or(0),
            };
            m = m.max(v);
        }
        m
    }

    /// Total number of clauses produced by the steps.
    pub fn clause_count(&self) -> usize {
        self.steps.iter().map(|s| s.width()).sum()
    }
}

/// What a successful check produces.
#[derive(Clone, Debug)]
pub struct ErTrace {
    pub clauses: Vec<Clause>,
    pub extension_vars: Vec<Var>,
}

fn reject(step: usize, reason: impl Into<String>) -> Rejection {
    Rejection::at(step, reason)
}

/// Checks every step and that each conclusion was derived.
pub fn check_er(pi: &ErDerivation) -> Result<ErTrace, Rejection> {
    let mut seen: HashSet<Var> = pi.premises.vars().into_iter().collect();
    seen.extend(pi.protected.iter().copied());
    let mut clauses: Vec<Clause> = Vec::with_capacity(pi.clause_count());
    let mut extension_vars = Vec::new();
    for (i, step) in pi.steps.iter().enumerate() {
        let get = |k: usize| -> Result<&Clause, Rejection> {
            clauses
                .get(k)
                .ok_or_else(|| reject(i, format!("reference {k} is not an earlier clause")))
        };
        let produced: Vec<Clause> = match step {
            ErStep::Premise(k) => {
                let c = pi
                    .premises
                    .get(*k)
                    .ok_or_else(|| reject(i, format!("no premise {k}")))?;
                vec![c.clone()]
            }
            ErStep::Resolve { a, b, pivot, result } => {
                if pivot.is_const() {
                    return Err(reject(i, "pivot must be a variable literal"));
                }
                let (ca, cb) = (get(*a)?, get(*b)?);
                if !ca.contains(*pivot) {
                    return Err(reject(i, format!("clause {a} does not contain pivot {pivot}")));
                }
                if !cb.contains(pivot.negate()) {
                    return Err(reject(i, format!("clause {b} does not contain {}", pivot.negate())));
                }
                let expected = Clause::new(
                    ca.iter()
                        .filter(|&l| l != *pivot)
                        .chain(cb.iter().filter(|&l| l != pivot.negate())),
                );
                if expected != *result {
                    return Err(reject(i, format!("resolvent is {expected}, not {result}")));
                }
                vec![result.clone()]
            }
            ErStep::Weaken { from, result } => {
                let c = get(*from)?;
                if !c.is_subset(result) {
                    return Err(reject(i, "weakening must contain the source clause"));
                }
                if let Some(v) = result.vars().find(|v| !seen.contains(v)) {
                    return Err(reject(i, format!("weakening introduces the new variable x{v}")));
                }
                vec![result.clone()]
            }
            ErStep::DropZero { from, result } => {
                let c = get(*from)?;
                if !c.contains(Lit::False) {
                    return Err(reject(i, "source clause has no constant 0"));
                }
                if c.without(Lit::False) != *result {
                    return Err(reject(i, "result must be the source without 0"));
                }
                vec![result.clone()]
            }
            ErStep::Extend(ax) => {
                let y = ax.defined();
                if y == 0 {
                    return Err(reject(i, "variable ids are positive"));
                }
                if seen.contains(&y) {
                    return Err(reject(i, format!("extension variable x{y} is not fresh")));
                }
                for l in ax.inputs() {
                    if let Some(v) = l.var() {
                        if !seen.contains(&v) {
                            return Err(reject(i, format!("extension input x{v} has not appeared")));
                        }
                    }
                }
                extension_vars.push(y);
                ax.clauses()
            }
        };
        for c in &produced {
            seen.extend(c.vars());
        }
        clauses.extend(produced);
    }
    let derived: HashSet<&Clause> = clauses.iter().collect();
    for c in &pi.conclusions {
        if !derived.contains(c) {
            return Err(Rejection::global(format!("conclusion {c} is never derived")));
        }
    }
    Ok(ErTrace {
        clauses,
        extension_vars,
    })
}

/// An ordered block of extension axioms over base variables.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ExtensionBlock {
    pub base: BTreeSet<Var>,
    pub axioms: Vec<ExtAxiom>,
}

impl ExtensionBlock {
    /// Validates that each axiom defines a new variable from earlier ones.
    pub fn new(base: BTreeSet<Var>, axioms: Vec<ExtAxiom>) -> Result<ExtensionBlock, String> {
        let block = ExtensionBlock { base, axioms };
        block.validate()?;
        Ok(block)
    }

    pub fn validate(&self) -> Result<(), String> {
        let mut known: HashSet<Var> = self.base.iter().copied().collect();
        for ax in &self.axioms {
            for l in ax.inputs() {
                if let Some(v) = l.var() {
                    if !known.contains(&v) {
                        return Err(format!("axiom {ax} uses x{v} before it is defined"));
                    }
                }
            }
            if !known.insert(ax.defined()) {
                return Err(format!("axiom {ax} redefines x{}", ax.defined()));
            }
        }
        Ok(())
    }

    pub fn defined(&self) -> Vec<Var> {
        self.axioms.iter().map(|a| a.defined()).collect()
    }

    pub fn clauses(&self) -> Vec<Clause> {
        self.axioms.iter().flat_map(|a| a.clauses()).collect()
    }

    pub fn cnf(&self) -> Cnf {
        self.clauses().into_iter().collect()
    }

    pub fn is_empty(&self) -> bool {
        self.axioms.is_empty()
    }

    /// Extends an assignment of the base variables by the defined ones.
    pub fn extend_assignment(&self, base: &Assignment) -> Assignment {
        let mut out = base.clone();
        for ax in &self.axioms {
            let b = ax.eval(|v| out.value(v));
            out.set(ax.defined(), b);
        }
        out
    }
}

/// Incremental construction of an ER derivation. Every method appends steps
/// and returns clause positions; results are computed, not supplied.
#[derive(Clone, Debug)]
pub struct ErBuilder {
    premises: Cnf,
    protected: BTreeSet<Var>,
    steps: Vec<ErStep>,
    clauses: Vec<Clause>,
    position: HashMap<Clause, usize>,
}

impl ErBuilder {
    pub fn new(premises: Cnf, protected: BTreeSet<Var>) -> ErBuilder {
        ErBuilder {
            premises,
            protected,
            steps: Vec::new(),
            clauses: Vec::new(),
            position: HashMap::new(),
        }
    }

    pub fn premises(&self) -> &Cnf {
        &self.premises
    }

    pub fn protect(&mut self, v: Var) {
        self.protected.insert(v);
    }

    pub fn clause(&self, pos: usize) -> &Clause {
        &self.clauses[pos]
    }

    pub fn len(&self) -> usize {
        self.clauses.len()
    }

    pub fn is_empty(&self) -> bool {
        self.clauses.is_empty()
    }

    pub fn step_count(&self) -> usize {
        self.steps.len()
    }

    fn push(&mut self, step: ErStep, produced: Vec<Clause>) -> usize {
        let first = self.clauses.len();
        for c in produced {
            self.position.entry(c.clone()).or_insert(self.clauses.len());
            self.clauses.push(c);
        }
        self.steps.push(step);
        first
    }

    /// Position of `c`, copying it from the premises if needed.
    pub fn find(&mut self, c: &Clause) -> Option<usize> {
        if let Some(&p) = self.position.get(c) {
            return Some(p);
        }
        let i = self.premises.index_of(c)?;
        Some(self.premise(i))
    }

    pub fn lookup(&self, c: &Clause) -> Option<usize> {
        self.position.get(c).copied()
    }

    pub fn premise(&mut self, i: usize) -> usize {
        let c = self.premises.get(i).expect("premise index").clone();
        self.push(ErStep::Premise(i), vec![c])
    }

    pub fn resolve(&mut self, a: usize, b: usize, pivot: Lit) -> usize {
        let result = Clause::new(
            self.clauses[a]
                .iter()
                .filter(|&l| l != pivot)
                .chain(self.clauses[b].iter().filter(|&l| l != pivot.negate())),
        );
        self.push(
            ErStep::Resolve {
                a,
                b,
                pivot,
                result: result.clone(),
            },
            vec![result],
        )
    }

    /// Resolves on `v`, whichever clause holds the positive literal.
    pub fn resolve_on(&mut self, a: usize, b: usize, v: Var) -> usize {
        if self.clauses[a].contains(Lit::Pos(v)) {
            self.resolve(a, b, Lit::Pos(v))
        } else {
            self.resolve(b, a, Lit::Pos(v))
        }
    }

    pub fn weaken(&mut self, from: usize, result: Clause) -> usize {
        self.push(
            ErStep::Weaken {
                from,
                result: result.clone(),
            },
            vec![result],
        )
    }

    /// Weakens unless the clause is already `result`.
    pub fn weaken_to(&mut self, from: usize, result: Clause) -> usize {
        if self.clauses[from] == result {
            from
        } else {
            self.weaken(from, result)
        }
    }

    pub fn drop_zero(&mut self, from: usize) -> usize {
        let result = self.clauses[from].without(Lit::False);
        self.push(
            ErStep::DropZero {
                from,
                result: result.clone(),
            },
            vec![result],
        )
    }

    /// Returns the position of the first clause the axiom adds.
    pub fn extend(&mut self, ax: ExtAxiom) -> usize {
        self.push(ErStep::Extend(ax), ax.clauses())
    }

    pub fn finish(self, conclusions: Cnf) -> ErDerivation {
        ErDerivation {
            premises: self.premises,
            protected: self.protected,
            steps: self.steps,
            conclusions,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cnf(cs: &[&[i64]]) -> Cnf {
        cs.iter().map(|c| Clause::from_dimacs(c)).collect()
    }

    #[test]
    fn trivial_refutation() {
        let pi = ErDerivation {
            premises: cnf(&[&[1], &[-1]]),
            protected: BTreeSet::new(),
            steps: vec![
                ErStep::Premise(0),
                ErStep::Premise(1),
                ErStep::Resolve {
                    a: 0,
                    b: 1,
                    pivot: Lit::Pos(1),
                    result: Clause::empty(),
                },
            ],
            conclusions: cnf(&[&[]]),
        };
        assert!(check_er(&pi).is_ok());
    }

    #[test]
    fn weakening_cannot_introduce_variables() {
        let pi = ErDerivation {
            premises: cnf(&[&[1]]),
            protected: BTreeSet::new(),
            steps: vec![
                ErStep::Premise(0),
                ErStep::Weaken {
                    from: 0,
                    result: Clause::from_dimacs(&[1, 2]),
                },
            ],
            conclusions: Cnf::new(),
        };
        let err = check_er(&pi).unwrap_err();
        assert_eq!(err.step, Some(1));
    }

    #[test]
    fn extension_must_be_fresh() {
        let pi = ErDerivation {
            premises: cnf(&[&[1, 2]]),
            protected: BTreeSet::new(),
            steps: vec![ErStep::Extend(ExtAxiom::And {
                y: 1,
                u: Lit::Pos(2),
                v: Lit::Pos(2),
            })],
            conclusions: Cnf::new(),
        };
        assert!(check_er(&pi).is_err());
        let protected = ErDerivation {
            premises: cnf(&[&[1]]),
            protected: BTreeSet::from([5]),
            steps: vec![ErStep::Extend(ExtAxiom::Const { y: 5, value: true })],
            conclusions: Cnf::new(),
        };
        assert!(check_er(&protected).is_err());
    }

    #[test]
    fn drop_zero_and_constants() {
        let pi = ErDerivation {
            premises: cnf(&[&[1]]),
            protected: BTreeSet::new(),
            steps: vec![
                ErStep::Premise(0),
                ErStep::Weaken {
                    from: 0,
                    result: Clause::new([Lit::Pos(1), Lit::False]),
                },
                ErStep::DropZero {
                    from: 1,
                    result: Clause::unit(Lit::Pos(1)),
                },
                ErStep::Extend(ExtAxiom::And {
                    y: 2,
                    u: Lit::True,
                    v: Lit::Neg(1),
                }),
            ],
            conclusions: cnf(&[&[1]]),
        };
        let trace = check_er(&pi).unwrap();
        assert_eq!(trace.clauses.len(), 6);
        assert_eq!(trace.extension_vars, vec![2]);
    }

    #[test]
    fn resolve_checks_result() {
        let mut pi = ErDerivation {
            premises: cnf(&[&[1, 2], &[-1, 2]]),
            protected: BTreeSet::new(),
            steps: vec![
                ErStep::Premise(0),
                ErStep::Premise(1),
                ErStep::Resolve {
                    a: 0,
                    b: 1,
                    pivot: Lit::Pos(1),
                    result: Clause::from_dimacs(&[2]),
                },
            ],
            conclusions: cnf(&[&[2]]),
        };
        assert!(check_er(&pi).is_ok());
        pi.steps[2] = ErStep::Resolve {
            a: 0,
            b: 1,
            pivot: Lit::Pos(1),
            result: Clause::from_dimacs(&[2, 1]),
        };
        assert!(check_er(&pi).is_err());
    }

    #[test]
    fn missing_conclusion_rejected() {
        let pi = ErDerivation {
            premises: cnf(&[&[1]]),
            protected: BTreeSet::new(),
            steps: vec![ErStep::Premise(0)],
            conclusions: cnf(&[&[]]),
        };
        assert_eq!(check_er(&pi).unwrap_err().step, None);
    }

    #[test]
    fn block_validation() {
        let ok = ExtensionBlock::new(
            BTreeSet::from([1, 2]),
            vec![
                ExtAxiom::And { y: 3, u: Lit::Pos(1), v: Lit::Neg(2) },
                ExtAxiom::Alias { y: 4, u: Lit::Neg(3) },
            ],
        );
        assert!(ok.is_ok());
        let bad = ExtensionBlock::new(
            BTreeSet::from([1]),
            vec![ExtAxiom::Alias { y: 4, u: Lit::Neg(3) }],
        );
        assert!(bad.is_err());
        let block = ok.unwrap();
        let ext = block.extend_assignment(&Assignment::from_pairs([(1, true), (2, false)]));
        assert_eq!(ext.get(3), Some(true));
        assert_eq!(ext.get(4), Some(false));
    }
}
