//! Tree-like resolution by case splitting. Used to derive small local
//! consequences (equivalences between renamed extension variables) and, in
//! tests, to produce refutations of small formulas.

use std::collections::HashMap;

use super::ErBuilder;
use crate::syntax::{Clause, Lit, Var};

struct Search<'a> {
    b: &'a mut ErBuilder,
    clauses: Vec<usize>,
    occurs: HashMap<Lit, Vec<usize>>,
    value: HashMap<Var, bool>,
    reason: HashMap<Var, Option<usize>>,
    trail_pos: HashMap<Var, usize>,
    trail: Vec<Lit>,
    budget: usize,
}

enum Outcome {
    Conflict(usize),
    Sat,
    OutOfBudget,
}

impl<'a> Search<'a> {
    fn lit_value(&self, l: Lit) -> Option<bool> {
        match l {
            Lit::True => Some(true),
            Lit::False => Some(false),
            Lit::Pos(v) => self.value.get(&v).copied(),
            Lit::Neg(v) => self.value.get(&v).map(|b| !b),
        }
    }

    fn assign(&mut self, l: Lit, reason: Option<usize>) {
        let v = l.var().expect("variable literal");
        self.value.insert(v, l.is_positive());
        self.reason.insert(v, reason);
        self.trail_pos.insert(v, self.trail.len());
        self.trail.push(l);
    }

    fn undo(&mut self, len: usize) {
        while self.trail.len() > len {
            let l = self.trail.pop().unwrap();
            let v = l.var().unwrap();
            self.value.remove(&v);
            self.reason.remove(&v);
            self.trail_pos.remove(&v);
        }
    }

    /// None: satisfied or undetermined; Some(None): conflict; Some(Some(l)): unit on l.
    fn status(&self, pos: usize) -> Option<Option<Lit>> {
        let mut unit = None;
        let mut open = 0;
        for l in self.b.clause(pos).iter() {
            match self.lit_value(l) {
                Some(true) => return None,
                Some(false) => {}
                None => {
                    open += 1;
                    unit = Some(l);
                }
            }
        }
        match open {
            0 => Some(None),
            1 => Some(unit),
            _ => None,
        }
    }

    fn propagate_from(&mut self, mut head: usize, full: bool) -> Option<usize> {
        if full {
            for k in 0..self.clauses.len() {
                let pos = self.clauses[k];
                match self.status(pos) {
                    Some(None) => return Some(pos),
                    Some(Some(l)) => self.assign(l, Some(pos)),
                    None => {}
                }
            }
        }
        while head < self.trail.len() {
            let falsified = self.trail[head].negate();
            head += 1;
            let watch = self.occurs.get(&falsified).cloned().unwrap_or_default();
            for pos in watch {
                match self.status(pos) {
                    Some(None) => return Some(pos),
                    Some(Some(l)) => self.assign(l, Some(pos)),
                    None => {}
                }
            }
        }
        None
    }

    /// Resolves the conflict clause against reasons until only decision
    /// literals remain.
    fn analyze(&mut self, mut k: usize) -> usize {
        loop {
            let latest = self
                .b
                .clause(k)
                .iter()
                .filter_map(|l| l.var())
                .filter(|v| matches!(self.reason.get(v), Some(Some(_))))
                .max_by_key(|v| self.trail_pos[v]);
            match latest {
                None => return k,
                Some(v) => {
                    let r = self.reason[&v].unwrap();
                    k = self.b.resolve_on(k, r, v);
                }
            }
        }
    }

    fn choose(&self) -> Option<Lit> {
        let mut best: Option<(usize, Lit)> = None;
        for &pos in &self.clauses {
            let mut open = 0;
            let mut first = None;
            let mut sat = false;
            for l in self.b.clause(pos).iter() {
                match self.lit_value(l) {
                    Some(true) => {
                        sat = true;
                        break;
                    }
                    Some(false) => {}
                    None => {
                        open += 1;
                        first.get_or_insert(l);
                    }
                }
            }
            if sat || open == 0 {
                continue;
            }
            if best.is_none_or(|(n, _)| open < n) {
                best = Some((open, first.unwrap()));
                if open == 2 {
                    break;
                }
            }
        }
        best.map(|(_, l)| l)
    }

    fn solve(&mut self, head: usize, full: bool) -> Outcome {
        if self.budget == 0 {
            return Outcome::OutOfBudget;
        }
        self.budget -= 1;
        if let Some(conflict) = self.propagate_from(head, full) {
            return Outcome::Conflict(self.analyze(conflict));
        }
        let Some(branch) = self.choose() else {
            return Outcome::Sat;
        };
        let mark = self.trail.len();
        let mut learned = Vec::new();
        for l in [branch.negate(), branch] {
            self.assign(l, None);
            let out = self.solve(mark, false);
            self.undo(mark);
            match out {
                Outcome::Conflict(k) => {
                    if !self.b.clause(k).contains(l.negate()) {
                        return Outcome::Conflict(k);
                    }
                    learned.push(k);
                }
                other => return other,
            }
        }
        let v = branch.var().unwrap();
        Outcome::Conflict(self.b.resolve_on(learned[0], learned[1], v))
    }
}

/// Derives `target` by resolution from the clauses at `available`.
/// Returns None when the target does not follow or the node budget runs out.
pub fn derive_clause(b: &mut ErBuilder, available: &[usize], target: &Clause, budget: usize) -> Option<usize> {
    for &p in available {
        if b.clause(p).is_subset(target) {
            return Some(b.weaken_to(p, target.clone()));
        }
    }
    if target.is_tautologous() {
        return None;
    }
    let mut clauses = Vec::new();
    for &p in available {
        let c = b.clause(p);
        if c.is_tautologous() {
            continue;
        }
        let p = if c.contains(Lit::False) { b.drop_zero(p) } else { p };
        clauses.push(p);
    }
    let mut occurs: HashMap<Lit, Vec<usize>> = HashMap::new();
    for &p in &clauses {
        for l in b.clause(p).iter() {
            occurs.entry(l).or_default().push(p);
        }
    }
    let mut s = Search {
        b,
        clauses,
        occurs,
        value: HashMap::new(),
        reason: HashMap::new(),
        trail_pos: HashMap::new(),
        trail: Vec::new(),
        budget,
    };
    for l in target.iter().filter(|l| !l.is_const()) {
        s.assign(l.negate(), None);
    }
    match s.solve(0, true) {
        Outcome::Conflict(k) => Some(s.b.weaken_to(k, target.clone())),
        _ => None,
    }
}

/// Derives the empty clause from the clauses at `available`.
pub fn refute(b: &mut ErBuilder, available: &[usize], budget: usize) -> Option<usize> {
    derive_clause(b, available, &Clause::empty(), budget)
}
