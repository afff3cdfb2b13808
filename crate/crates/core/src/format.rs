//! Text formats. Everything is line oriented; a line whose first token is `c`
//! or starts with `*` is a comment.
//!
//! * CNF: DIMACS, with `t`/`f` for the constants inside clauses.
//! * PB: `+2 x1 -1 ~x3 >= 1 ;`, one constraint per line.
//! * Substitutions: `x1 -> ~x2`, one variable per line; `0` and `1` are the constants.
//! * ER: a `begin er` block of `premise`, `protect`, step and `conclude` lines.
//! * CP: a `begin cp` block of `hyp`, step and `goal` lines.
//! * ER-PLS: `begin erpls` with `input` clauses, nested `er` and `domrule` blocks.
//! * Dominance: `begin dom` with `mode`, `input` constraints and one block per rule.
//! * Lex-leader refutations: `begin q` with `input` clauses, an `order`, one
//!   `symmetry` block per symmetry and a final `er` block.
//!
//! Printing is canonical: parsing printed output gives back the same object.

use std::collections::BTreeSet;
use std::fmt::Write;
use std::str::FromStr;

use num_bigint::BigInt;
use thiserror::Error;

use crate::cp::{CpDerivation, CpStep, CpWitness};
use crate::dominance::{CoreRemoval, DomProof, DomStep, GeneralOrder, Mode, OrderSpec, Removal};
use crate::er::{ErDerivation, ErStep, ExtAxiom, ExtensionBlock};
use crate::erpls::{DomRule, ErplsProof, ErplsStep};
use crate::oracle::VarOrder;
use crate::pb::{LinearSum, PbConstraint, PbFormula};
use crate::symmetry::{lex_leader, QRefutation};
use crate::syntax::{Assignment, Clause, Cnf, Lit, Substitution, Var, VarAlloc};

#[derive(Clone, Debug, PartialEq, Eq, Error)]
#[error("line {line}, column {col}: {msg}")]
pub struct ParseError {
    pub line: usize,
    pub col: usize,
    pub msg: String,
}

type Result<T> = std::result::Result<T, ParseError>;

#[derive(Clone, Copy, Debug)]
struct Tok<'a> {
    s: &'a str,
    line: usize,
    col: usize,
}

impl Tok<'_> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(ParseError {
            line: self.line,
            col: self.col,
            msg: msg.into(),
        })
    }
}

/// The tokens of one nonblank, noncomment line.
struct Fields<'a> {
    toks: Vec<Tok<'a>>,
    pos: usize,
    line: usize,
    end: usize,
}

impl<'a> Fields<'a> {
    fn line_err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(ParseError {
            line: self.line,
            col: self.end,
            msg: msg.into(),
        })
    }

    fn peek(&self) -> Option<Tok<'a>> {
        self.toks.get(self.pos).copied()
    }

    fn is_done(&self) -> bool {
        self.pos == self.toks.len()
    }

    fn next(&mut self, what: &str) -> Result<Tok<'a>> {
        match self.peek() {
            Some(t) => {
                self.pos += 1;
                Ok(t)
            }
            None => self.line_err(format!("expected {what}")),
        }
    }

    fn done(&self) -> Result<()> {
        match self.peek() {
            Some(t) => t.err(format!("unexpected `{}`", t.s)),
            None => Ok(()),
        }
    }

    fn number<T: FromStr>(&mut self, what: &str) -> Result<T> {
        let t = self.next(what)?;
        let s = t.s.strip_prefix('+').unwrap_or(t.s);
        s.parse().or_else(|_| t.err(format!("expected {what}, found `{}`", t.s)))
    }

    fn var(&mut self) -> Result<Var> {
        let t = self.next("a variable")?;
        match t.s.parse::<Var>() {
            Ok(v) if v > 0 => Ok(v),
            _ => t.err(format!("expected a variable, found `{}`", t.s)),
        }
    }

    /// Variables up to a terminating 0.
    fn vars0(&mut self) -> Result<Vec<Var>> {
        let mut out = Vec::new();
        loop {
            let t = self.next("a variable or 0")?;
            match t.s.parse::<Var>() {
                Ok(0) => return Ok(out),
                Ok(v) => out.push(v),
                _ => return t.err(format!("expected a variable, found `{}`", t.s)),
            }
        }
    }

    fn dimacs_lit(&mut self) -> Result<Lit> {
        let t = self.next("a literal")?;
        dimacs_lit(t)?.map_or_else(|| t.err("0 is not a literal here"), Ok)
    }

    /// Literals up to a terminating 0.
    fn clause0(&mut self) -> Result<Clause> {
        let mut lits = Vec::new();
        loop {
            let t = self.next("a literal or 0")?;
            match dimacs_lit(t)? {
                Some(l) => lits.push(l),
                None => return Ok(Clause::new(lits)),
            }
        }
    }

    fn named_lit(&mut self) -> Result<Lit> {
        let t = self.next("a literal")?;
        named_lit(t)
    }

    fn index(&mut self) -> Result<usize> {
        self.number("an index")
    }

    fn bigint(&mut self, what: &str) -> Result<BigInt> {
        self.number(what)
    }

    /// The rest of the line as one PB constraint.
    fn constraint(&mut self) -> Result<PbConstraint> {
        let mut sum = LinearSum::new();
        loop {
            let t = self.next("a term or a relation")?;
            match t.s {
                ">=" | "<=" => {
                    let bound = self.bigint("a bound")?;
                    let semi = self.next("`;`")?;
                    if semi.s != ";" {
                        return semi.err(format!("expected `;`, found `{}`", semi.s));
                    }
                    return Ok(if t.s == ">=" { sum.ge(bound) } else { sum.le(bound) });
                }
                _ => {
                    let s = t.s.strip_prefix('+').unwrap_or(t.s);
                    let Ok(c) = s.parse::<BigInt>() else {
                        return t.err(format!("expected a coefficient, found `{}`", t.s));
                    };
                    let l = self.named_lit()?;
                    if l.is_const() {
                        return t.err("constants cannot appear in a PB term");
                    }
                    sum.add_lit(c, l);
                }
            }
        }
    }

    /// `x<v> -> <lit>`, from the start of the line.
    fn mapping(&mut self) -> Result<(Var, Lit)> {
        let t = self.next("a variable")?;
        let Lit::Pos(v) = named_lit(t)? else {
            return t.err(format!("expected x<id>, found `{}`", t.s));
        };
        let arrow = self.next("`->`")?;
        if arrow.s != "->" {
            return arrow.err(format!("expected `->`, found `{}`", arrow.s));
        }
        Ok((v, self.named_lit()?))
    }
}

fn dimacs_lit(t: Tok) -> Result<Option<Lit>> {
    match t.s {
        "t" => Ok(Some(Lit::True)),
        "f" => Ok(Some(Lit::False)),
        s => match s.parse::<i64>() {
            Ok(n) if n.unsigned_abs() <= Var::MAX as u64 => Ok(Lit::from_dimacs(n)),
            _ => t.err(format!("expected a literal, found `{s}`")),
        },
    }
}

fn named_lit(t: Tok) -> Result<Lit> {
    let (neg, rest) = match t.s.strip_prefix('~') {
        Some(r) => (true, r),
        None => (false, t.s),
    };
    match (neg, rest) {
        (false, "0") => return Ok(Lit::False),
        (false, "1") => return Ok(Lit::True),
        _ => {}
    }
    match rest.strip_prefix('x').map(|d| d.parse::<Var>()) {
        Some(Ok(v)) if v > 0 => Ok(Lit::new(v, !neg)),
        _ => t.err(format!("expected x<id>, ~x<id>, 0 or 1, found `{}`", t.s)),
    }
}

struct Src<'a> {
    lines: Vec<Fields<'a>>,
    pos: usize,
    last: usize,
}

impl<'a> Src<'a> {
    fn new(text: &'a str) -> Src<'a> {
        let mut lines = Vec::new();
        let mut last = 0;
        for (i, raw) in text.lines().enumerate() {
            last = i + 1;
            let mut toks = Vec::new();
            let mut start = None;
            for (j, ch) in raw.char_indices().chain(std::iter::once((raw.len(), ' '))) {
                match (ch.is_whitespace(), start) {
                    (false, None) => start = Some(j),
                    (true, Some(s)) => {
                        toks.push(Tok {
                            s: &raw[s..j],
                            line: i + 1,
                            col: raw[..s].chars().count() + 1,
                        });
                        start = None;
                    }
                    _ => {}
                }
            }
            let comment = toks.first().is_some_and(|t| t.s == "c" || t.s.starts_with('*'));
            if toks.is_empty() || comment {
                continue;
            }
            lines.push(Fields {
                toks,
                pos: 0,
                line: i + 1,
                end: raw.chars().count() + 1,
            });
        }
        Src { lines, pos: 0, last }
    }

    fn eof_err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(ParseError {
            line: self.last.max(1),
            col: 1,
            msg: msg.into(),
        })
    }

    fn peek_word(&self) -> Option<&'a str> {
        self.lines.get(self.pos).map(|l| l.toks[0].s)
    }

    fn next_line(&mut self, what: &str) -> Result<Fields<'a>> {
        if self.pos == self.lines.len() {
            return self.eof_err(format!("unexpected end of input, expected {what}"));
        }
        let l = std::mem::replace(
            &mut self.lines[self.pos],
            Fields {
                toks: Vec::new(),
                pos: 0,
                line: 0,
                end: 0,
            },
        );
        self.pos += 1;
        Ok(l)
    }

    fn expect_end_of_input(&self) -> Result<()> {
        match self.lines.get(self.pos) {
            Some(l) => l.toks[0].err(format!("unexpected `{}` after the end", l.toks[0].s)),
            None => Ok(()),
        }
    }

    /// Consumes `begin <kind>`.
    fn begin(&mut self, kind: &str) -> Result<()> {
        let mut l = self.next_line(&format!("`begin {kind}`"))?;
        let t = l.next("begin")?;
        if t.s != "begin" {
            return t.err(format!("expected `begin {kind}`, found `{}`", t.s));
        }
        let k = l.next(kind)?;
        if k.s != kind {
            return k.err(format!("expected `begin {kind}`, found `begin {}`", k.s));
        }
        l.done()
    }

    /// The kind of the `begin` line coming up, if any.
    fn peek_begin(&self) -> Option<&'a str> {
        let l = self.lines.get(self.pos)?;
        (l.toks[0].s == "begin").then(|| l.toks.get(1).map_or("", |t| t.s))
    }

    fn at_end(&self) -> bool {
        self.peek_word() == Some("end")
    }

    fn end(&mut self) -> Result<()> {
        let mut l = self.next_line("`end`")?;
        let t = l.next("end")?;
        if t.s != "end" {
            return t.err(format!("expected `end`, found `{}`", t.s));
        }
        l.done()
    }
}

fn clause_text(c: &Clause) -> String {
    let mut s = String::new();
    for l in c.iter() {
        match l {
            Lit::True => s.push_str("t "),
            Lit::False => s.push_str("f "),
            _ => write!(s, "{} ", l.to_dimacs().unwrap()).unwrap(),
        }
    }
    s.push('0');
    s
}

fn dimacs_lit_text(l: Lit) -> String {
    match l {
        Lit::True => "t".into(),
        Lit::False => "f".into(),
        _ => l.to_dimacs().unwrap().to_string(),
    }
}

fn vars_text(vs: impl IntoIterator<Item = Var>) -> String {
    let mut s = String::new();
    for v in vs {
        write!(s, "{v} ").unwrap();
    }
    s.push('0');
    s
}

pub fn constraint_text(c: &PbConstraint) -> String {
    format!("{c} ;").trim_start().to_string()
}

// CNF --------------------------------------------------------------------

/// DIMACS. The header is optional; when present its counts are checked
/// against the clauses read.
pub fn parse_cnf(text: &str) -> Result<Cnf> {
    let mut src = Src::new(text);
    let mut header: Option<(Tok, u64, usize)> = None;
    let mut clauses = Vec::new();
    let mut pending = Vec::new();
    let mut max_var = 0;
    while src.pos < src.lines.len() {
        let mut l = src.next_line("a clause")?;
        if l.peek().is_some_and(|t| t.s == "p") {
            let p = l.next("p")?;
            if header.is_some() || !clauses.is_empty() || !pending.is_empty() {
                return p.err("the header must come first");
            }
            let kind = l.next("cnf")?;
            if kind.s != "cnf" {
                return kind.err(format!("expected `cnf`, found `{}`", kind.s));
            }
            let n = l.number("a variable count")?;
            let m = l.number("a clause count")?;
            l.done()?;
            header = Some((p, n, m));
            continue;
        }
        while !l.is_done() {
            let t = l.next("a literal")?;
            match dimacs_lit(t)? {
                Some(lit) => {
                    max_var = max_var.max(lit.var().unwrap_or(0));
                    pending.push(lit);
                }
                None => clauses.push(Clause::new(std::mem::take(&mut pending))),
            }
        }
    }
    if !pending.is_empty() {
        return src.eof_err("the last clause is not terminated by 0");
    }
    if let Some((p, n, m)) = header {
        if (max_var as u64) > n {
            return p.err(format!("x{max_var} exceeds the declared {n} variables"));
        }
        if clauses.len() != m {
            return p.err(format!("{m} clauses declared, {} found", clauses.len()));
        }
    }
    Ok(clauses.into_iter().collect())
}

pub fn print_cnf(f: &Cnf) -> String {
    let mut s = format!("p cnf {} {}\n", f.max_var(), f.len());
    for c in f.iter() {
        writeln!(s, "{}", clause_text(c)).unwrap();
    }
    s
}

// PB ---------------------------------------------------------------------

pub fn parse_constraint(text: &str) -> Result<PbConstraint> {
    let f = parse_opb(text)?;
    match f.len() {
        1 => Ok(f.iter().next().unwrap().clone()),
        n => Err(ParseError {
            line: 1,
            col: 1,
            msg: format!("expected one constraint, found {n}"),
        }),
    }
}

pub fn parse_opb(text: &str) -> Result<PbFormula> {
    let mut src = Src::new(text);
    let mut out = PbFormula::new();
    while src.pos < src.lines.len() {
        let mut l = src.next_line("a constraint")?;
        out.push(l.constraint()?);
        l.done()?;
    }
    Ok(out)
}

pub fn print_opb(f: &PbFormula) -> String {
    f.iter().map(|c| constraint_text(c) + "\n").collect()
}

// Substitutions ----------------------------------------------------------

pub fn parse_subst(text: &str) -> Result<Substitution> {
    let mut src = Src::new(text);
    let mut out = Substitution::identity();
    let mut seen = BTreeSet::new();
    while src.pos < src.lines.len() {
        let mut l = src.next_line("a mapping")?;
        let first = l.peek().unwrap();
        let (v, image) = l.mapping()?;
        l.done()?;
        if !seen.insert(v) {
            return first.err(format!("x{v} is mapped twice"));
        }
        out.set(v, image);
    }
    Ok(out)
}

fn subst_lines(s: &mut String, omega: &Substitution) {
    for (v, l) in omega.entries() {
        writeln!(s, "x{v} -> {l}").unwrap();
    }
}

pub fn print_subst(omega: &Substitution) -> String {
    let mut s = String::new();
    subst_lines(&mut s, omega);
    s
}

/// Space-separated DIMACS literals, ended by 0.
pub fn print_assignment(a: &Assignment) -> String {
    let mut s = String::from("v ");
    for (v, b) in a.iter() {
        write!(s, "{} ", if b { v as i64 } else { -(v as i64) }).unwrap();
    }
    s.push('0');
    s
}

// ER ---------------------------------------------------------------------

fn ext_axiom(word: Tok, l: &mut Fields) -> Result<Option<ExtAxiom>> {
    Ok(Some(match word.s {
        "e2" => ExtAxiom::And {
            y: l.var()?,
            u: l.dimacs_lit()?,
            v: l.dimacs_lit()?,
        },
        "e1" => ExtAxiom::Alias {
            y: l.var()?,
            u: l.dimacs_lit()?,
        },
        "e0" => {
            let y = l.var()?;
            let t = l.next("0 or 1")?;
            let value = match t.s {
                "0" => false,
                "1" => true,
                _ => return t.err(format!("expected 0 or 1, found `{}`", t.s)),
            };
            ExtAxiom::Const { y, value }
        }
        _ => return Ok(None),
    }))
}

fn ext_axiom_text(ax: &ExtAxiom) -> String {
    match *ax {
        ExtAxiom::And { y, u, v } => format!("e2 {y} {} {}", dimacs_lit_text(u), dimacs_lit_text(v)),
        ExtAxiom::Alias { y, u } => format!("e1 {y} {}", dimacs_lit_text(u)),
        ExtAxiom::Const { y, value } => format!("e0 {y} {}", u8::from(value)),
    }
}

fn er_block(src: &mut Src) -> Result<ErDerivation> {
    src.begin("er")?;
    let mut pi = ErDerivation::default();
    while !src.at_end() {
        let mut l = src.next_line("an ER line")?;
        let w = l.next("a keyword")?;
        let step = match w.s {
            "premise" => {
                pi.premises.push(l.clause0()?);
                None
            }
            "protect" => {
                pi.protected.extend(l.vars0()?);
                None
            }
            "conclude" => {
                pi.conclusions.push(l.clause0()?);
                None
            }
            "p" => {
                let i = l.index()?;
                let z = l.next("0")?;
                if z.s != "0" {
                    return z.err(format!("expected 0, found `{}`", z.s));
                }
                Some(ErStep::Premise(i))
            }
            "r" => Some(ErStep::Resolve {
                a: l.index()?,
                b: l.index()?,
                pivot: l.dimacs_lit()?,
                result: l.clause0()?,
            }),
            "w" => Some(ErStep::Weaken {
                from: l.index()?,
                result: l.clause0()?,
            }),
            "z" => Some(ErStep::DropZero {
                from: l.index()?,
                result: l.clause0()?,
            }),
            _ => match ext_axiom(w, &mut l)? {
                Some(ax) => Some(ErStep::Extend(ax)),
                None => return w.err(format!("unknown ER line `{}`", w.s)),
            },
        };
        l.done()?;
        pi.steps.extend(step);
    }
    src.end()?;
    Ok(pi)
}

fn write_er(s: &mut String, pi: &ErDerivation) {
    s.push_str("begin er\n");
    for c in pi.premises.iter() {
        writeln!(s, "premise {}", clause_text(c)).unwrap();
    }
    if !pi.protected.is_empty() {
        writeln!(s, "protect {}", vars_text(pi.protected.iter().copied())).unwrap();
    }
    for step in &pi.steps {
        match step {
            ErStep::Premise(i) => writeln!(s, "p {i} 0"),
            ErStep::Resolve { a, b, pivot, result } => {
                writeln!(s, "r {a} {b} {} {}", dimacs_lit_text(*pivot), clause_text(result))
            }
            ErStep::Weaken { from, result } => writeln!(s, "w {from} {}", clause_text(result)),
            ErStep::DropZero { from, result } => writeln!(s, "z {from} {}", clause_text(result)),
            ErStep::Extend(ax) => writeln!(s, "{}", ext_axiom_text(ax)),
        }
        .unwrap();
    }
    for c in pi.conclusions.iter() {
        writeln!(s, "conclude {}", clause_text(c)).unwrap();
    }
    s.push_str("end\n");
}

fn whole<T>(text: &str, f: impl FnOnce(&mut Src) -> Result<T>) -> Result<T> {
    let mut src = Src::new(text);
    let out = f(&mut src)?;
    src.expect_end_of_input()?;
    Ok(out)
}

pub fn parse_er(text: &str) -> Result<ErDerivation> {
    whole(text, er_block)
}

pub fn print_er(pi: &ErDerivation) -> String {
    let mut s = String::new();
    write_er(&mut s, pi);
    s
}

// CP ---------------------------------------------------------------------

fn cp_step(w: Tok, l: &mut Fields) -> Result<Option<CpStep>> {
    Ok(Some(match w.s {
        "h" => CpStep::Hyp(l.index()?),
        "axge" => CpStep::AxGe(l.var()?),
        "axle" => CpStep::AxLe(l.var()?),
        "add" => CpStep::Add {
            a: l.index()?,
            ma: l.bigint("a multiplier")?,
            b: l.index()?,
            mb: l.bigint("a multiplier")?,
        },
        "div" => CpStep::Div {
            a: l.index()?,
            d: l.bigint("a divisor")?,
        },
        _ => return Ok(None),
    }))
}

/// Hypotheses, steps and (if allowed) goals of a `cp` block.
fn cp_block(src: &mut Src, goals_allowed: bool) -> Result<(PbFormula, Vec<CpStep>, PbFormula)> {
    src.begin("cp")?;
    let (mut hyps, mut steps, mut goals) = (PbFormula::new(), Vec::new(), PbFormula::new());
    while !src.at_end() {
        let mut l = src.next_line("a CP line")?;
        let w = l.next("a keyword")?;
        match w.s {
            "hyp" => {
                hyps.push(l.constraint()?);
            }
            "goal" if goals_allowed => {
                goals.push(l.constraint()?);
            }
            _ => match cp_step(w, &mut l)? {
                Some(step) => steps.push(step),
                None => return w.err(format!("unknown CP line `{}`", w.s)),
            },
        }
        l.done()?;
    }
    src.end()?;
    Ok((hyps, steps, goals))
}

fn witness_block(src: &mut Src) -> Result<CpWitness> {
    let (hyps, steps, _) = cp_block(src, false)?;
    Ok(CpWitness { hyps, steps })
}

fn write_cp(s: &mut String, hyps: &PbFormula, steps: &[CpStep], goals: &PbFormula) {
    s.push_str("begin cp\n");
    for h in hyps.iter() {
        writeln!(s, "hyp {}", constraint_text(h)).unwrap();
    }
    for step in steps {
        match step {
            CpStep::Hyp(i) => writeln!(s, "h {i}"),
            CpStep::AxGe(v) => writeln!(s, "axge {v}"),
            CpStep::AxLe(v) => writeln!(s, "axle {v}"),
            CpStep::Add { a, ma, b, mb } => writeln!(s, "add {a} {ma} {b} {mb}"),
            CpStep::Div { a, d } => writeln!(s, "div {a} {d}"),
        }
        .unwrap();
    }
    for g in goals.iter() {
        writeln!(s, "goal {}", constraint_text(g)).unwrap();
    }
    s.push_str("end\n");
}

pub fn parse_cp(text: &str) -> Result<CpDerivation> {
    whole(text, |src| {
        let (hyps, steps, goals) = cp_block(src, true)?;
        Ok(CpDerivation { hyps, steps, goals })
    })
}

pub fn print_cp(pi: &CpDerivation) -> String {
    let mut s = String::new();
    write_cp(&mut s, &pi.hyps, &pi.steps, &pi.goals);
    s
}

pub fn print_witness(w: &CpWitness) -> String {
    let mut s = String::new();
    write_cp(&mut s, &w.hyps, &w.steps, &PbFormula::new());
    s
}

// ER-PLS -----------------------------------------------------------------

fn domrule_block(src: &mut Src) -> Result<DomRule> {
    let start = src.lines.get(src.pos).map(|l| l.toks[0]);
    src.begin("domrule")?;
    let mut c = None;
    let mut order = None;
    let mut base = BTreeSet::new();
    let mut axioms = Vec::new();
    let mut omega = Substitution::identity();
    let mut first_aux = None;
    let mut derivations = Vec::new();
    while !src.at_end() {
        if src.peek_begin().is_some() {
            derivations.push(er_block(src)?);
            continue;
        }
        let mut l = src.next_line("a dominance rule line")?;
        if l.toks.get(1).is_some_and(|t| t.s == "->") {
            let first = l.toks[0];
            let (v, image) = l.mapping()?;
            if omega.get(v) != Lit::Pos(v) {
                return first.err(format!("x{v} is mapped twice"));
            }
            omega.set(v, image);
            l.done()?;
            continue;
        }
        let w = l.next("a keyword")?;
        match w.s {
            "clause" => c = Some(l.clause0()?),
            "order" => {
                let vs = l.vars0()?;
                order = Some(VarOrder::new(vs).or_else(|e| w.err(e.to_string()))?);
            }
            "base" => base.extend(l.vars0()?),
            "lex" => first_aux = Some((w, l.var()?)),
            _ => match ext_axiom(w, &mut l)? {
                Some(ax) => axioms.push(ax),
                None => return w.err(format!("unknown dominance rule line `{}`", w.s)),
            },
        }
        l.done()?;
    }
    let here = start.unwrap();
    src.end()?;
    let (Some(c), Some(order), Some((lex, first_aux))) = (c, order, first_aux) else {
        return here.err("a dominance rule needs `clause`, `order` and `lex` lines");
    };
    let [pi_a, pi_b]: [ErDerivation; 2] = derivations
        .try_into()
        .or_else(|_| here.err("a dominance rule needs exactly two er blocks"))?;
    let delta = ExtensionBlock::new(base, axioms).or_else(|e| here.err(e))?;
    let gadget = DomRule::make_gadget(&order, &omega, first_aux).or_else(|e| lex.err(e))?;
    Ok(DomRule {
        c,
        order,
        delta,
        omega,
        pi_a,
        pi_b,
        gadget,
    })
}

fn write_domrule(s: &mut String, r: &DomRule) {
    s.push_str("begin domrule\n");
    writeln!(s, "clause {}", clause_text(&r.c)).unwrap();
    writeln!(s, "order {}", vars_text(r.order.vars().iter().copied())).unwrap();
    writeln!(s, "base {}", vars_text(r.delta.base.iter().copied())).unwrap();
    for ax in &r.delta.axioms {
        writeln!(s, "{}", ext_axiom_text(ax)).unwrap();
    }
    subst_lines(s, &r.omega);
    writeln!(s, "lex {}", r.gadget.first_aux).unwrap();
    write_er(s, &r.pi_a);
    write_er(s, &r.pi_b);
    s.push_str("end\n");
}

pub fn parse_erpls(text: &str) -> Result<ErplsProof> {
    whole(text, |src| {
        src.begin("erpls")?;
        let mut p = ErplsProof {
            input: Cnf::new(),
            steps: Vec::new(),
        };
        while !src.at_end() {
            match src.peek_begin() {
                Some("er") => p.steps.push(ErplsStep::Er(er_block(src)?)),
                Some(_) => p.steps.push(ErplsStep::Dom(Box::new(domrule_block(src)?))),
                None => {
                    let mut l = src.next_line("an input clause")?;
                    let w = l.next("input")?;
                    if w.s != "input" {
                        return w.err(format!("expected `input` or a block, found `{}`", w.s));
                    }
                    if !p.steps.is_empty() {
                        return w.err("input clauses must come before the steps");
                    }
                    p.input.push(l.clause0()?);
                    l.done()?;
                }
            }
        }
        src.end()?;
        Ok(p)
    })
}

pub fn print_erpls(p: &ErplsProof) -> String {
    let mut s = String::from("begin erpls\n");
    for c in p.input.iter() {
        writeln!(s, "input {}", clause_text(c)).unwrap();
    }
    for step in &p.steps {
        match step {
            ErplsStep::Er(pi) => write_er(&mut s, pi),
            ErplsStep::Dom(r) => write_domrule(&mut s, r),
        }
    }
    s.push_str("end\n");
    s
}

// Dominance --------------------------------------------------------------

pub fn parse_mode(s: &str) -> Option<Mode> {
    match s {
        "full" => Some(Mode::Full),
        "linear" => Some(Mode::Linear),
        "weak" => Some(Mode::WeakLinear),
        _ => None,
    }
}

pub fn mode_name(m: Mode) -> &'static str {
    match m {
        Mode::Full => "full",
        Mode::Linear => "linear",
        Mode::WeakLinear => "weak",
    }
}

/// The lines of a rule block before its nested cp blocks, and those blocks.
struct RuleBody<'a> {
    lines: Vec<(Tok<'a>, Fields<'a>)>,
    omega: Substitution,
    witnesses: Vec<CpWitness>,
}

fn rule_body<'a>(src: &mut Src<'a>) -> Result<RuleBody<'a>> {
    let mut body = RuleBody {
        lines: Vec::new(),
        omega: Substitution::identity(),
        witnesses: Vec::new(),
    };
    while !src.at_end() {
        if src.peek_begin().is_some() {
            body.witnesses.push(witness_block(src)?);
            continue;
        }
        let mut l = src.next_line("a rule line")?;
        if l.toks.get(1).is_some_and(|t| t.s == "->") {
            let first = l.toks[0];
            let (v, image) = l.mapping()?;
            if body.omega.get(v) != Lit::Pos(v) {
                return first.err(format!("x{v} is mapped twice"));
            }
            body.omega.set(v, image);
            l.done()?;
            continue;
        }
        let w = l.next("a keyword")?;
        body.lines.push((w, l));
    }
    src.end()?;
    Ok(body)
}

fn one_constraint(here: Tok, lines: &mut Vec<(Tok, Fields)>, key: &str) -> Result<PbConstraint> {
    let mut found = None;
    for (w, l) in lines.iter_mut().filter(|(w, _)| w.s == key) {
        if found.is_some() {
            return w.err(format!("more than one `{key}` line"));
        }
        let c = l.constraint()?;
        l.done()?;
        found = Some(c);
    }
    found.map_or_else(|| here.err(format!("missing `{key}` line")), Ok)
}

fn no_other_lines(lines: &[(Tok, Fields)], allowed: &[&str]) -> Result<()> {
    match lines.iter().find(|(w, _)| !allowed.contains(&w.s)) {
        Some((w, _)) => w.err(format!("unexpected `{}` here", w.s)),
        None => Ok(()),
    }
}

fn witnesses<const N: usize>(here: Tok, ws: Vec<CpWitness>) -> Result<[CpWitness; N]> {
    let n = ws.len();
    ws.try_into().or_else(|_| here.err(format!("expected {N} cp blocks, found {n}")))
}

fn no_subst(here: Tok, omega: &Substitution) -> Result<()> {
    if omega.is_identity() {
        Ok(())
    } else {
        here.err("this rule takes no substitution")
    }
}

fn dom_step(src: &mut Src) -> Result<DomStep> {
    let mut head = src.next_line("a rule block")?;
    let b = head.next("begin")?;
    if b.s != "begin" {
        return b.err(format!("expected `begin <rule>` or `end`, found `{}`", b.s));
    }
    let kind = head.next("a rule name")?;
    head.done()?;
    let mut body = rule_body(src)?;
    let lines = &mut body.lines;
    Ok(match kind.s {
        "impl" => {
            no_other_lines(lines, &["constraint"])?;
            no_subst(kind, &body.omega)?;
            let c = one_constraint(kind, lines, "constraint")?;
            let [proof] = witnesses(kind, body.witnesses)?;
            DomStep::Impl { c, proof }
        }
        "redundance" => {
            no_other_lines(lines, &["constraint"])?;
            let c = one_constraint(kind, lines, "constraint")?;
            let [proof] = witnesses(kind, body.witnesses)?;
            DomStep::Redundance {
                c,
                omega: body.omega,
                proof,
            }
        }
        "dominance" => {
            no_other_lines(lines, &["constraint"])?;
            let c = one_constraint(kind, lines, "constraint")?;
            let [proof, refute] = witnesses(kind, body.witnesses)?;
            DomStep::Dominance {
                c,
                omega: body.omega,
                proof,
                refute,
            }
        }
        "deletion" => {
            no_other_lines(lines, &["derived", "core"])?;
            let mut removal = Removal::These(Vec::new());
            for (w, l) in lines.iter_mut().filter(|(w, _)| w.s == "derived") {
                if l.peek().is_some_and(|t| t.s == "all") {
                    l.next("all")?;
                    if !matches!(&removal, Removal::These(v) if v.is_empty()) {
                        return w.err("`derived all` cannot be combined with other `derived` lines");
                    }
                    removal = Removal::All;
                } else {
                    let c = l.constraint()?;
                    match &mut removal {
                        Removal::These(v) => v.push(c),
                        Removal::All => return w.err("`derived all` cannot be combined with other `derived` lines"),
                    }
                }
                l.done()?;
            }
            let core = if lines.iter().any(|(w, _)| w.s == "core") {
                let constraint = one_constraint(kind, lines, "core")?;
                let [proof] = witnesses(kind, body.witnesses)?;
                Some(CoreRemoval {
                    constraint,
                    omega: body.omega,
                    proof,
                })
            } else {
                no_subst(kind, &body.omega)?;
                witnesses::<0>(kind, body.witnesses)?;
                None
            };
            DomStep::Deletion { derived: removal, core }
        }
        "transfer" => {
            no_other_lines(lines, &["constraint"])?;
            no_subst(kind, &body.omega)?;
            witnesses::<0>(kind, body.witnesses)?;
            let mut constraints = Vec::new();
            for (_, l) in lines.iter_mut() {
                constraints.push(l.constraint()?);
                l.done()?;
            }
            DomStep::Transfer { constraints }
        }
        "order" => {
            no_other_lines(lines, &["linear", "general", "constraint", "zvars"])?;
            no_subst(kind, &body.omega)?;
            let mut zvars = None;
            let mut linear = None;
            let mut general = None;
            let mut formula = PbFormula::new();
            for (w, l) in lines.iter_mut() {
                match w.s {
                    "zvars" => zvars = Some(l.vars0()?),
                    "linear" => {
                        let mut b = Vec::new();
                        while !l.is_done() {
                            b.push(l.bigint("a weight")?);
                        }
                        linear = Some(b);
                    }
                    "general" => general = Some(l.index()?),
                    _ => {
                        formula.push(l.constraint()?);
                    }
                }
                l.done()?;
            }
            let order = match (linear, general) {
                (Some(b), None) => {
                    witnesses::<0>(kind, body.witnesses)?;
                    if !formula.is_empty() {
                        return kind.err("a linear order takes no `constraint` lines");
                    }
                    OrderSpec::Linear(b)
                }
                (None, Some(arity)) => {
                    let [refl, trans] = witnesses(kind, body.witnesses)?;
                    OrderSpec::General(GeneralOrder {
                        arity,
                        formula,
                        refl,
                        trans,
                    })
                }
                _ => return kind.err("an order needs exactly one `linear` or `general` line"),
            };
            let Some(zvars) = zvars else {
                return kind.err("missing `zvars` line");
            };
            DomStep::OrderChange { order, zvars }
        }
        other => return kind.err(format!("unknown rule `{other}`")),
    })
}

fn write_step(s: &mut String, step: &DomStep) {
    match step {
        DomStep::Impl { c, proof } => {
            writeln!(s, "begin impl\nconstraint {}", constraint_text(c)).unwrap();
            s.push_str(&print_witness(proof));
        }
        DomStep::Redundance { c, omega, proof } => {
            writeln!(s, "begin redundance\nconstraint {}", constraint_text(c)).unwrap();
            subst_lines(s, omega);
            s.push_str(&print_witness(proof));
        }
        DomStep::Dominance { c, omega, proof, refute } => {
            writeln!(s, "begin dominance\nconstraint {}", constraint_text(c)).unwrap();
            subst_lines(s, omega);
            s.push_str(&print_witness(proof));
            s.push_str(&print_witness(refute));
        }
        DomStep::Deletion { derived, core } => {
            s.push_str("begin deletion\n");
            match derived {
                Removal::All => s.push_str("derived all\n"),
                Removal::These(cs) => {
                    for c in cs {
                        writeln!(s, "derived {}", constraint_text(c)).unwrap();
                    }
                }
            }
            if let Some(r) = core {
                writeln!(s, "core {}", constraint_text(&r.constraint)).unwrap();
                subst_lines(s, &r.omega);
                s.push_str(&print_witness(&r.proof));
            }
        }
        DomStep::Transfer { constraints } => {
            s.push_str("begin transfer\n");
            for c in constraints {
                writeln!(s, "constraint {}", constraint_text(c)).unwrap();
            }
        }
        DomStep::OrderChange { order, zvars } => {
            s.push_str("begin order\n");
            match order {
                OrderSpec::Linear(b) => {
                    s.push_str("linear");
                    for w in b {
                        write!(s, " {w}").unwrap();
                    }
                    s.push('\n');
                }
                OrderSpec::General(g) => {
                    writeln!(s, "general {}", g.arity).unwrap();
                    for c in g.formula.iter() {
                        writeln!(s, "constraint {}", constraint_text(c)).unwrap();
                    }
                }
            }
            writeln!(s, "zvars {}", vars_text(zvars.iter().copied())).unwrap();
            if let OrderSpec::General(g) = order {
                s.push_str(&print_witness(&g.refl));
                s.push_str(&print_witness(&g.trans));
            }
        }
    }
    s.push_str("end\n");
}

pub fn parse_dom(text: &str) -> Result<DomProof> {
    whole(text, |src| {
        src.begin("dom")?;
        let mut p = DomProof {
            input: PbFormula::new(),
            mode: Mode::Linear,
            steps: Vec::new(),
        };
        while !src.at_end() {
            if src.peek_begin().is_some() {
                p.steps.push(dom_step(src)?);
                continue;
            }
            let mut l = src.next_line("a proof line")?;
            let w = l.next("a keyword")?;
            if !p.steps.is_empty() {
                return w.err(format!("`{}` must come before the steps", w.s));
            }
            match w.s {
                "mode" => {
                    let t = l.next("a mode")?;
                    p.mode = parse_mode(t.s).map_or_else(|| t.err(format!("unknown mode `{}`", t.s)), Ok)?;
                }
                "input" => {
                    p.input.push(l.constraint()?);
                }
                _ => return w.err(format!("expected `mode`, `input` or a rule block, found `{}`", w.s)),
            }
            l.done()?;
        }
        src.end()?;
        Ok(p)
    })
}

pub fn print_dom(p: &DomProof) -> String {
    let mut s = format!("begin dom\nmode {}\n", mode_name(p.mode));
    for c in p.input.iter() {
        writeln!(s, "input {}", constraint_text(c)).unwrap();
    }
    for step in &p.steps {
        write_step(&mut s, step);
    }
    s.push_str("end\n");
    s
}

// Lex-leader refutations --------------------------------------------------

fn symmetry_block(src: &mut Src, order: Option<&VarOrder>) -> Result<(Substitution, crate::ordering::LexGadget)> {
    let here = src.lines[src.pos].toks[0];
    src.begin("symmetry")?;
    let mut omega = Substitution::identity();
    let mut first_aux = None;
    while !src.at_end() {
        let mut l = src.next_line("a symmetry line")?;
        if l.toks.get(1).is_some_and(|t| t.s == "->") {
            let first = l.toks[0];
            let (v, image) = l.mapping()?;
            if omega.get(v) != Lit::Pos(v) {
                return first.err(format!("x{v} is mapped twice"));
            }
            omega.set(v, image);
        } else {
            let w = l.next("lex")?;
            if w.s != "lex" {
                return w.err(format!("expected a mapping or `lex`, found `{}`", w.s));
            }
            first_aux = Some((w, l.var()?));
        }
        l.done()?;
    }
    src.end()?;
    let Some(order) = order else {
        return here.err("the order must come before the symmetries");
    };
    let Some((lex, first)) = first_aux else {
        return here.err("missing `lex` line");
    };
    let gadget = lex_leader(order, &omega, &mut VarAlloc::starting_at(first)).or_else(|e| lex.err(e.to_string()))?;
    Ok((omega, gadget))
}

pub fn parse_q(text: &str) -> Result<QRefutation> {
    whole(text, |src| {
        let here = src.lines.first().map(|l| l.toks[0]);
        src.begin("q")?;
        let mut gamma = Cnf::new();
        let mut order = None;
        let mut symmetries = Vec::new();
        let mut leaders = Vec::new();
        let mut pi = None;
        while !src.at_end() {
            match src.peek_begin() {
                Some("symmetry") => {
                    let (omega, g) = symmetry_block(src, order.as_ref())?;
                    symmetries.push(omega);
                    leaders.push(g);
                }
                Some(_) => {
                    let t = src.lines[src.pos].toks[0];
                    if pi.is_some() {
                        return t.err("only one er block is allowed");
                    }
                    pi = Some(er_block(src)?);
                }
                None => {
                    let mut l = src.next_line("a line")?;
                    let w = l.next("a keyword")?;
                    match w.s {
                        "input" => {
                            gamma.push(l.clause0()?);
                        }
                        "order" => {
                            let vs = l.vars0()?;
                            order = Some(VarOrder::new(vs).or_else(|e| w.err(e.to_string()))?);
                        }
                        _ => return w.err(format!("expected `input`, `order` or a block, found `{}`", w.s)),
                    }
                    l.done()?;
                }
            }
        }
        src.end()?;
        let here = here.unwrap();
        let (Some(order), Some(pi)) = (order, pi) else {
            return here.err("a refutation needs an `order` line and an er block");
        };
        Ok(QRefutation {
            gamma,
            order,
            symmetries,
            leaders,
            pi,
        })
    })
}

pub fn print_q(p: &QRefutation) -> String {
    let mut s = String::from("begin q\n");
    for c in p.gamma.iter() {
        writeln!(s, "input {}", clause_text(c)).unwrap();
    }
    writeln!(s, "order {}", vars_text(p.order.vars().iter().copied())).unwrap();
    for (omega, g) in p.symmetries.iter().zip(&p.leaders) {
        s.push_str("begin symmetry\n");
        subst_lines(&mut s, omega);
        writeln!(s, "lex {}\nend", g.first_aux).unwrap();
    }
    write_er(&mut s, &p.pi);
    s.push_str("end\n");
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn dimacs() {
        let f = parse_cnf("p cnf 2 1\n1 -2 0\n").unwrap();
        assert_eq!(f, Cnf::from_iter([Clause::from_dimacs(&[1, -2])]));
        assert_eq!(parse_cnf(&print_cnf(&f)).unwrap(), f);
        let g = parse_cnf("c constants\n1 t 0 f 0\n0\n").unwrap();
        assert_eq!(g.len(), 3);
        assert!(g.contains_empty());
        assert_eq!(parse_cnf(&print_cnf(&g)).unwrap(), g);
    }

    #[test]
    fn dimacs_errors() {
        let e = parse_cnf("p cnf 2 2\n1 -2 0\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 1));
        let e = parse_cnf("1 2\n").unwrap_err();
        assert!(e.msg.contains("not terminated"));
        let e = parse_cnf("1 x 0\n").unwrap_err();
        assert_eq!((e.line, e.col), (1, 3));
    }

    #[test]
    fn opb() {
        let c = parse_constraint("+1 x1 +1 ~x2 >= 1 ;").unwrap();
        let mut want = LinearSum::new();
        want.add_lit(1, Lit::Pos(1)).add_lit(1, Lit::Neg(2));
        assert_eq!(c, want.ge(1));
        assert_eq!(parse_constraint(&constraint_text(&c)).unwrap(), c);
        let le = parse_constraint("3 x1 -2 x4 <= 1 ;").unwrap();
        assert_eq!(parse_constraint(&constraint_text(&le)).unwrap(), le);
        let bot = PbConstraint::contradiction();
        assert_eq!(parse_constraint(&constraint_text(&bot)).unwrap(), bot);
        let e = parse_constraint("+1 x1 >= 1").unwrap_err();
        assert_eq!(e.line, 1);
        assert!(parse_constraint("+1 y1 >= 1 ;").is_err());
    }

    #[test]
    fn substitutions() {
        let s = parse_subst("x1 -> ~x2\nx2 -> 0\nx3 -> x3\n").unwrap();
        assert_eq!(s, Substitution::from_pairs([(1, Lit::Neg(2)), (2, Lit::False)]));
        assert_eq!(parse_subst(&print_subst(&s)).unwrap(), s);
        assert!(parse_subst("x1 -> x2\nx1 -> x3\n").is_err());
    }

    #[test]
    fn er_round_trip_and_errors() {
        let text = "begin er\npremise 1 2 0\npremise -1 2 0\np 0 0\np 1 0\nr 0 1 1 2 0\ne2 3 1 -2\nconclude 2 0\nend\n";
        let pi = parse_er(text).unwrap();
        assert_eq!(pi.steps.len(), 4);
        assert_eq!(print_er(&pi), text);
        let e = parse_er("begin er\nr 1\nend\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(e.msg.contains("index"), "{e}");
        let e = parse_er("begin er\np 0 0\n").unwrap_err();
        assert!(e.msg.contains("end of input"));
    }

    #[test]
    fn cp_round_trip() {
        let text = "begin cp\nhyp +1 x1 +1 x2 >= 1 ;\nh 0\naxge 1\nadd 0 2 1 1\ndiv 2 2\ngoal +1 x1 +1 x2 >= 1 ;\nend\n";
        let pi = parse_cp(text).unwrap();
        assert_eq!(print_cp(&pi), text);
        assert!(parse_cp("begin cp\nmul 0 2\nend\n").is_err());
    }

    #[test]
    fn dom_round_trip() {
        let text = "\
begin dom
mode weak
input +1 x1 +1 x2 >= 1 ;
begin order
linear 2 1
zvars 1 2 0
end
begin redundance
constraint +1 x3 >= 1 ;
x3 -> 1
begin cp
end
end
begin deletion
derived all
end
begin transfer
end
end
";
        let p = parse_dom(text).unwrap();
        assert_eq!(p.mode, Mode::WeakLinear);
        assert_eq!(p.steps.len(), 4);
        assert_eq!(print_dom(&p), text);
        let e = parse_dom("begin dom\nbegin impl\nconstraint +1 x1 >= 1 ;\nend\nend\n").unwrap_err();
        assert!(e.msg.contains("cp blocks"), "{e}");
    }
}
