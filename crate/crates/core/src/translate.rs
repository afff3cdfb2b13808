//! Compiles ER-PLS refutations into linear dominance refutations of the
//! translated input.

use std::collections::BTreeSet;

use crate::cp::{CpBuildError, CpBuilder, CpWitness, ResolutionError};
use crate::dominance::{linear_order_constraint, Checker, DomProof, DomStep, Mode, OrderSpec, Removal};
use crate::er::{concat_er, hoist_extensions, ErDerivation, ErStep, ExtAxiom, TransformError};
use crate::erpls::{check_erpls, DomRule, ErplsProof, ErplsStep};
use crate::ordering::{derive_l_strict, strictify, LexGadget, OrderingError};
use crate::pb::{clause_to_pb, PbConstraint, PbFormula};
use crate::syntax::{Clause, Cnf, Lit, Substitution, Var, VarAlloc};
use crate::Rejection;

#[derive(Debug, thiserror::Error)]
pub enum TranslateError {
    #[error("input rejected: {0}")]
    Rejected(Rejection),
    #[error("defined variable x{0} already occurs")]
    NotFresh(Var),
    #[error(transparent)]
    Build(#[from] CpBuildError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error(transparent)]
    Transform(#[from] TransformError),
    #[error(transparent)]
    Ordering(#[from] OrderingError),
    #[error("{0}")]
    Other(String),
}

/// One redundance step for `c` under `omega`. `prior` holds constraints
/// added by earlier redundance steps whose variables `omega` may touch;
/// everything else in the configuration must be fixed by `omega`. Every
/// goal must be available, a tautology, or a weakening of ¬c.
fn redundance_step(
    prior: &[PbConstraint],
    c: PbConstraint,
    omega: Substitution,
    order: &OrderSpec,
    zvars: &[Var],
) -> Result<DomStep, TranslateError> {
    let neg = c.negate();
    let mut hyps = prior.to_vec();
    hyps.push(neg.clone());
    let mut b = CpBuilder::new(hyps);
    let z: Vec<Lit> = zvars.iter().map(|&v| Lit::Pos(v)).collect();
    let zw: Vec<Lit> = zvars.iter().map(|&v| omega.get(v)).collect();
    let mut goals: Vec<PbConstraint> = prior.iter().chain([&c]).map(|g| g.substitute(&omega)).collect();
    goals.extend(order.instantiate(&zw, &z).map_err(TranslateError::Other)?.iter().cloned());
    for g in goals {
        if b.has(&g) {
            continue;
        }
        if g.is_tautology() {
            b.tautology(&g)?;
        } else {
            let s = b.need(&neg)?;
            b.weaken(s, &g)?;
        }
    }
    Ok(DomStep::Redundance {
        c,
        omega,
        proof: b.into_witness(),
    })
}

/// Redundance steps adding the clauses of one extension axiom: y ↦ u for
/// the clauses that force y upward and downward, y ↦ 0 for the last
/// clause of a conjunction.
pub fn extension_redundance(
    e: &PbFormula,
    ax: &ExtAxiom,
    order: &OrderSpec,
    zvars: &[Var],
) -> Result<Vec<DomStep>, TranslateError> {
    let y = ax.defined();
    if e.vars().contains(&y) || zvars.contains(&y) {
        return Err(TranslateError::NotFresh(y));
    }
    let sigma = match *ax {
        ExtAxiom::And { u, .. } | ExtAxiom::Alias { u, .. } => Substitution::from_pairs([(y, u)]),
        ExtAxiom::Const { value, .. } => Substitution::from_pairs([(y, Lit::constant(value))]),
    };
    let mut prior: Vec<PbConstraint> = Vec::new();
    let mut out = Vec::new();
    for (k, clause) in ax.clauses().iter().enumerate() {
        let omega = match ax {
            ExtAxiom::And { .. } if k == 2 => Substitution::from_pairs([(y, Lit::False)]),
            _ => sigma.clone(),
        };
        let c = clause_to_pb(clause);
        out.push(redundance_step(&prior, c.clone(), omega, order, zvars)?);
        prior.push(c);
    }
    Ok(out)
}

/// Emits dominance steps while tracking the configuration they produce.
pub struct Compiler {
    checker: Checker,
    steps: Vec<DomStep>,
}

impl Compiler {
    pub fn new(input: PbFormula) -> Compiler {
        Compiler {
            checker: Checker::new(input, Mode::Linear),
            steps: Vec::new(),
        }
    }

    pub fn config(&self) -> &crate::dominance::Configuration {
        self.checker.config()
    }

    fn emit(&mut self, step: DomStep) {
        self.checker.apply_unchecked(&step);
        self.steps.push(step);
    }

    fn available(&self) -> PbFormula {
        let cfg = self.config();
        let mut all = cfg.core.clone();
        for c in cfg.derived.iter() {
            all.push(c.clone());
        }
        all
    }

    fn introduce(&mut self, ax: &ExtAxiom) -> Result<(), TranslateError> {
        let cfg = self.config();
        let steps = extension_redundance(&self.available(), ax, &cfg.order.clone(), &cfg.zvars.clone())?;
        for s in steps {
            self.emit(s);
        }
        Ok(())
    }

    /// Adds `goal` to the derived set by an implicational step unless the
    /// configuration already has it.
    fn derive(&mut self, goal: PbConstraint, build: impl FnOnce(&mut CpBuilder) -> Result<usize, TranslateError>) -> Result<(), TranslateError> {
        if self.config().contains(&goal) {
            return Ok(());
        }
        let mut b = CpBuilder::new(self.available().iter().cloned().collect());
        let s = build(&mut b)?;
        debug_assert_eq!(*b.fact(s), goal);
        let proof = b.into_witness();
        self.emit(DomStep::Impl { c: goal, proof });
        Ok(())
    }

    /// Moves constraints into the core and empties the derived set.
    fn commit(&mut self, conclusions: impl IntoIterator<Item = PbConstraint>) {
        let cfg = self.config();
        let mut moved: Vec<PbConstraint> = Vec::new();
        for c in conclusions {
            if !cfg.core.contains(&c) && !moved.contains(&c) {
                moved.push(c);
            }
        }
        if !moved.is_empty() {
            self.emit(DomStep::Transfer { constraints: moved });
        }
        if !self.config().derived.is_empty() {
            self.emit(DomStep::Deletion {
                derived: Removal::All,
                core: None,
            });
        }
    }

    /// The ER rule: every clause of π becomes a derived constraint, then the
    /// conclusions move to the core.
    pub fn er_rule(&mut self, pi: &ErDerivation) -> Result<(), TranslateError> {
        let mut clauses: Vec<Clause> = Vec::with_capacity(pi.clause_count());
        for (i, step) in pi.steps.iter().enumerate() {
            let bad = || TranslateError::Other(format!("ER step {i} is malformed"));
            match step {
                ErStep::Premise(k) => clauses.push(pi.premises.get(*k).ok_or_else(bad)?.clone()),
                ErStep::Resolve { a, b, result, .. } => {
                    let pa = clause_to_pb(clauses.get(*a).ok_or_else(bad)?);
                    let pb = clause_to_pb(clauses.get(*b).ok_or_else(bad)?);
                    let goal = clause_to_pb(result);
                    self.derive(goal.clone(), |cb| {
                        if goal.is_tautology() {
                            return Ok(cb.tautology(&goal)?);
                        }
                        let (sa, sb) = (cb.need(&pa)?, cb.need(&pb)?);
                        let sum = cb.add(sa, 1, sb, 1);
                        Ok(cb.round(sum, 2, &goal)?)
                    })?;
                    clauses.push(result.clone());
                }
                ErStep::Weaken { from, result } => {
                    let pf = clause_to_pb(clauses.get(*from).ok_or_else(bad)?);
                    let goal = clause_to_pb(result);
                    self.derive(goal.clone(), |cb| {
                        let s = cb.need(&pf)?;
                        Ok(cb.weaken(s, &goal)?)
                    })?;
                    clauses.push(result.clone());
                }
                ErStep::DropZero { result, .. } => clauses.push(result.clone()),
                ErStep::Extend(ax) => {
                    self.introduce(ax)?;
                    clauses.extend(ax.clauses());
                }
            }
        }
        self.commit(pi.conclusions.iter().map(clause_to_pb));
        Ok(())
    }

    /// The dominance rule, with Γ the running CNF whose translation is the
    /// current core.
    pub fn dom_rule(&mut self, gamma: &Cnf, rule: &DomRule) -> Result<(), TranslateError> {
        let c_pb = clause_to_pb(&rule.c);
        if rule.c.is_tautologous() {
            self.derive(c_pb.clone(), |b| Ok(b.tautology(&c_pb)?))?;
            self.commit([c_pb]);
            return Ok(());
        }
        let x = rule.x();
        let n = x.len();
        let order = OrderSpec::lex(n);
        let OrderSpec::Linear(coeffs) = &order else { unreachable!() };
        let coeffs = coeffs.clone();
        self.emit(DomStep::OrderChange {
            order: order.clone(),
            zvars: rule.order.vars().to_vec(),
        });
        // one resolution derivation Γ ∧ Δ ∧ ¬C ∧ E ⊢ Γ↾ω ∧ [x̄↾ω <lex x̄]
        let strict_part = strictify(&rule.pi_b, &rule.gadget)?;
        let joined = concat_er(&rule.pi_a, &strict_part)?;
        let (pi, block) = hoist_extensions(&joined);
        for ax in rule.delta.axioms.iter().chain(&block.axioms) {
            self.introduce(ax)?;
        }
        let xw = rule.x_omega();
        let back = linear_order_constraint(&coeffs, &x, &xw);
        let neg_c = c_pb.negate();
        let mut hyps: Vec<PbConstraint> = self.available().iter().cloned().collect();
        hyps.push(neg_c.clone());
        hyps.push(back.clone());
        let mut b = CpBuilder::new(hyps);
        let neg = b.need(&neg_c)?;
        b.emit_negclause(neg, &rule.c)?;
        b.emit_resolution(&pi)?;
        for d in gamma.iter() {
            let g = clause_to_pb(d).substitute(&rule.omega);
            if g.is_tautology() || b.has(&g) {
                continue;
            }
            let from = b.need(&clause_to_pb(&d.substitute(&rule.omega)))?;
            b.weaken(from, &g)?;
        }
        let mut alloc = VarAlloc::starting_at(rule.gadget.first_aux);
        let strict = LexGadget::new(&xw, &x, true, true, &mut alloc)?;
        let l = derive_l_strict(&mut b, &strict)?;
        let forward = linear_order_constraint(&coeffs, &xw, &x);
        b.weaken(l, &forward)?;
        let proof: CpWitness = b.clone().into_witness();
        let back_step = b.need(&back)?;
        let bottom = b.add(l, 1, back_step, 1);
        debug_assert!(b.fact(bottom).is_contradiction());
        let refute = b.into_witness();
        self.emit(DomStep::Dominance {
            c: c_pb.clone(),
            omega: rule.omega.clone(),
            proof,
            refute,
        });
        self.commit([c_pb]);
        self.emit(DomStep::OrderChange {
            order: OrderSpec::top(),
            zvars: vec![],
        });
        Ok(())
    }

    pub fn finish(self, input: PbFormula) -> DomProof {
        DomProof {
            input,
            mode: Mode::Linear,
            steps: self.steps,
        }
    }
}

/// The steps for one ER rule application from a configuration whose core
/// is the translated running CNF and whose derived set is empty.
pub fn translate_er_rule(core: &PbFormula, pi: &ErDerivation) -> Result<Vec<DomStep>, TranslateError> {
    let mut c = Compiler::new(core.clone());
    c.er_rule(pi)?;
    Ok(c.steps)
}

/// The steps for one dominance rule application.
pub fn translate_dom_rule(gamma: &Cnf, rule: &DomRule) -> Result<Vec<DomStep>, TranslateError> {
    let mut c = Compiler::new(PbFormula::from_cnf(gamma));
    c.dom_rule(gamma, rule)?;
    Ok(c.steps)
}

/// Compiles a checked ER-PLS proof into a linear dominance proof from the
/// translated input.
pub fn erpls_to_lindom(p: &ErplsProof) -> Result<DomProof, TranslateError> {
    let trace = check_erpls(p).map_err(TranslateError::Rejected)?;
    let input = PbFormula::from_cnf(&p.input);
    let mut c = Compiler::new(input.clone());
    for (step, gamma) in p.steps.iter().zip(&trace.cnfs) {
        match step {
            ErplsStep::Er(pi) => c.er_rule(pi)?,
            ErplsStep::Dom(rule) => c.dom_rule(gamma, rule)?,
        }
    }
    Ok(c.finish(input))
}

/// Variables a translation introduces beyond those of the input proof.
pub fn fresh_vars(p: &crate::dominance::DomProof) -> BTreeSet<Var> {
    let input = p.input.vars();
    let mut out = BTreeSet::new();
    for s in &p.steps {
        if let DomStep::Redundance { c, .. } = s {
            out.extend(c.vars().filter(|v| !input.contains(v)));
        }
    }
    out
}
