//! One line per acceptance criterion. Exits nonzero if any criterion fails.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::Rng;

use domproof::cp::{check_cp, CpBuilder};
use domproof::dominance::{check_dom_mode, Checker, Configuration, DomProof, DomStep, Mode, OrderSpec};
use domproof::er::{check_er, ExtAxiom};
use domproof::oracle::{config_valid, equisatisfiable, is_sat, lex_le, sat_by_extension, VarOrder};
use domproof::ordering::{derive_L_from_P, gen_L_strict, gen_lex};
use domproof::symmetry::{eval_q1, gen_lex_leader, q1_circuit};
use domproof::translate::{erpls_to_lindom, extension_redundance};
use domproof::{
    clause_to_pb, compose, iterate_substitution, Assignment, Clause, Cnf, LinearSum, Lit, PbConstraint, PbFormula,
    Substitution, Var,
};
use domproof_testkit::corpus::corpus;
use domproof_testkit::fuzz::{self, RuleKind};
use domproof_testkit::{cnf, er_refutation};

/// derive_L_from_P(r) uses at most C·r + D steps.
const LEMMA_C: usize = 83;
const LEMMA_D: isize = -47;
/// Compiled dominance proof size ≤ K_NUM/K_DEN · (ER-PLS size)².
const K_NUM: usize = 1;
const K_DEN: usize = 20;

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome, u64);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn bits_msb(value: u64, vars: &[Var]) -> Vec<(Var, bool)> {
    let r = vars.len();
    vars.iter().enumerate().map(|(i, &v)| (v, value >> (r - 1 - i) & 1 == 1)).collect()
}

fn gadget_semantics() -> Outcome {
    let mut checked = 0;
    for r in 1..=6usize {
        for strict in [false, true] {
            for msb_first in [true, false] {
                let g = gen_lex(r, strict, msb_first).map_err(|e| e.to_string())?;
                let c = g.cnf();
                let xs: Vec<Var> = (1..=r as Var).collect();
                let ys: Vec<Var> = (r as Var + 1..=2 * r as Var).collect();
                let order = |v: &[Var]| -> Vec<Var> {
                    if msb_first {
                        v.to_vec()
                    } else {
                        v.iter().rev().copied().collect()
                    }
                };
                for a in 0..1u64 << r {
                    for b in 0..1u64 << r {
                        let mut fixed = bits_msb(a, &order(&xs));
                        fixed.extend(bits_msb(b, &order(&ys)));
                        let got = sat_by_extension(&c, &Assignment::from_pairs(fixed)).map_err(|e| e.to_string())?;
                        let want = if strict { a < b } else { a <= b };
                        ensure(got == want, || {
                            format!("r={r} strict={strict} msb_first={msb_first} α={a} β={b}: got {got}")
                        })?;
                        checked += 1;
                    }
                }
            }
        }
    }
    Ok(format!("{checked} pairs"))
}

fn strict_sum_derivation() -> Outcome {
    let mut worst = String::new();
    for r in 1..=16usize {
        let d = derive_L_from_P(r).map_err(|e| e.to_string())?;
        check_cp(&d).map_err(|e| format!("r={r}: {e}"))?;
        ensure(d.goals.contains(&gen_L_strict(r).unwrap()), || format!("r={r}: goal is not L_<"))?;
        let bound = (LEMMA_C * r) as isize + LEMMA_D;
        ensure(d.steps.len() as isize <= bound, || format!("r={r}: {} steps > {bound}", d.steps.len()))?;
        worst = format!("r=16: {} steps", d.steps.len());
    }
    Ok(format!("steps ≤ {LEMMA_C}r{LEMMA_D}, {worst}"))
}

fn random_order(r: &mut fuzz::Rng, vars: &[Var]) -> (OrderSpec, Vec<Var>) {
    let k = r.gen_range(0..=vars.len());
    let z = vars[..k].to_vec();
    (OrderSpec::lex(k), z)
}

fn extension_gadgets() -> Outcome {
    let mut r = fuzz::rng(3);
    let mut kinds: HashMap<&str, usize> = HashMap::new();
    for i in 0..50 {
        let n = r.gen_range(2..=7);
        let m = r.gen_range(0..6);
        let e = fuzz::random_pb_formula(&mut r, n, m);
        let vars: Vec<Var> = (1..=n).collect();
        let y = n + 1;
        let u = fuzz::random_lit(&mut r, n);
        let v = fuzz::random_lit(&mut r, n);
        let (order, zvars) = random_order(&mut r, &vars);
        for ax in [
            ExtAxiom::And { y, u, v },
            ExtAxiom::Alias { y, u },
            ExtAxiom::Const { y, value: i % 2 == 0 },
        ] {
            let steps = extension_redundance(&e, &ax, &order, &zvars).map_err(|e| format!("context {i}: {e}"))?;
            let cfg = Configuration {
                core: e.clone(),
                derived: PbFormula::new(),
                order: order.clone(),
                zvars: zvars.clone(),
            };
            let mut ch = Checker::from_config(cfg, Mode::Linear);
            for s in &steps {
                ch.apply(s).map_err(|err| format!("context {i}, {ax:?}: {err}"))?;
            }
            let name = match ax {
                ExtAxiom::And { .. } => "and",
                ExtAxiom::Alias { .. } => "alias",
                ExtAxiom::Const { .. } => "const",
            };
            *kinds.entry(name).or_default() += 1;
            if let ExtAxiom::And { .. } = ax {
                let DomStep::Redundance { c, omega, .. } = &steps[0] else {
                    return Err("first step is not a redundance step".into());
                };
                let a = clause_to_pb(&Clause::new([!u, !v, Lit::Pos(y)]));
                ensure(*c == a, || format!("context {i}: first constraint is {c}"))?;
                let mut want = LinearSum::new();
                want.add_constant(2).add_lit(-1, v);
                let want = if u.var() == v.var() {
                    a.substitute(omega)
                } else {
                    want.ge(1)
                };
                ensure(a.substitute(omega) == want, || format!("context {i}: A↾σ is {}", a.substitute(omega)))?;
            }
        }
    }
    Ok(format!("50 contexts, {} and / {} alias / {} const accepted", kinds["and"], kinds["alias"], kinds["const"]))
}

fn end_to_end() -> Outcome {
    let entries = corpus();
    let mut worst = 0.0f64;
    for e in &entries {
        let vars = e.proof.input.vars().len();
        ensure(vars <= 12, || format!("{}: {vars} variables", e.name))?;
        ensure(!is_sat(&e.proof.input).unwrap(), || format!("{} is satisfiable", e.name))?;
        let dom_rules = e
            .proof
            .steps
            .iter()
            .filter(|s| matches!(s, domproof::erpls::ErplsStep::Dom(_)))
            .count();
        ensure(dom_rules >= 1, || format!("{} has no dominance rule", e.name))?;
        domproof::erpls::check_erpls(&e.proof).map_err(|r| format!("{}: {r}", e.name))?;
        let d = erpls_to_lindom(&e.proof).map_err(|r| format!("{}: {r}", e.name))?;
        check_dom_mode(&d, Mode::Linear).map_err(|r| format!("{}: {r}", e.name))?;
        let n = e.proof.size();
        ensure(d.size() * K_DEN <= K_NUM * n * n, || format!("{}: size {} for input size {n}", e.name, d.size()))?;
        worst = worst.max(d.size() as f64 / (n * n) as f64);
    }
    Ok(format!(
        "{} proofs, max size/input² = {worst:.4} ≤ K = {}",
        entries.len(),
        K_NUM as f64 / K_DEN as f64
    ))
}

#[derive(Default)]
struct Tally {
    accepted: usize,
    refutations: usize,
    mutants: usize,
    rejected: usize,
    broken: usize,
}

fn soundness_er(r: &mut fuzz::Rng, t: &mut Tally) -> Result<(), String> {
    let n = r.gen_range(3..=10);
    let m = r.gen_range(4..=40);
    let input = fuzz::random_cnf(r, n, m, 3);
    let unsat = !is_sat(&input).unwrap();
    let pi = match er_refutation(&input).filter(|_| unsat && r.gen_bool(0.7)) {
        Some(p) => p,
        None => {
            let steps = r.gen_range(1..30);
            fuzz::random_er(r, &input, n, steps, true)
        }
    };
    check_er(&pi).map_err(|e| format!("generated ER derivation rejected: {e}"))?;
    t.accepted += 1;
    ensure(fuzz::er_claims_hold(&pi), || "accepted ER derivation with a false conclusion".into())?;
    if pi.conclusions.contains_empty() {
        t.refutations += 1;
        ensure(unsat, || "ER refutation of a satisfiable formula".into())?;
    }
    for _ in 0..3 {
        let mut mu = fuzz::mutate_er(r, &pi);
        if r.gen_bool(0.2) && mu.premises.len() > 1 {
            let drop = mu.premises.get(r.gen_range(0..mu.premises.len())).unwrap().clone();
            mu.premises = mu.premises.iter().filter(|c| **c != drop).cloned().collect();
        }
        t.mutants += 1;
        let ok = check_er(&mu).is_ok();
        t.rejected += usize::from(!ok);
        if !fuzz::er_claims_hold(&mu) {
            t.broken += 1;
            ensure(!ok, || format!("broken ER mutation accepted: {mu:?}"))?;
        }
    }
    Ok(())
}

fn soundness_cp(r: &mut fuzz::Rng, t: &mut Tally) -> Result<(), String> {
    let n = r.gen_range(3..=10);
    let pi = if r.gen_bool(0.5) {
        let m = r.gen_range(4..=40);
        let input = fuzz::random_cnf(r, n, m, 3);
        match er_refutation(&input).filter(|_| !is_sat(&input).unwrap()) {
            Some(res) => domproof::cp::res_to_cp(&res).map_err(|e| e.to_string())?,
            None => fuzz::random_cp(r, &PbFormula::from_cnf(&input), n, 20),
        }
    } else {
        let m = r.gen_range(1..=6);
        let hyps = fuzz::random_pb_formula(r, n, m);
        let steps = r.gen_range(1..30);
        fuzz::random_cp(r, &hyps, n, steps)
    };
    check_cp(&pi).map_err(|e| format!("generated CP derivation rejected: {e}"))?;
    t.accepted += 1;
    ensure(fuzz::cp_claims_hold(&pi), || "accepted CP derivation with a false goal".into())?;
    if pi.goals.iter().any(|g| g.is_contradiction()) {
        t.refutations += 1;
        ensure(!is_sat(&pi.hyps).unwrap(), || "CP refutation of satisfiable hypotheses".into())?;
    }
    for _ in 0..3 {
        let mu = fuzz::mutate_cp(r, &pi);
        t.mutants += 1;
        let ok = check_cp(&mu).is_ok();
        t.rejected += usize::from(!ok);
        if !fuzz::cp_claims_hold(&mu) {
            t.broken += 1;
            ensure(!ok, || format!("broken CP mutation accepted: {mu:?}"))?;
        }
    }
    Ok(())
}

/// A random CNF, closed under a random involution half of the time so that
/// dominance steps have symmetries to use.
fn dom_input(r: &mut fuzz::Rng, max_vars: Var) -> Cnf {
    let n = r.gen_range(2..=max_vars);
    let m = r.gen_range(2..=12);
    let base = fuzz::random_cnf(r, n, m, 3);
    if r.gen_bool(0.5) {
        fuzz::close_under(&base, &fuzz::random_involution(r, n))
    } else {
        base
    }
}

fn first_rejected(p: &DomProof, mode: Mode) -> Option<usize> {
    let mut ch = Checker::new(p.input.clone(), mode);
    p.steps.iter().position(|s| ch.apply(s).is_err())
}

fn soundness_dom(r: &mut fuzz::Rng, mode: Mode, t: &mut Tally) -> Result<(), String> {
    let input = dom_input(r, 6);
    let sat = is_sat(&input).unwrap();
    let p = fuzz::random_dom_proof(r, &input, mode, 8);
    ensure(first_rejected(&p, mode).is_none(), || "generated dominance step rejected".into())?;
    t.accepted += 1;
    ensure(fuzz::first_invalid_step(&p, mode).is_none(), || {
        format!("accepted dominance steps lost validity: {:?}", p.steps)
    })?;
    if check_dom_mode(&p, mode).is_ok() {
        t.refutations += 1;
        ensure(!sat, || "dominance refutation of a satisfiable formula".into())?;
    }
    for _ in 0..3 {
        let mu = fuzz::mutate_dom(r, &p);
        t.mutants += 1;
        t.rejected += usize::from(first_rejected(&mu, mode).is_some());
        if let Some(bad) = fuzz::first_invalid_step(&mu, mode) {
            t.broken += 1;
            let rej = first_rejected(&mu, mode);
            ensure(rej.is_some_and(|k| k <= bad), || {
                format!("mutation invalidates step {bad} but the checker first rejects {rej:?}: {:?}", mu.steps[bad])
            })?;
        }
        if check_dom_mode(&mu, mode).is_ok() {
            ensure(!sat, || "mutated dominance proof refutes a satisfiable formula".into())?;
        }
    }
    Ok(())
}

fn soundness() -> Outcome {
    let mut r = fuzz::rng(5);
    let mut er = Tally::default();
    let mut cp = Tally::default();
    let mut dom = Tally::default();
    for i in 0..1000 {
        match i % 6 {
            0 | 1 => soundness_er(&mut r, &mut er)?,
            2 | 3 => soundness_cp(&mut r, &mut cp)?,
            4 => soundness_dom(&mut r, [Mode::Full, Mode::Linear, Mode::WeakLinear][i / 6 % 3], &mut dom)?,
            _ => soundness_dom(&mut r, [Mode::Linear, Mode::WeakLinear, Mode::Full][i / 6 % 3], &mut dom)?,
        }
    }
    let show = |t: &Tally| {
        format!(
            "{} accepted ({} refutations), {}/{} mutants rejected, {} false claims",
            t.accepted, t.refutations, t.rejected, t.mutants, t.broken
        )
    };
    Ok(format!("ER {}; CP {}; dominance {}", show(&er), show(&cp), show(&dom)))
}

fn validity() -> Outcome {
    let mut r = fuzz::rng(6);
    let mut count: HashMap<RuleKind, usize> = HashMap::new();
    let done = |c: &HashMap<RuleKind, usize>| RuleKind::ALL.iter().all(|k| c.get(k).copied().unwrap_or(0) >= 100);
    let start = Instant::now();
    while !done(&count) {
        if start.elapsed() > Duration::from_secs(50) {
            return Err(format!("only {count:?} applications found"));
        }
        let input = dom_input(&mut r, 6);
        if !is_sat(&input).unwrap() {
            continue;
        }
        let mode = if r.gen_bool(0.5) { Mode::Linear } else { Mode::Full };
        let mut ch = Checker::new(PbFormula::from_cnf(&input), mode);
        for _ in 0..12 {
            let kind = *RuleKind::ALL
                .iter()
                .min_by_key(|k| (count.get(k).copied().unwrap_or(0), r.gen_range(0..6)))
                .unwrap();
            let kind = if r.gen_bool(0.5) { kind } else { RuleKind::ALL[r.gen_range(0..6)] };
            let Some(cands) = fuzz::gen_rule(&mut r, ch.config(), kind) else {
                continue;
            };
            let mut trial = ch.clone();
            let mut after = Vec::new();
            if cands.iter().all(|s| {
                let ok = trial.apply(s).is_ok();
                after.push(trial.config().clone());
                ok
            }) {
                let vars = trial.config().core.vars().len().max(trial.config().derived.vars().len());
                if vars > 8 {
                    continue;
                }
                for (s, cfg) in cands.iter().zip(&after) {
                    let valid = config_valid(cfg).map_err(|e| e.to_string())?;
                    ensure(valid, || format!("{} broke validity: {s:?}", s.rule()))?;
                    *count.entry(RuleKind::of(s)).or_default() += 1;
                }
                ch = trial;
            }
        }
    }
    let mut parts: Vec<String> = RuleKind::ALL.iter().map(|k| format!("{k:?} {}", count[k])).collect();
    parts.sort();
    Ok(parts.join(", "))
}

fn same_on(a: &Substitution, b: &Substitution, n: Var) -> bool {
    (1..=n).all(|v| a.get(v) == b.get(v))
}

/// ω^m(x_v) by walking x_v, ω(x_v), ω²(x_v), … until a literal repeats.
fn orbit_power(omega: &Substitution, v: Var, m: u128) -> Lit {
    let mut seq = vec![Lit::Pos(v)];
    let mut first: HashMap<Lit, usize> = HashMap::from([(Lit::Pos(v), 0)]);
    loop {
        let next = omega.apply(*seq.last().unwrap());
        if let Some(&k) = first.get(&next) {
            let len = (seq.len() - k) as u128;
            let idx = if m < k as u128 { m } else { k as u128 + (m - k as u128) % len };
            return seq[idx as usize];
        }
        first.insert(next, seq.len());
        seq.push(next);
    }
}

fn iterated_substitutions() -> Outcome {
    let mut families = 0usize;
    let check = |omega: &Substitution, n: Var| -> Result<(), String> {
        let mut naive = Substitution::identity();
        for m in 0..=100u32 {
            let fast = iterate_substitution(omega, &BigUint::from(m));
            ensure(same_on(&fast, &naive, n), || format!("ω={omega} m={m}"))?;
            naive = compose(&naive, omega);
        }
        Ok(())
    };
    for n in 1..=4u32 {
        let images: Vec<Lit> = [Lit::False, Lit::True]
            .into_iter()
            .chain((1..=n).flat_map(|v| [Lit::Pos(v), Lit::Neg(v)]))
            .collect();
        let k = images.len();
        for code in 0..k.pow(n) {
            let omega = Substitution::from_pairs((1..=n).map(|v| (v, images[code / k.pow(v - 1) % k])));
            check(&omega, n)?;
            families += 1;
        }
    }
    let mut r = fuzz::rng(7);
    for _ in 0..3000 {
        let omega = fuzz::random_substitution(&mut r, 5, 0.15);
        check(&omega, 5)?;
        families += 1;
    }
    // 2^64 on 1000 variables, against a walk along each variable's orbit
    let mut vars: Vec<Var> = (1..=1000).collect();
    use rand::seq::SliceRandom;
    vars.shuffle(&mut r);
    let perm = Substitution::from_pairs((1..=1000).zip(vars.iter().map(|&u| Lit::new(u, r.gen_bool(0.7)))));
    let general = fuzz::random_substitution(&mut r, 1000, 0.01);
    let m = BigUint::from(1u8) << 64;
    let mut took = Duration::ZERO;
    for omega in [&perm, &general] {
        let t = Instant::now();
        let fast = iterate_substitution(omega, &m);
        took = took.max(t.elapsed());
        for v in 1..=1000 {
            let want = orbit_power(omega, v, 1u128 << 64);
            ensure(fast.get(v) == want, || format!("ω^(2^64) wrong at x{v}"))?;
        }
    }
    ensure(took < Duration::from_secs(1), || format!("2^64 took {took:?}"))?;
    Ok(format!("{families} substitutions × m ≤ 100, 2^64 power of 1000 variables in {took:?}"))
}

fn q1_semantics() -> Outcome {
    let mut r = fuzz::rng(8);
    let mut done = 0;
    let mut models_checked = 0;
    while done < 20 {
        let n = r.gen_range(2..=8);
        let m = r.gen_range(1..=4);
        let (g, omega) = fuzz::symmetric_cnf(&mut r, n, m, 3);
        if !is_sat(&g).unwrap() {
            continue;
        }
        let order = VarOrder::natural(1..=n);
        let leader = gen_lex_leader(&g, &omega, &order).map_err(|e| e.to_string())?;
        let both = g.union(&leader);
        // Γ ⊆ Γ ∪ leader, so a model of the union from any model of Γ makes them equisatisfiable
        let small = both.vars().len() <= 20;
        if small {
            ensure(equisatisfiable(&g, &both).unwrap(), || format!("leader changes satisfiability of {g:?}"))?;
        }
        let mut witnessed = small;
        let c = q1_circuit(&g, &omega, &order).map_err(|e| e.to_string())?;
        for bits in 0..1u64 << n {
            let alpha = Assignment::from_pairs((1..=n).map(|v| (v, bits >> (v - 1) & 1 == 1)));
            if !alpha.satisfies(&g) {
                continue;
            }
            let beta = eval_q1(&c, &order, &alpha);
            ensure(beta.satisfies(&g), || format!("output {beta} does not satisfy Γ"))?;
            ensure(lex_le(&beta, &beta.compose_subst(&omega), &order), || format!("output {beta} is above its image"))?;
            ensure(sat_by_extension(&leader, &beta).unwrap(), || format!("output {beta} violates the leader"))?;
            witnessed |= sat_by_extension(&both, &beta).unwrap();
            models_checked += 1;
        }
        ensure(witnessed, || format!("no model of Γ ∪ leader found for {g:?}"))?;
        done += 1;
    }
    Ok(format!("20 formulas, {models_checked} models"))
}

fn weak_mode() -> Outcome {
    let mut rejected = 0;
    let mut accepted_empty = 0;
    // compiled corpus proofs
    for e in corpus() {
        let d = erpls_to_lindom(&e.proof).map_err(|err| err.to_string())?;
        let mut ch = Checker::new(d.input.clone(), Mode::Linear);
        for s in &d.steps {
            if matches!(s, DomStep::Dominance { .. }) {
                let mut weak = Checker::from_config(ch.config().clone(), Mode::WeakLinear);
                let res = weak.apply(s);
                if ch.config().derived.is_empty() {
                    ensure(res.is_ok(), || format!("{}: weak mode rejects dominance with D = ∅", e.name))?;
                    accepted_empty += 1;
                } else {
                    ensure(res.is_err(), || format!("{}: weak mode accepts dominance with D ≠ ∅", e.name))?;
                    rejected += 1;
                }
            }
            ch.apply(s).map_err(|err| format!("{}: {err}", e.name))?;
        }
        ensure(check_dom_mode(&d, Mode::Linear).is_ok(), || format!("{}: linear mode rejects", e.name))?;
    }
    // hand-built: x1 ∨ x2 under the swap, with and without a derived constraint
    let input = PbFormula::from_cnf(&cnf(&[&[1, 2]]));
    let c = clause_to_pb(&Clause::from_dimacs(&[-1, 2]));
    let omega = Substitution::swap(1, 2);
    let neg = c.negate();
    let order = OrderSpec::lex(2);
    let z = [Lit::Pos(1), Lit::Pos(2)];
    let zw = [Lit::Pos(2), Lit::Pos(1)];
    let fwd = order.instantiate(&zw, &z).unwrap();
    let back = order.instantiate(&z, &zw).unwrap();
    let mut b1 = CpBuilder::new(vec![neg.clone()]);
    let h = b1.hyp(0);
    for g in fwd.iter() {
        b1.weaken(h, g).map_err(|e| e.to_string())?;
    }
    let mut hyps = vec![neg];
    hyps.extend(back.iter().cloned());
    let mut b2 = CpBuilder::new(hyps);
    let (h0, h1) = (b2.hyp(0), b2.hyp(1));
    let s = b2.add(h0, 1, h1, 1);
    b2.weaken(s, &PbConstraint::contradiction()).map_err(|e| e.to_string())?;
    let dom = DomStep::Dominance {
        c,
        omega,
        proof: b1.into_witness(),
        refute: b2.into_witness(),
    };
    let order_step = DomStep::OrderChange {
        order,
        zvars: vec![1, 2],
    };
    let mut bi = CpBuilder::new(input.iter().cloned().collect());
    let h = bi.hyp(0);
    let twice = bi.add(h, 2, h, 0);
    let derived = DomStep::Impl {
        c: bi.fact(twice).clone(),
        proof: bi.into_witness(),
    };
    let run = |steps: &[&DomStep], mode: Mode| -> Result<(), String> {
        let mut ch = Checker::new(input.clone(), mode);
        for s in steps {
            ch.apply(s)?;
        }
        Ok(())
    };
    ensure(run(&[&order_step, &derived, &dom], Mode::Linear).is_ok(), || "linear mode rejects D ≠ ∅ case".into())?;
    ensure(run(&[&order_step, &derived, &dom], Mode::WeakLinear).is_err(), || "weak mode accepts D ≠ ∅ case".into())?;
    ensure(run(&[&order_step, &dom], Mode::WeakLinear).is_ok(), || "weak mode rejects D = ∅ case".into())?;
    let clear = DomStep::Deletion {
        derived: domproof::dominance::Removal::All,
        core: None,
    };
    ensure(run(&[&order_step, &derived, &clear, &dom], Mode::WeakLinear).is_ok(), || {
        "weak mode rejects after clearing D".into()
    })?;
    Ok(format!(
        "corpus: {rejected} dominance steps with D ≠ ∅ rejected, {accepted_empty} with D = ∅ accepted; 4 directed cases"
    ))
}

fn main() {
    let criteria: [Criterion; 9] = [
        ("1 gadget semantics r=1..6", gadget_semantics, 10),
        ("2 L_< from P_< for r=1..16", strict_sum_derivation, 5),
        ("3 extension-axiom redundance", extension_gadgets, 5),
        ("4 ER-PLS corpus to linear dominance", end_to_end, 60),
        ("5 soundness on 1000 fuzzed proofs", soundness, 120),
        ("6 validity preserved by each rule", validity, 60),
        ("7 iterated substitutions", iterated_substitutions, 30),
        ("8 circuit for a single lex-leader", q1_semantics, 30),
        ("9 weak linear mode", weak_mode, 5),
    ];
    let mut failed = 0;
    for (name, f, limit) in criteria {
        let t = Instant::now();
        let out = f();
        let took = t.elapsed();
        let out = match out {
            Ok(detail) if took > Duration::from_secs(limit) => Err(format!("{detail}; took {took:?} > {limit}s")),
            other => other,
        };
        match out {
            Ok(detail) => println!("PASS  {name:40} {took:>10.2?}  {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  {name:40} {took:>10.2?}  {why}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
