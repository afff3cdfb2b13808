//! Unsatisfiable CNFs with hand-chosen ER-PLS refutations. Each one adds at
//! least one clause by the dominance rule and ends with a resolution
//! refutation of what it has accumulated.

use domproof::er::ExtAxiom;
use domproof::erpls::{ErplsProof, ErplsStep};
use domproof::{Clause, Cnf, Lit, Substitution, Var};

use crate::{cnf, dom_rule, er_extend, er_refutation, symmetry_rule};

pub struct Entry {
    pub name: &'static str,
    pub proof: ErplsProof,
}

/// Pigeon i in hole j, both from 1.
fn php_var(holes: usize, i: usize, j: usize) -> Var {
    ((i - 1) * holes + j) as Var
}

pub fn php(pigeons: usize, holes: usize) -> Cnf {
    let p = |i, j| php_var(holes, i, j) as i64;
    let mut out = Cnf::new();
    for i in 1..=pigeons {
        out.push(Clause::from_dimacs(&(1..=holes).map(|j| p(i, j)).collect::<Vec<_>>()));
    }
    for j in 1..=holes {
        for i in 1..=pigeons {
            for k in i + 1..=pigeons {
                out.push(Clause::from_dimacs(&[-p(i, j), -p(k, j)]));
            }
        }
    }
    out
}

pub fn php_pigeon_swap(holes: usize, a: usize, b: usize) -> Substitution {
    let mut s = Substitution::identity();
    for j in 1..=holes {
        s.set(php_var(holes, a, j), Lit::Pos(php_var(holes, b, j)));
        s.set(php_var(holes, b, j), Lit::Pos(php_var(holes, a, j)));
    }
    s
}

pub fn php_hole_swap(pigeons: usize, holes: usize, a: usize, b: usize) -> Substitution {
    let mut s = Substitution::identity();
    for i in 1..=pigeons {
        s.set(php_var(holes, i, a), Lit::Pos(php_var(holes, i, b)));
        s.set(php_var(holes, i, b), Lit::Pos(php_var(holes, i, a)));
    }
    s
}

/// Proper colouring of a graph with `k` colours; vertex v has colour c
/// when x((v−1)k + c).
pub fn coloring(vertices: usize, edges: &[(usize, usize)], k: usize) -> Cnf {
    let x = |v: usize, c: usize| ((v - 1) * k + c) as i64;
    let mut out = Cnf::new();
    for v in 1..=vertices {
        out.push(Clause::from_dimacs(&(1..=k).map(|c| x(v, c)).collect::<Vec<_>>()));
    }
    for &(u, v) in edges {
        for c in 1..=k {
            out.push(Clause::from_dimacs(&[-x(u, c), -x(v, c)]));
        }
    }
    out
}

pub fn color_swap(vertices: usize, k: usize, a: usize, b: usize) -> Substitution {
    let mut s = Substitution::identity();
    for v in 1..=vertices {
        let x = |c: usize| ((v - 1) * k + c) as Var;
        s.set(x(a), Lit::Pos(x(b)));
        s.set(x(b), Lit::Pos(x(a)));
    }
    s
}

/// x_i ⊕ x_{i+1} = 1 around a cycle of length n.
pub fn xor_cycle(n: usize) -> Cnf {
    let mut out = Cnf::new();
    for i in 1..=n {
        let (a, b) = (i as i64, (i % n + 1) as i64);
        out.push(Clause::from_dimacs(&[a, b]));
        out.push(Clause::from_dimacs(&[-a, -b]));
    }
    out
}

pub fn flip_all(n: usize) -> Substitution {
    Substitution::from_pairs((1..=n as Var).map(|v| (v, Lit::Neg(v))))
}

pub fn all_four() -> Cnf {
    cnf(&[&[1, 2], &[-1, 2], &[1, -2], &[-1, -2]])
}

type Rule = Box<dyn FnMut(&Cnf) -> ErplsStep>;

/// Applies dominance rules in turn, then refutes.
fn with_rules(input: Cnf, mut rules: Vec<Rule>) -> ErplsProof {
    let mut gamma = input.clone();
    let mut steps = Vec::new();
    for make in rules.iter_mut() {
        let step = make(&gamma);
        gamma = domproof::erpls::apply_step(&gamma, &step).expect("corpus step is valid");
        steps.push(step);
    }
    steps.push(ErplsStep::Er(er_refutation(&gamma).expect("corpus formula is unsatisfiable")));
    ErplsProof { input, steps }
}

fn sym(omega: Substitution) -> Rule {
    Box::new(move |g: &Cnf| ErplsStep::Dom(Box::new(symmetry_rule(g, omega.clone()).expect("symmetry rule"))))
}

fn entry(name: &'static str, input: Cnf, rules: Vec<Rule>) -> Entry {
    Entry {
        name,
        proof: with_rules(input, rules),
    }
}

/// x1 only occurs negatively, so setting it to 0 dominates.
fn pure_negative() -> Cnf {
    cnf(&[&[-1, 2], &[-1, -3], &[2, 3], &[2, -3], &[-2, 3], &[-2, -3]])
}

pub fn corpus() -> Vec<Entry> {
    vec![
        entry("all-four-swap", all_four(), vec![sym(Substitution::swap(1, 2))]),
        entry("php-3-2-holes", php(3, 2), vec![sym(php_hole_swap(3, 2, 1, 2))]),
        entry("php-3-2-pigeons", php(3, 2), vec![sym(php_pigeon_swap(2, 1, 2))]),
        entry("php-4-3-pigeons", php(4, 3), vec![sym(php_pigeon_swap(3, 1, 2))]),
        entry(
            "pure-literal-extension",
            pure_negative(),
            vec![Box::new(|g: &Cnf| {
                let y = g.max_var() + 1;
                let rule = dom_rule(
                    g,
                    Clause::unit(Lit::Neg(1)),
                    Substitution::from_pairs([(1, Lit::Pos(y))]),
                    vec![ExtAxiom::Const { y, value: false }],
                )
                .expect("pure literal rule");
                ErplsStep::Dom(Box::new(rule))
            })],
        ),
        entry(
            "pure-literal-constant",
            pure_negative(),
            vec![Box::new(|g: &Cnf| {
                let rule = dom_rule(
                    g,
                    Clause::unit(Lit::Neg(1)),
                    Substitution::from_pairs([(1, Lit::False)]),
                    Vec::new(),
                )
                .expect("pure literal rule");
                ErplsStep::Dom(Box::new(rule))
            })],
        ),
        entry("xor-triangle-swap", xor_cycle(3), vec![sym(Substitution::swap(1, 2))]),
        entry("xor-5-cycle-flip", xor_cycle(5), vec![sym(flip_all(5))]),
        entry(
            "php-3-2-two-rules",
            php(3, 2),
            vec![sym(php_hole_swap(3, 2, 1, 2)), sym(php_pigeon_swap(2, 2, 3))],
        ),
        entry(
            "triangle-2-colouring",
            coloring(3, &[(1, 2), (2, 3), (1, 3)], 2),
            vec![sym(color_swap(3, 2, 1, 2))],
        ),
        entry(
            "k4-3-colouring",
            coloring(4, &[(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)], 3),
            vec![sym(color_swap(4, 3, 1, 2))],
        ),
        entry(
            "extension-then-swap",
            all_four(),
            vec![
                Box::new(|g: &Cnf| {
                    ErplsStep::Er(er_extend(
                        g,
                        &[ExtAxiom::And {
                            y: 3,
                            u: Lit::Pos(1),
                            v: Lit::Pos(2),
                        }],
                    ))
                }),
                sym(Substitution::swap(1, 2)),
            ],
        ),
    ]
}
