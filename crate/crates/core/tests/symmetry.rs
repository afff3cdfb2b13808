use domproof::symmetry::asymmetrize;
use domproof::{is_symmetry, Cnf, Lit, Substitution, Var};
use domproof_testkit::fuzz;
use rand::Rng;

/// Every signed permutation of `vars`, the identity included.
fn signed_permutations(vars: &[Var]) -> Vec<Substitution> {
    fn go(vars: &[Var], left: &mut Vec<Var>, acc: &mut Vec<(Var, Lit)>, out: &mut Vec<Substitution>) {
        if acc.len() == vars.len() {
            out.push(Substitution::from_pairs(acc.iter().copied()));
            return;
        }
        for i in 0..left.len() {
            let u = left.remove(i);
            for pos in [true, false] {
                acc.push((vars[acc.len()], Lit::new(u, pos)));
                go(vars, left, acc, out);
                acc.pop();
            }
            left.insert(i, u);
        }
    }
    let mut out = Vec::new();
    go(vars, &mut vars.to_vec(), &mut Vec::new(), &mut out);
    out
}

#[test]
fn asymmetrized_formulas_have_only_the_trivial_symmetry() {
    let mut r = fuzz::rng(21);
    let mut checked = 0;
    while checked < 25 {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=4);
        let f = fuzz::random_cnf(&mut r, n, m, 2);
        let (g, ys) = asymmetrize(&f);
        assert_eq!(ys.len(), f.vars().len());
        let vars: Vec<Var> = g.vars().into_iter().collect();
        let symmetries = signed_permutations(&vars).into_iter().filter(|w| is_symmetry(w, &g)).count();
        assert_eq!(symmetries, 1, "{f:?}");
        checked += 1;
    }
}

#[test]
fn asymmetrizing_keeps_satisfiability() {
    let mut r = fuzz::rng(22);
    for _ in 0..50 {
        let n = r.gen_range(1..=6);
        let m = r.gen_range(1..=12);
        let f: Cnf = fuzz::random_cnf(&mut r, n, m, 3);
        let (g, _) = asymmetrize(&f);
        assert_eq!(domproof::oracle::is_sat(&f).unwrap(), domproof::oracle::is_sat(&g).unwrap());
    }
}
