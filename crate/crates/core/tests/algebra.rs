use num_bigint::BigUint;
use proptest::prelude::*;

use domproof::{clause_to_pb, compose, iterate_substitution, Assignment, Clause, Cnf, Lit, Substitution, Var};

const N: Var = 5;

fn lit_of(code: u8) -> Lit {
    match code {
        0 => Lit::False,
        1 => Lit::True,
        c => Lit::new(u32::from(c - 2) / 2 + 1, c % 2 == 0),
    }
}

fn subst() -> impl Strategy<Value = Substitution> {
    prop::collection::vec(0u8..(2 + 2 * N as u8), N as usize)
        .prop_map(|codes| Substitution::from_pairs(codes.into_iter().enumerate().map(|(i, c)| (i as Var + 1, lit_of(c)))))
}

fn clause() -> impl Strategy<Value = Clause> {
    prop::collection::vec(2u8..(2 + 2 * N as u8), 0..4).prop_map(|cs| Clause::new(cs.into_iter().map(lit_of)))
}

fn cnf() -> impl Strategy<Value = Cnf> {
    prop::collection::vec(clause(), 0..6).prop_map(|cs| cs.into_iter().collect())
}

fn assignment() -> impl Strategy<Value = Assignment> {
    prop::collection::vec(any::<bool>(), N as usize)
        .prop_map(|bs| Assignment::from_pairs(bs.into_iter().enumerate().map(|(i, b)| (i as Var + 1, b))))
}

fn same(a: &Substitution, b: &Substitution) -> bool {
    (1..=N).all(|v| a.get(v) == b.get(v))
}

proptest! {
    #[test]
    fn composition_is_associative(a in subst(), b in subst(), c in subst()) {
        prop_assert!(same(&compose(&compose(&a, &b), &c), &compose(&a, &compose(&b, &c))));
    }

    #[test]
    fn powers_add(w in subst(), m in 0u32..300, k in 0u32..300) {
        let p = |e: u32| iterate_substitution(&w, &BigUint::from(e));
        prop_assert!(same(&p(m + k), &compose(&p(m), &p(k))));
    }

    #[test]
    fn restriction_matches_composed_assignment(f in cnf(), w in subst(), a in assignment()) {
        prop_assert_eq!(a.satisfies(&f.substitute(&w)), a.compose_subst(&w).satisfies(&f));
    }

    #[test]
    fn clause_translation_and_negation(c in clause(), a in assignment()) {
        let pb = clause_to_pb(&c);
        let value = |v: Var| a.value(v);
        prop_assert_eq!(pb.eval(value), c.eval(value));
        prop_assert_eq!(pb.negate().eval(value), !c.eval(value));
        prop_assert_eq!(pb.substitute(&Substitution::identity()), pb.clone());
    }
}
