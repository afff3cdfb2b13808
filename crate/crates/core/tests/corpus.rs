use std::time::Instant;

use domproof::dominance::{check_dom_mode, Mode};
use domproof::erpls::{check_erpls, step_equisat_test};
use domproof::translate::erpls_to_lindom;
use domproof_testkit::corpus::corpus;

#[test]
fn corpus_translates_and_checks() {
    for e in corpus() {
        let t = Instant::now();
        check_erpls(&e.proof).unwrap_or_else(|r| panic!("{}: {r}", e.name));
        assert!(step_equisat_test(&e.proof).unwrap(), "{}", e.name);
        let d = erpls_to_lindom(&e.proof).unwrap_or_else(|r| panic!("{}: {r}", e.name));
        check_dom_mode(&d, Mode::Linear).unwrap_or_else(|r| panic!("{}: {r}", e.name));
        let n = e.proof.input.len() + e.proof.input.vars().len();
        println!(
            "{:24} input {:3} erpls {:6} dom {:8} ratio {:8.2} {:?}",
            e.name,
            n,
            e.proof.size(),
            d.size(),
            d.size() as f64 / (n * n) as f64,
            t.elapsed()
        );
    }
}
