use qqseed::cluster::{enumerate_fundamental, MotzkinPath};
use qqseed::verify::{run_verify, Fault, VerifyConfig};

fn report(r: usize, order: usize) -> qqseed::verify::Report {
    run_verify(&VerifyConfig::new(r, enumerate_fundamental(r), order))
}

#[test]
fn rank_two_everything_but_quasi_periodicity() {
    let rep = report(2, 4);
    for c in &rep.results {
        println!("{:?} {} {} {}", c.path, c.check, c.passed, c.detail);
        if c.check != "quasi_periodicity" {
            assert!(c.passed, "{c:?}");
        }
    }
}

#[test]
fn fault_is_caught() {
    let mut cfg = VerifyConfig::new(1, vec![MotzkinPath::flat(1)], 3);
    cfg.fault = Some(Fault::Weight);
    let rep = run_verify(&cfg);
    let f = rep.first_failure().expect("corrupted weight must fail");
    assert_eq!(f.check, "series_three_way");
    assert!(f.counterexample.is_some());
}
