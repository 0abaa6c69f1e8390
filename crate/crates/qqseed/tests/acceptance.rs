//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit if any fail.
//! Runs without the libtest harness so the lines always reach the output.

mod common;

use std::time::Instant;

use num_bigint::BigInt;
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};
use qqseed::cfrac::{expand_continued_fraction, path_partition};
use qqseed::closedform::{
    ascending_product, coeff_a, coeff_a_recursive, flat_product_f, flat_product_g, indices_up_to, Which,
};
use qqseed::cluster::{enumerate_fundamental, ClusterSeed, MotzkinPath};
use qqseed::oracle::classical::rank_one_sequence;
use qqseed::qcoeff::{eval_q1, qmultinomial, Var};
use qqseed::qtorus::{exact_div_left, exact_div_right, normal_mul, TermOrder};
use qqseed::verify::{check_rearrangement, run_verify, series_bundle, SeriesBundle, VerifyConfig};
use qqseed::weights::{hat_weights, weights_explicit};

type Outcome = Result<String, String>;

/// `(rank, order)` pairs of the three-way comparison.
const SERIES_RUNS: [(usize, usize); 3] = [(1, 8), (2, 7), (3, 6)];

struct Bundles(Vec<(MotzkinPath, SeriesBundle)>);

fn bundles() -> Bundles {
    use rayon::prelude::*;
    let jobs: Vec<(MotzkinPath, usize)> = SERIES_RUNS
        .iter()
        .flat_map(|&(r, n)| enumerate_fundamental(r).into_iter().map(move |m| (m, n)))
        .collect();
    Bundles(
        jobs.into_par_iter()
            .map(|(m, n)| {
                let b = series_bundle(&m, n, None).expect("series computation");
                (m, b)
            })
            .collect(),
    )
}

fn criterion_1(b: &Bundles) -> Outcome {
    let sizes: Vec<usize> = (1..=3).map(|r| enumerate_fundamental(r).len()).collect();
    if sizes != [1, 3, 9] {
        return Err(format!("|M_r| = {sizes:?}, expected [1, 3, 9]"));
    }
    for (m, s) in &b.0 {
        for (name, x, y, z) in [
            ("F", &s.closed_f, &s.cfrac_f, &s.oracle_f),
            ("G", &s.closed_g, &s.cfrac_g, &s.oracle_g),
        ] {
            if let Some(d) = x.first_difference(y).or_else(|| y.first_difference(z)) {
                return Err(format!("{name} for {m} differs at t^{d}"));
            }
        }
    }
    Ok(format!("{} paths, orders 8/7/6", b.0.len()))
}

fn criterion_2(b: &Bundles) -> Outcome {
    let mut n = 0;
    for (m, s) in &b.0 {
        let series = [&s.closed_f, &s.closed_g, &s.cfrac_f, &s.cfrac_g, &s.oracle_f, &s.oracle_g];
        for x in series.iter().flat_map(|t| t.coeffs()).chain(s.oracle.cells().map(|(_, x)| x)) {
            if let Some((e, c)) = qqseed::oracle::positivity_check(x).witness {
                return Err(format!("{m}: coefficient {c} at {e:?}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} elements checked"))
}

fn criterion_3() -> Outcome {
    let mut n = 0;
    for r in 1..=3 {
        for (m, flat) in [(MotzkinPath::flat(r), true), (MotzkinPath::ascending(r), false)] {
            for ell in indices_up_to(&m, 6) {
                let (f, g) = if flat {
                    (flat_product_f(r, &ell), flat_product_g(r, &ell))
                } else {
                    (ascending_product(r, &ell, Which::F), ascending_product(r, &ell, Which::G))
                };
                if coeff_a(&m, &ell) != f || coeff_a(&m, &ell.shift_first(1)) != g {
                    return Err(format!("{m} at {:?}", ell.0));
                }
                n += 1;
            }
        }
    }
    Ok(format!("{n} (path, index) pairs"))
}

fn criterion_4() -> Outcome {
    let mut n = 0;
    for m in enumerate_fundamental(3) {
        for ell in indices_up_to(&m, 6) {
            let a = coeff_a(&m, &ell);
            if a != coeff_a_recursive(&m, &ell) {
                return Err(format!("{m} at {:?}", ell.0));
            }
            if !a.is_nonnegative() {
                return Err(format!("negative coefficient A_{m}{:?} = {a}", ell.0));
            }
            n += 1;
        }
    }
    Ok(format!("{n} indices over M_3"))
}

fn only(r: usize, order: usize, checks: &[&str]) -> VerifyConfig {
    let mut cfg = VerifyConfig::new(r, enumerate_fundamental(r), order);
    cfg.skip = qqseed::verify::CHECKS
        .iter()
        .filter(|c| !checks.contains(c))
        .map(|c| c.to_string())
        .collect();
    cfg.q1 = checks.contains(&"classical_limit");
    cfg
}

/// Per check: how many paths passed, and which failed.
fn report_outcome(cfgs: Vec<VerifyConfig>) -> Outcome {
    let mut tally: std::collections::BTreeMap<String, (usize, Vec<String>)> = Default::default();
    for cfg in cfgs {
        for c in run_verify(&cfg).results {
            let e = tally.entry(c.check.clone()).or_default();
            if c.passed {
                e.0 += 1;
            } else {
                e.1.push(c.path.as_ref().map(|p| p.to_string()).unwrap_or_else(|| c.detail.clone()));
            }
        }
    }
    let summary: Vec<String> = tally
        .iter()
        .map(|(name, (ok, bad))| {
            if bad.is_empty() {
                format!("{name} {ok}/{ok}")
            } else {
                format!("{name} {ok}/{} (fails on {})", ok + bad.len(), bad.join(" "))
            }
        })
        .collect();
    if tally.values().all(|(_, bad)| bad.is_empty()) {
        Ok(summary.join(", "))
    } else {
        Err(summary.join(", "))
    }
}

fn criterion_5() -> Outcome {
    report_outcome((1..=3).map(|r| only(r, 0, &["weights_mutation", "comm_quiver"])).collect())
}

fn criterion_6() -> Outcome {
    report_outcome(
        (1..=3)
            .map(|r| only(r, 0, &["compatibility", "quasi_periodicity", "mutation_consistency"]))
            .collect(),
    )
}

fn criterion_7() -> Outcome {
    let seq: Vec<BigInt> = rank_one_sequence(7);
    let want: Vec<BigInt> = [1, 1, 2, 5, 13, 34, 89].into_iter().map(BigInt::from).collect();
    if seq != want {
        return Err(format!("rank-one sequence {seq:?}"));
    }
    report_outcome([(1, 8), (2, 6), (3, 5)].into_iter().map(|(r, n)| only(r, n, &["classical_limit"])).collect())
        .map(|s| format!("1,1,2,5,13,34,89 and {s}"))
}

fn criterion_8() -> Outcome {
    for r in 1..=3 {
        let c = check_rearrangement(r, 6, 128, 0xace + r as u64);
        if !c.passed {
            return Err(format!("rank {r}: {}", c.detail));
        }
    }
    Ok("3 × 128 instances to t^6".into())
}

fn criterion_9() -> Outcome {
    for r in 1..=2 {
        let m = MotzkinPath::flat(r);
        let y = weights_explicit(&ClusterSeed::new(m.clone()));
        for n in 0..=5 {
            let g = expand_continued_fraction(&m, &y, &hat_weights(&y, &m), n).map_err(|e| e.to_string())?;
            if let Some(d) = path_partition(r, &y, n).first_difference(&g) {
                return Err(format!("r={r}, N={n}: differs at t^{d}"));
            }
        }
    }
    Ok("m_0, r ≤ 2, N ≤ 5".into())
}

fn factorial(n: i64) -> BigInt {
    (1..=n).map(BigInt::from).product()
}

fn criterion_10() -> Outcome {
    let cfg = Config {
        cases: 200,
        failure_persistence: None,
        ..Config::default()
    };
    let mut runs = 0;
    let mut run = |name: &str, res: Result<(), String>| -> Result<(), String> {
        runs += 1;
        res.map_err(|e| format!("{name}: {e}"))
    };
    run(
        "associativity",
        TestRunner::new(cfg.clone())
            .run(&common::elements(3), |(_, v)| {
                let l = normal_mul(&normal_mul(&v[0], &v[1]).unwrap(), &v[2]).unwrap();
                let r = normal_mul(&v[0], &normal_mul(&v[1], &v[2]).unwrap()).unwrap();
                prop_assert_eq!(l, r);
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    run(
        "right division",
        TestRunner::new(cfg.clone())
            .run(&common::elements(2), |(_, v)| {
                prop_assume!(!v[1].is_zero());
                let n = normal_mul(&v[0], &v[1]).unwrap();
                prop_assert_eq!(exact_div_right(&n, &v[1], TermOrder::default()).unwrap(), v[0].clone());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    run(
        "left division",
        TestRunner::new(cfg.clone())
            .run(&common::elements(2), |(_, v)| {
                prop_assume!(!v[1].is_zero());
                let n = normal_mul(&v[1], &v[0]).unwrap();
                prop_assert_eq!(exact_div_left(&n, &v[1], TermOrder::default()).unwrap(), v[0].clone());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    run(
        "multinomial at q=1",
        TestRunner::new(cfg)
            .run(&prop::collection::vec(0i64..=4, 1..=4), |parts| {
                prop_assume!(parts.iter().sum::<i64>() <= 8);
                let q = qmultinomial(&parts, Var::Q).unwrap();
                let n: i64 = parts.iter().sum();
                let want = parts.iter().fold(factorial(n), |acc, &a| acc / factorial(a));
                prop_assert_eq!(eval_q1(&q), want);
                prop_assert!(q.is_nonnegative());
                Ok(())
            })
            .map_err(|e| e.to_string()),
    )?;
    Ok(format!("{runs} properties × 200 cases"))
}

fn main() {
    let start = Instant::now();
    let b = bundles();
    eprintln!("series bundles built in {:.1?}", start.elapsed());
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("three-way series equality", Box::new(|| criterion_1(&b))),
        ("positivity", Box::new(|| criterion_2(&b))),
        ("special-case theorems", Box::new(criterion_3)),
        ("A-coefficient consistency", Box::new(criterion_4)),
        ("weight consistency", Box::new(criterion_5)),
        ("cluster compatibility", Box::new(criterion_6)),
        ("commutative limit", Box::new(criterion_7)),
        ("rearrangement identity", Box::new(criterion_8)),
        ("path model", Box::new(criterion_9)),
        ("kernel properties", Box::new(criterion_10)),
    ];
    let mut failed = 0;
    for (k, (name, f)) in criteria.iter().enumerate() {
        let t = Instant::now();
        match f() {
            Ok(msg) => println!("[PASS] criterion {}: {name} — {msg} ({:.1?})", k + 1, t.elapsed()),
            Err(msg) => {
                failed += 1;
                println!("[FAIL] criterion {}: {name} — {msg}", k + 1);
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", criteria.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
