mod common;

use std::time::Instant;

use proptest::prelude::*;
use qqseed::cfrac::{
    ascending_segments, expand_continued_fraction, f_from_g, jacobi_form, mixed_form, path_partition,
    rearrangement_sides, series_inverse, stieltjes, TSeries,
};
use qqseed::cluster::{enumerate_fundamental, ClusterSeed, MotzkinPath};
use qqseed::qcoeff::QLaurent;
use qqseed::qtorus::TorusElem;
use qqseed::weights::{hat_weights, weights_explicit, WeightVector};

fn setup(m: &MotzkinPath) -> WeightVector {
    weights_explicit(&ClusterSeed::new(m.clone()))
}

fn g_of(m: &MotzkinPath, n: usize) -> (WeightVector, TSeries) {
    let y = setup(m);
    let g = expand_continued_fraction(m, &y, &hat_weights(&y, m), n).unwrap();
    (y, g)
}

#[test]
fn rank_one_by_hand() {
    let m = MotzkinPath::flat(1);
    let (y, g) = g_of(&m, 2);
    assert!(g.coeff(0).is_one());
    assert_eq!(g.coeff(1), &(y.y(1) + y.y(2)));
    let f = f_from_g(&g, y.y(1));
    let form = y.seed().form();
    let want = &TorusElem::monomial(form, vec![-2, 2], QLaurent::q_pow(3)) + &TorusElem::monomial(form, vec![-2, 0], QLaurent::q_pow(-1));
    assert_eq!(f.coeff(2), &want);
    assert!(f.coeff(0).is_one());
    assert_eq!(f.coeff(1), y.y(1));
}

#[test]
fn jacobi_and_mixed_agree() {
    let t = Instant::now();
    for r in 1..=3 {
        for m in enumerate_fundamental(r) {
            if ascending_segments(&m).is_empty() {
                continue;
            }
            let y = setup(&m);
            let yh = hat_weights(&y, &m);
            assert_eq!(jacobi_form(&yh, 6).unwrap(), mixed_form(&m, &y, &yh, 6).unwrap(), "{m}");
        }
    }
    eprintln!("jacobi vs mixed: {:.1?}", t.elapsed());
}

#[test]
fn ascending_path_is_a_stieltjes_fraction() {
    for r in 1..=3 {
        let m = MotzkinPath::ascending(r);
        let (y, g) = g_of(&m, 6);
        let xs: Vec<TSeries> = (1..=2 * r + 1).map(|j| TSeries::monomial(y.y(j), 1, 6)).collect();
        assert_eq!(f_from_g(&g, y.y(1)), stieltjes(&xs).unwrap(), "r={r}");
    }
}

#[test]
fn flat_path_nested_form() {
    // r = 2: (1 - ty1 - t(1 - ty3 - t(1 - ty5)^{-1} y4)^{-1} y2)^{-1}
    let m = MotzkinPath::flat(2);
    let (y, g) = g_of(&m, 5);
    let ty = |j| TSeries::monomial(y.y(j), 1, 5);
    let one = TSeries::one(y.seed().form(), 5);
    let j3 = series_inverse(&(&one - &ty(5))).unwrap();
    let j2 = series_inverse(&(&(&one - &ty(3)) - &(&j3 * &ty(4)))).unwrap();
    let j1 = series_inverse(&(&(&one - &ty(1)) - &(&j2 * &ty(2)))).unwrap();
    assert_eq!(g, j1);
}

#[test]
fn walks_match_the_fraction() {
    for r in 1..=2 {
        let m = MotzkinPath::flat(r);
        for n in 0..=5 {
            let (y, g) = g_of(&m, n);
            assert_eq!(path_partition(r, &y, n), g, "r={r}, N={n}");
        }
    }
    let y = setup(&MotzkinPath::flat(1));
    assert!(path_partition(1, &y, 0).coeff(0).is_one());
    assert_eq!(path_partition(1, &y, 1).coeff(1), &(y.y(1) + y.y(2)));
}

#[test]
fn constant_term_must_be_one() {
    let y = setup(&MotzkinPath::flat(1));
    let bad = &TSeries::one(y.seed().form(), 3) + &TSeries::monomial(y.y(1), 0, 3);
    assert!(series_inverse(&bad).is_err());
}

#[test]
fn series_serialization() {
    let y = setup(&MotzkinPath::flat(1));
    let s = TSeries::monomial(y.y(1), 1, 1);
    assert_eq!(
        serde_json::to_string(&s).unwrap(),
        r#"{"order":1,"coeffs":[[],[{"exponents":[-1,1],"coeff":[[1,"1"]]}]]}"#
    );
}

fn series(form: std::sync::Arc<qqseed::qtorus::SkewForm>, order: usize) -> impl Strategy<Value = TSeries> {
    prop::collection::vec(common::element(form), order).prop_map(move |mut cs| {
        let f = cs.first().map(|c: &TorusElem| c.form().clone());
        let form = f.unwrap();
        cs.insert(0, TorusElem::zero(&form));
        TSeries::from_coeffs(cs)
    })
}

proptest! {
    #![proptest_config(common::config(100))]

    #[test]
    fn inverse_is_two_sided(w in prop::sample::select(common::forms()).prop_flat_map(|f| series(f, 4))) {
        let one = TSeries::one(w.form(), 4);
        let u = &one - &w;
        let v = series_inverse(&u).unwrap();
        prop_assert_eq!(&u * &v, one.clone());
        prop_assert_eq!(&v * &u, one);
    }

    #[test]
    fn rearrangement((a, b, c, u) in prop::sample::select(common::forms()).prop_flat_map(|f| {
        (common::monomial(f.clone()), common::monomial(f.clone()), common::monomial(f.clone()), series(f, 6))
    })) {
        let t = |x: &TorusElem| TSeries::monomial(x, 1, 6);
        let (l, r) = rearrangement_sides(&t(&a), &t(&b), &t(&c), &u).unwrap();
        prop_assert_eq!(l, r);
    }
}
