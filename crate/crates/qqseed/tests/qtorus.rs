mod common;

use proptest::prelude::*;
use qqseed::cluster::{ClusterSeed, MotzkinPath};
use qqseed::oracle::classical::CPoly;
use qqseed::qcoeff::QLaurent;
use qqseed::qtorus::{comm_exponent, exact_div_left, exact_div_right, normal_mul, TermOrder, TorusElem};
use qqseed::Error;

fn rank_one() -> ClusterSeed {
    ClusterSeed::new(MotzkinPath::flat(1))
}

#[test]
fn rank_one_relations() {
    let seed = rank_one();
    let f = seed.form();
    let (a, b) = (TorusElem::generator(f, 0, 1), TorusElem::generator(f, 1, 1));
    // x_0 x_1 = q^{λ_01} x_1 x_0 with λ_01 = 1 for rank one
    assert_eq!(&a * &b, (&b * &a).shift_q(comm_exponent(&[1, 0], &[0, 1], f)));
    assert_eq!(comm_exponent(&[1, 0], &[0, 1], f), f.entry(0, 1));
    let inv = a.inverse_monomial().unwrap();
    assert!((&a * &inv).is_one() && (&inv * &a).is_one());
    assert_eq!(a.pow(-2).unwrap(), inv.pow(2).unwrap());
}

#[test]
fn frozen_product() {
    let seed = rank_one();
    let f = seed.form();
    let y1 = TorusElem::monomial(f, vec![-1, 1], QLaurent::q_pow(1));
    let y2 = TorusElem::monomial(f, vec![-1, -1], QLaurent::q_pow(-1));
    let want = &TorusElem::monomial(f, vec![-2, 2], QLaurent::q_pow(3)) + &TorusElem::monomial(f, vec![-2, 0], QLaurent::q_pow(-1));
    assert_eq!(&(&y1 + &y2) * &y1, want);
}

#[test]
fn division_failures() {
    let seed = rank_one();
    let f = seed.form();
    let x = &TorusElem::generator(f, 0, 1) + &TorusElem::one(f);
    let y = &TorusElem::generator(f, 1, 1) + &TorusElem::one(f);
    assert!(matches!(exact_div_right(&x, &y, TermOrder::Lex), Err(Error::NotDivisible(_))));
    assert!(TorusElem::zero(f).inverse_monomial().is_err());
    let other = ClusterSeed::new(MotzkinPath::flat(2));
    assert_eq!(normal_mul(&x, &TorusElem::one(other.form())), Err(Error::MismatchedForms));
}

#[test]
fn serde_shape() {
    let seed = rank_one();
    let x = TorusElem::monomial(seed.form(), vec![-1, 2], QLaurent::q_pow(1));
    assert_eq!(serde_json::to_string(&x).unwrap(), r#"[{"exponents":[-1,2],"coeff":[[1,"1"]]}]"#);
    let back = TorusElem::from_repr(seed.form(), &x.to_repr());
    assert_eq!(back, x);
}

proptest! {
    #![proptest_config(common::config(150))]

    #[test]
    fn associativity((_, v) in common::elements(3)) {
        let l = normal_mul(&normal_mul(&v[0], &v[1]).unwrap(), &v[2]).unwrap();
        let r = normal_mul(&v[0], &normal_mul(&v[1], &v[2]).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn commutation_contract((f, a, b) in prop::sample::select(common::forms()).prop_flat_map(|f| {
        let d = f.dim();
        (Just(f), prop::collection::vec(-3i64..=3, d), prop::collection::vec(-3i64..=3, d))
    })) {
        let xa = TorusElem::monomial(&f, a.clone(), QLaurent::one());
        let xb = TorusElem::monomial(&f, b.clone(), QLaurent::one());
        prop_assert_eq!(&xa * &xb, (&xb * &xa).shift_q(comm_exponent(&a, &b, &f)));
    }

    #[test]
    fn right_division_round_trip((_, v) in common::elements(2)) {
        prop_assume!(!v[1].is_zero());
        let n = &v[0] * &v[1];
        for order in [TermOrder::Lex, TermOrder::GradedLex] {
            prop_assert_eq!(exact_div_right(&n, &v[1], order).unwrap(), v[0].clone());
        }
    }

    #[test]
    fn left_division_round_trip((_, v) in common::elements(2)) {
        prop_assume!(!v[1].is_zero());
        let n = &v[1] * &v[0];
        prop_assert_eq!(exact_div_left(&n, &v[1], TermOrder::Lex).unwrap(), v[0].clone());
    }

    #[test]
    fn monomial_inverse_is_two_sided(x in prop::sample::select(common::forms()).prop_flat_map(common::monomial)) {
        let inv = x.inverse_monomial().unwrap();
        prop_assert!((&x * &inv).is_one());
        prop_assert!((&inv * &x).is_one());
    }

    #[test]
    fn q_one_is_commutative((_, v) in common::elements(2)) {
        let prod = CPoly((&v[0] * &v[1]).eval_q1());
        prop_assert_eq!(prod, CPoly(v[0].eval_q1()).mul(&CPoly(v[1].eval_q1())));
    }
}
