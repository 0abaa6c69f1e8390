#![allow(dead_code)]

use std::sync::Arc;

use proptest::prelude::*;
use qqseed::cluster::{enumerate_fundamental, ClusterSeed};
use qqseed::qcoeff::QLaurent;
use qqseed::qtorus::{SkewForm, TorusElem};

/// Skew forms of every seed with rank ≤ 3.
pub fn forms() -> Vec<Arc<SkewForm>> {
    (1..=3)
        .flat_map(enumerate_fundamental)
        .map(|m| ClusterSeed::new(m).form().clone())
        .collect()
}

pub fn qlaurent() -> impl Strategy<Value = QLaurent> {
    prop::collection::vec((-4i64..=4, -3i64..=3), 0..4).prop_map(QLaurent::from_terms)
}

pub fn unit_coeff() -> impl Strategy<Value = QLaurent> {
    (-4i64..=4, prop::bool::ANY).prop_map(|(k, neg)| QLaurent::monomial(k, if neg { -1 } else { 1 }))
}

pub fn monomial(form: Arc<SkewForm>) -> impl Strategy<Value = TorusElem> {
    let d = form.dim();
    (prop::collection::vec(-2i64..=2, d), unit_coeff()).prop_map(move |(e, c)| TorusElem::monomial(&form, e, c))
}

pub fn element(form: Arc<SkewForm>) -> impl Strategy<Value = TorusElem> {
    let d = form.dim();
    prop::collection::vec((prop::collection::vec(-2i64..=2, d), qlaurent()), 0..=5)
        .prop_map(move |terms| TorusElem::from_terms(&form, terms))
}

/// A form together with `n` elements over it.
pub fn elements(n: usize) -> impl Strategy<Value = (Arc<SkewForm>, Vec<TorusElem>)> {
    prop::sample::select(forms()).prop_flat_map(move |f| {
        (Just(f.clone()), prop::collection::vec(element(f), n))
    })
}

/// Proptest settings for integration tests (no regression files under tests/).
pub fn config(cases: u32) -> ProptestConfig {
    ProptestConfig {
        cases,
        failure_persistence: None,
        ..ProptestConfig::default()
    }
}
