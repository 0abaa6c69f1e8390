//! The closed-form coefficients `A_m(ℓ)` and the explicit sums for `F_m`, `G_m`.
//!
//! Indices are signed: after a descending step `m_{i+1} = m_i - 1` the odd
//! index `ℓ_{2i+1}` may go down to `-ℓ_{2i}`, standing for a negative power of
//! `t y_{2i+1}`. Every other entry is nonnegative.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cfrac::TSeries;
use crate::cluster::MotzkinPath;
use crate::qcoeff::{phi_coeff, qmultinomial, QLaurent, Var};
use crate::qtorus::TorusElem;
use crate::weights::WeightVector;

/// `(ℓ_1, …, ℓ_{2r+1})`, 1-based through [`MultiIndex::get`].
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct MultiIndex(pub Vec<i64>);

impl MultiIndex {
    /// `ℓ_j`, zero for `j = 0` or past the end.
    pub fn get(&self, j: usize) -> i64 {
        if j == 0 {
            return 0;
        }
        self.0.get(j - 1).copied().unwrap_or(0)
    }

    pub fn degree(&self) -> i64 {
        self.0.iter().sum()
    }

    /// The same index with `ℓ_1` shifted by `k`.
    pub fn shift_first(&self, k: i64) -> Self {
        let mut v = self.0.clone();
        v[0] += k;
        Self(v)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Which {
    F,
    G,
}

fn var(m: &MotzkinPath) -> Var {
    Var::P { rank: m.rank() }
}

/// `[n; k]`, zero unless `k, n-k ≥ 0`.
fn bino(n: i64, k: i64, v: Var) -> QLaurent {
    if k < 0 || n - k < 0 {
        return QLaurent::zero();
    }
    qmultinomial(&[k, n - k], v).expect("parts are nonnegative")
}

/// Two-part coefficient with the convention that parts `{0, -1}` give 1,
/// in either order; otherwise zero on any negative part.
fn bino_conv(n: i64, k: i64, v: Var) -> QLaurent {
    let parts = [k, n - k];
    if parts == [0, -1] || parts == [-1, 0] {
        return QLaurent::one();
    }
    bino(n, k, v)
}

/// `A_m(ℓ)` as the product of local factors: `φ(ℓ_1; ℓ_2)`, one factor per
/// step `i ∈ [1, r-1]` chosen by `m_{i+1} - m_i`, and `φ(ℓ_{2r}; ℓ_{2r+1})`.
pub fn coeff_a(m: &MotzkinPath, ell: &MultiIndex) -> QLaurent {
    let r = m.rank();
    let v = var(m);
    let l = |j: usize| ell.get(j);
    let mut acc = phi_coeff(l(1), &[l(2)], v);
    for i in 1..r {
        if acc.is_zero() {
            return acc;
        }
        let (a, b, c) = (l(2 * i), l(2 * i + 1), l(2 * i + 2));
        let f = match m.step(i) {
            0 => phi_coeff(a, &[b, c], v),
            -1 => &phi_coeff(a, &[b + c], v) * &bino(a + b + c, c, v),
            _ => &phi_coeff(a, &[b], v) * &phi_coeff(b, &[c], v),
        };
        acc = &acc * &f;
    }
    &acc * &phi_coeff(l(2 * r), &[l(2 * r + 1)], v)
}

/// `Π_{i=lo}^{hi} [ℓ_i + ℓ_{i+1} - 1; ℓ_{i+1}]`.
fn chain(ell: &MultiIndex, lo: usize, hi: usize, v: Var) -> QLaurent {
    let mut acc = QLaurent::one();
    for i in lo..=hi {
        acc = &acc * &bino_conv(ell.get(i) + ell.get(i + 1) - 1, ell.get(i + 1), v);
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// Length of the strictly ascending run starting at `m_k` (1 if `m_{k+1} ≠ m_k + 1`).
fn run_length(m: &MotzkinPath, k: usize) -> usize {
    let mut l = 1;
    while k + l <= m.rank() && m.m(k + l) == m.m(k + l - 1) + 1 {
        l += 1;
    }
    l
}

/// `A_m(ℓ)` by left-to-right accumulation: an initial factor, then at every
/// weakly descending step `k` a factor `U_1` (flat) or `U_2` (descending),
/// followed by the chain `V` over the ascending run that starts at `m_{k+1}`.
/// The last step is closed as a flat step with `ℓ_{2r+2} = 0`.
pub fn coeff_a_recursive(m: &MotzkinPath, ell: &MultiIndex) -> QLaurent {
    let r = m.rank();
    let v = var(m);
    let l = |j: usize| if j > 2 * r + 1 { 0 } else { ell.get(j) };
    let first = run_length(m, 1);
    let mut acc = if first >= 2 {
        chain(ell, 1, 2 * first - 1, v)
    } else {
        bino_conv(l(1) + l(2) - 1, l(2), v)
    };
    let mut k = first;
    while k <= r && !acc.is_zero() {
        let (a, b, c) = (l(2 * k), l(2 * k + 1), l(2 * k + 2));
        let u = if m.step(k) == 0 {
            phi_coeff(a, &[b, c], v)
        } else if b + c < 0 {
            // outside the expansion's support `ℓ_{2k+1} + ℓ_{2k+2} ≥ 0`
            QLaurent::zero()
        } else {
            &bino_conv(a + b + c - 1, a - 1, v) * &bino_conv(a + b + c, c, v)
        };
        acc = &acc * &u;
        if k == r {
            break;
        }
        let run = run_length(m, k + 1);
        if run >= 2 {
            acc = &acc * &chain(ell, 2 * k + 2, 2 * k + 2 * run - 1, v);
        }
        k += run;
    }
    acc
}

/// The flat-path product for `G`:
/// `Π_{i=0}^{r} [ℓ_{2i}+ℓ_{2i+1}+ℓ_{2i+2}-1; ℓ_{2i}-1, ℓ_{2i+1}, ℓ_{2i+2}]`
/// with `ℓ_0 = 1`, `ℓ_{2r+2} = 0`.
pub fn flat_product_g(r: usize, ell: &MultiIndex) -> QLaurent {
    let v = Var::P { rank: r };
    let l = |j: usize| match j {
        0 => 1,
        j if j > 2 * r + 1 => 0,
        j => ell.get(j),
    };
    let mut acc = QLaurent::one();
    for i in 0..=r {
        acc = &acc * &phi_coeff(l(2 * i), &[l(2 * i + 1), l(2 * i + 2)], v);
    }
    acc
}

/// The flat-path coefficient of `F = 1 + t G y_1`: 1 at `ℓ = 0`, otherwise
/// the `G` product at `ℓ_1 - 1` (zero when `ℓ_1 = 0`).
pub fn flat_product_f(r: usize, ell: &MultiIndex) -> QLaurent {
    if ell.0.iter().all(|&x| x == 0) {
        return QLaurent::one();
    }
    if ell.get(1) <= 0 {
        return QLaurent::zero();
    }
    flat_product_g(r, &ell.shift_first(-1))
}

/// The ascending-path product `Π_{i=1}^{2r} [ℓ_i + ℓ_{i+1} - 1 + δ_{i,1}[G]; ℓ_{i+1}]`.
pub fn ascending_product(r: usize, ell: &MultiIndex, which: Which) -> QLaurent {
    let v = Var::P { rank: r };
    let mut acc = QLaurent::one();
    for i in 1..=2 * r {
        let extra = i64::from(i == 1 && which == Which::G);
        acc = &acc * &bino_conv(ell.get(i) + ell.get(i + 1) - 1 + extra, ell.get(i + 1), v);
    }
    acc
}

/// All indices of total degree `d` in the support range for `m`: even entries
/// and `ℓ_1` in `[0, d]`, odd entries after a descending step in `[-ℓ_{2i}, d]`,
/// and every pair sum `ℓ_{2i} + ℓ_{2i+1}` nonnegative.
pub fn indices_of_degree(m: &MotzkinPath, d: usize) -> Vec<MultiIndex> {
    let r = m.rank();
    let n = 2 * r + 1;
    let d = d as i64;
    let mut out = Vec::new();
    // `used` is the sum of ℓ_1 and all completed pairs, each nonnegative.
    fn rec(m: &MotzkinPath, n: usize, d: i64, cur: &mut Vec<i64>, used: i64, out: &mut Vec<MultiIndex>) {
        let j = cur.len() + 1;
        if j > n {
            if used == d {
                out.push(MultiIndex(cur.clone()));
            }
            return;
        }
        if j == 1 || j % 2 == 1 {
            let prev = if j == 1 { 0 } else { cur[j - 2] };
            let i = (j - 1) / 2;
            let lo = if j > 1 && i < m.rank() && m.step(i) == -1 { -prev } else { 0 };
            for x in lo..=d - used - prev {
                cur.push(x);
                rec(m, n, d, cur, used + prev + x, out);
                cur.pop();
            }
        } else {
            for x in 0..=d {
                cur.push(x);
                rec(m, n, d, cur, used, out);
                cur.pop();
            }
        }
    }
    rec(m, n, d, &mut Vec::with_capacity(n), 0, &mut out);
    out
}

/// All indices of total degree at most `n`.
pub fn indices_up_to(m: &MotzkinPath, n: usize) -> Vec<MultiIndex> {
    (0..=n).flat_map(|d| indices_of_degree(m, d)).collect()
}

/// `(t y_{2r+1})^{ℓ_{2r+1}} ⋯ (t y_1)^{ℓ_1}` without the `t`; negative powers
/// are monomial inverses.
pub fn ordered_monomial(y: &WeightVector, ell: &MultiIndex, cache: &mut HashMap<(usize, i64), TorusElem>) -> TorusElem {
    let n = ell.0.len();
    let mut acc = TorusElem::one(y.seed().form());
    for j in (1..=n).rev() {
        let e = ell.get(j);
        if e == 0 {
            continue;
        }
        let p = cache
            .entry((j, e))
            .or_insert_with(|| y.y(j).pow(e).expect("weights are unit monomials"));
        acc = &acc * p;
    }
    acc
}

/// `F_m` or `G_m` to order `N` from the closed form.
pub fn series_closed(m: &MotzkinPath, which: Which, order: usize, y: &WeightVector) -> TSeries {
    let coeffs: Vec<TorusElem> = (0..=order)
        .into_par_iter()
        .map(|d| {
            let mut cache = HashMap::new();
            let mut acc = TorusElem::zero(y.seed().form());
            for ell in indices_of_degree(m, d) {
                let a = match which {
                    Which::F => coeff_a(m, &ell),
                    Which::G => coeff_a(m, &ell.shift_first(1)),
                };
                if a.is_zero() {
                    continue;
                }
                acc += &ordered_monomial(y, &ell, &mut cache).scale(&a);
            }
            acc
        })
        .collect();
    TSeries::from_coeffs(coeffs)
}
