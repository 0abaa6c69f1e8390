//! Truncated power series in a central `t` with torus coefficients, and the
//! noncommutative continued fractions that generate `F_m` and `G_m`.

use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use serde::ser::{SerializeStruct, Serializer};
use serde::Serialize;

use crate::cluster::MotzkinPath;
use crate::error::{Error, Result};
use crate::qtorus::{SkewForm, TorusElem};
use crate::weights::{HatWeight, HatWeightVector, WeightVector};

/// `Σ_{n ≤ N} c_n t^n`; every operation truncates at the order `N`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TSeries {
    coeffs: Vec<TorusElem>,
}

impl TSeries {
    pub fn zero(form: &Arc<SkewForm>, order: usize) -> Self {
        Self {
            coeffs: vec![TorusElem::zero(form); order + 1],
        }
    }

    pub fn one(form: &Arc<SkewForm>, order: usize) -> Self {
        Self::monomial(&TorusElem::one(form), 0, order)
    }

    /// `x t^deg`, or zero when `deg > order`.
    pub fn monomial(x: &TorusElem, deg: usize, order: usize) -> Self {
        let mut s = Self::zero(x.form(), order);
        if deg <= order {
            s.coeffs[deg] = x.clone();
        }
        s
    }

    pub fn from_coeffs(coeffs: Vec<TorusElem>) -> Self {
        assert!(!coeffs.is_empty(), "a series needs at least the constant term");
        Self { coeffs }
    }

    pub fn from_hat(h: &HatWeight, order: usize) -> Self {
        let mut s = Self::zero(h.degree(0).form(), order);
        for d in 0..=order.min(2) {
            s.coeffs[d] = h.degree(d).clone();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        self.coeffs[0].form()
    }

    pub fn coeff(&self, n: usize) -> &TorusElem {
        &self.coeffs[n]
    }

    pub fn coeffs(&self) -> &[TorusElem] {
        &self.coeffs
    }

    /// Apply `f` to every coefficient.
    pub fn map(&self, f: impl Fn(&TorusElem) -> TorusElem) -> Self {
        Self {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Multiply every coefficient on the right by a fixed element.
    pub fn mul_right(&self, x: &TorusElem) -> Self {
        self.map(|c| c * x)
    }

    /// First degree at which `self` and `other` differ.
    pub fn first_difference(&self, other: &Self) -> Option<usize> {
        (0..=self.order().min(other.order())).find(|&n| self.coeffs[n] != other.coeffs[n])
    }
}

impl Add for &TSeries {
    type Output = TSeries;
    fn add(self, rhs: &TSeries) -> TSeries {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        TSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &TSeries {
    type Output = TSeries;
    fn sub(self, rhs: &TSeries) -> TSeries {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        TSeries {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a - b).collect(),
        }
    }
}

impl Neg for &TSeries {
    type Output = TSeries;
    fn neg(self) -> TSeries {
        self.map(|c| -c)
    }
}

impl Mul for &TSeries {
    type Output = TSeries;
    fn mul(self, rhs: &TSeries) -> TSeries {
        assert_eq!(self.order(), rhs.order(), "series orders differ");
        let n = self.order();
        let mut out = TSeries::zero(self.form(), n);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate().take(n + 1 - i) {
                if !b.is_zero() {
                    out.coeffs[i + j] += &(a * b);
                }
            }
        }
        out
    }
}

impl Serialize for TSeries {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TSeries", 2)?;
        st.serialize_field("order", &self.order())?;
        st.serialize_field("coeffs", &self.coeffs)?;
        st.end()
    }
}

/// `u^{-1}` for `u = 1 - W`: `v_0 = 1`, `v_n = Σ_{k=1}^n W_k v_{n-k}`.
/// The result is a two-sided inverse.
pub fn series_inverse(u: &TSeries) -> Result<TSeries> {
    if !u.coeffs[0].is_one() {
        return Err(Error::ConstantTermNotIdentity(u.coeffs[0].to_string()));
    }
    let n = u.order();
    let form = u.form().clone();
    let mut v = TSeries::one(&form, n);
    for d in 1..=n {
        let mut acc = TorusElem::zero(&form);
        for k in 1..=d {
            if !u.coeffs[k].is_zero() && !v.coeffs[d - k].is_zero() {
                acc -= &(&u.coeffs[k] * &v.coeffs[d - k]);
            }
        }
        v.coeffs[d] = acc;
    }
    Ok(v)
}

fn one_minus(x: &TSeries) -> TSeries {
    &TSeries::one(x.form(), x.order()) - x
}

/// `J_1(x_1, …, x_{2r+1})` with `J_s = (1 - x_{2s-1} - J_{s+1} x_{2s})^{-1}`,
/// `J_{r+2} = 0`.
pub fn jacobi(xs: &[TSeries]) -> Result<TSeries> {
    assert!(xs.len() % 2 == 1, "Jacobi fraction takes 2r+1 entries");
    let r = xs.len() / 2;
    let mut j = series_inverse(&one_minus(&xs[2 * r]))?;
    for s in (1..=r).rev() {
        let d = &one_minus(&xs[2 * s - 2]) - &(&j * &xs[2 * s - 1]);
        j = series_inverse(&d)?;
    }
    Ok(j)
}

/// `S_1(x_1, …, x_n)` with `S_k = (1 - S_{k+1} x_k)^{-1}`, `S_{n+1} = 1`.
pub fn stieltjes(xs: &[TSeries]) -> Result<TSeries> {
    let first = xs.first().expect("Stieltjes fraction needs at least one entry");
    let mut s = TSeries::one(first.form(), first.order());
    for x in xs.iter().rev() {
        s = series_inverse(&one_minus(&(&s * x)))?;
    }
    Ok(s)
}

/// Strictly ascending runs `m_a, m_a+1, …` of length ≥ 2, as `(start, length)`.
pub fn ascending_segments(m: &MotzkinPath) -> Vec<(usize, usize)> {
    let r = m.rank();
    let mut out = Vec::new();
    let mut i = 1;
    while i <= r {
        let mut j = i;
        while j < r && m.m(j + 1) == m.m(j) + 1 {
            j += 1;
        }
        if j > i {
            out.push((i, j - i + 1));
        }
        i = j + 1;
    }
    out
}

/// `G_m` as the plain Jacobi fraction in the hatted weights.
pub fn jacobi_form(yhat: &HatWeightVector, order: usize) -> Result<TSeries> {
    let xs: Vec<TSeries> = yhat.0.iter().map(|h| TSeries::from_hat(h, order)).collect();
    jacobi(&xs)
}

/// `G_m` with every strictly ascending segment rewritten as a Stieltjes ladder.
pub fn mixed_form(m: &MotzkinPath, y: &WeightVector, yhat: &HatWeightVector, order: usize) -> Result<TSeries> {
    let r = m.rank();
    let form = y.seed().form().clone();
    let one = TSeries::one(&form, order);
    let ty = |j: usize| TSeries::monomial(y.y(j), 1, order);
    let hat = |j: usize| TSeries::from_hat(yhat.get(j), order);
    let segs = ascending_segments(m);
    // J[i] for i in 1..=r+2
    let mut jj: Vec<Option<TSeries>> = vec![None; r + 3];
    jj[r + 2] = Some(TSeries::zero(&form, order));
    let mut i = r + 1;
    while i >= 1 {
        if let Some(&(a, l)) = segs.iter().find(|&&(a, l)| a <= i && i < a + l) {
            let after = jj[a + l].clone().expect("ladder is built bottom-up");
            let descending = m.ext(a + l) == m.ext(a + l - 1) - 1;
            let mut s = if descending { &after - &one } else { after };
            // S_{2a+2l-3}
            s = series_inverse(&(&one - &(&s * &hat(2 * a + 2 * l - 2))))?;
            // S_k for k = 2a+2l-4 down to 2a
            for k in (2 * a..=2 * a + 2 * l - 4).rev() {
                s = series_inverse(&(&one - &(&s * &ty(k + 1))))?;
            }
            let d = &(&one - &ty(2 * a - 1)) - &(&s * &ty(2 * a));
            jj[a] = Some(series_inverse(&d)?);
            i = a - 1;
            continue;
        }
        let mut d = &one - &hat(2 * i - 1);
        if i <= r {
            d = &d - &(jj[i + 1].as_ref().unwrap() * &hat(2 * i));
        }
        jj[i] = Some(series_inverse(&d)?);
        i -= 1;
    }
    Ok(jj[1].take().unwrap())
}

/// `G_m` to order `N`. The Jacobi form is computed always; when `m` has
/// ascending segments the mixed form is computed too and must agree.
pub fn expand_continued_fraction(
    m: &MotzkinPath,
    y: &WeightVector,
    yhat: &HatWeightVector,
    order: usize,
) -> Result<TSeries> {
    let g = jacobi_form(yhat, order)?;
    if !ascending_segments(m).is_empty() {
        let mixed = mixed_form(m, y, yhat, order)?;
        if let Some(degree) = g.first_difference(&mixed) {
            return Err(Error::FractionMismatch { degree });
        }
    }
    Ok(g)
}

/// `F = 1 + t G y_1`, truncated at `G`'s order.
pub fn f_from_g(g: &TSeries, y1: &TorusElem) -> TSeries {
    let n = g.order();
    let mut f = TSeries::one(g.form(), n);
    for d in 0..n {
        f.coeffs[d + 1] += &(&g.coeffs[d] * y1);
    }
    f
}

/// Closed walks at vertex 1 of `Γ_r`, weighted by their steps: a loop at `i`
/// is `t y_{2i-1}`, `i → i+1` is `t y_{2i}`, a down-step is 1. Each new step's
/// weight multiplies on the left, matching the Jacobi fraction's expansion.
pub fn path_partition(r: usize, y: &WeightVector, order: usize) -> TSeries {
    fn go(r: usize, y: &WeightVector, v: usize, prod: &TorusElem, d: usize, out: &mut TSeries) {
        if v == 1 {
            out.coeffs[d] += prod;
        }
        if d < out.order() {
            go(r, y, v, &(y.y(2 * v - 1) * prod), d + 1, out);
            if v <= r {
                go(r, y, v + 1, &(y.y(2 * v) * prod), d + 1, out);
            }
        }
        if v > 1 {
            go(r, y, v - 1, prod, d, out);
        }
    }
    let form = y.seed().form();
    let mut out = TSeries::zero(form, order);
    go(r, y, 1, &TorusElem::one(form), 0, &mut out);
    out
}

/// Both sides of `a + b + (1-c-u)^{-1} c b = a + (1 - (1-u)^{-1} c)^{-1} b`.
pub fn rearrangement_sides(a: &TSeries, b: &TSeries, c: &TSeries, u: &TSeries) -> Result<(TSeries, TSeries)> {
    let one = TSeries::one(a.form(), a.order());
    let inner = series_inverse(&(&(&one - c) - u))?;
    let lhs = &(a + b) + &(&(&inner * c) * b);
    let w = series_inverse(&(&one - u))?;
    let rhs = a + &(&series_inverse(&(&one - &(&w * c)))? * b);
    Ok((lhs, rhs))
}

/// Convenience: `G_m` from a path by way of its explicit weights.
pub fn g_series(m: &MotzkinPath, order: usize) -> Result<(WeightVector, TSeries)> {
    let seed = crate::cluster::ClusterSeed::new(m.clone());
    let y = crate::weights::weights_explicit(&seed);
    let yhat = crate::weights::hat_weights(&y, m);
    let g = expand_continued_fraction(m, &y, &yhat, order)?;
    Ok((y, g))
}
