//! Laurent polynomials in the central parameter `q`, with exact integer
//! coefficients, and the q-multinomials built from them.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::de::{self, Deserializer};
use serde::ser::{SerializeSeq, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A Laurent polynomial `Σ c_k q^k` kept in canonical form: no stored
/// coefficient is zero, so structural equality is value equality.
#[derive(Clone, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct QLaurent {
    terms: BTreeMap<i64, BigInt>,
}

impl QLaurent {
    pub fn zero() -> Self {
        Self::default()
    }

    pub fn one() -> Self {
        Self::monomial(0, 1)
    }

    /// `c q^k`.
    pub fn monomial(k: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(k, c);
        }
        Self { terms }
    }

    /// `q^k`.
    pub fn q_pow(k: i64) -> Self {
        Self::monomial(k, 1)
    }

    pub fn from_terms<I, C>(terms: I) -> Self
    where
        I: IntoIterator<Item = (i64, C)>,
        C: Into<BigInt>,
    {
        let mut out = Self::zero();
        for (k, c) in terms {
            out.add_term(k, c.into());
        }
        out
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1 && self.terms.get(&0).is_some_and(|c| c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending q-exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (i64, &BigInt)> + '_ {
        self.terms.iter().map(|(k, c)| (*k, c))
    }

    pub fn coeff(&self, k: i64) -> BigInt {
        self.terms.get(&k).cloned().unwrap_or_default()
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.terms.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.terms.keys().next_back().copied()
    }

    fn add_term(&mut self, k: i64, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(k) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply by `q^s`.
    pub fn shift(&self, s: i64) -> Self {
        Self {
            terms: self.terms.iter().map(|(k, c)| (k + s, c.clone())).collect(),
        }
    }

    /// Substitute `q -> q^f`; used to read a polynomial in `p` as one in `q`
    /// with `p = q^f`.
    pub fn scale_exponents(&self, f: i64) -> Self {
        assert!(f != 0, "exponent scale must be nonzero");
        Self {
            terms: self.terms.iter().map(|(k, c)| (k * f, c.clone())).collect(),
        }
    }

    /// `Some((k, ±1))` when `self = ±q^k`.
    pub fn as_unit(&self) -> Option<(i64, i32)> {
        if self.terms.len() != 1 {
            return None;
        }
        let (k, c) = self.terms.iter().next()?;
        if c.is_one() {
            Some((*k, 1))
        } else if (-c).is_one() {
            Some((*k, -1))
        } else {
            None
        }
    }

    /// Every coefficient is a nonnegative integer.
    pub fn is_nonnegative(&self) -> bool {
        self.terms.values().all(|c| !c.is_negative())
    }

    pub fn pow(&self, n: u32) -> Self {
        let mut out = Self::one();
        for _ in 0..n {
            out = &out * self;
        }
        out
    }
}

impl fmt::Debug for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

impl fmt::Display for QLaurent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        for (idx, (k, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if idx > 0 {
                write!(f, "{}", if neg { " - " } else { " + " })?;
            } else if neg {
                write!(f, "-")?;
            }
            match (*k, mag.is_one()) {
                (0, _) => write!(f, "{mag}")?,
                (1, true) => write!(f, "q")?,
                (1, false) => write!(f, "{mag}q")?,
                (k, true) => write!(f, "q^{k}")?,
                (k, false) => write!(f, "{mag}q^{k}")?,
            }
        }
        Ok(())
    }
}

impl Add for &QLaurent {
    type Output = QLaurent;
    fn add(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl AddAssign<&QLaurent> for QLaurent {
    fn add_assign(&mut self, rhs: &QLaurent) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, c.clone());
        }
    }
}

impl Sub for &QLaurent {
    type Output = QLaurent;
    fn sub(self, rhs: &QLaurent) -> QLaurent {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl SubAssign<&QLaurent> for QLaurent {
    fn sub_assign(&mut self, rhs: &QLaurent) {
        for (k, c) in &rhs.terms {
            self.add_term(*k, -c);
        }
    }
}

impl Neg for &QLaurent {
    type Output = QLaurent;
    fn neg(self) -> QLaurent {
        QLaurent {
            terms: self.terms.iter().map(|(k, c)| (*k, -c)).collect(),
        }
    }
}

impl Mul for &QLaurent {
    type Output = QLaurent;
    fn mul(self, rhs: &QLaurent) -> QLaurent {
        let mut out = QLaurent::zero();
        for (i, a) in &self.terms {
            for (j, b) in &rhs.terms {
                out.add_term(i + j, a * b);
            }
        }
        out
    }
}

macro_rules! forward_owned {
    ($($tr:ident $m:ident),*) => {$(
        impl $tr for QLaurent {
            type Output = QLaurent;
            fn $m(self, rhs: QLaurent) -> QLaurent { (&self).$m(&rhs) }
        }
    )*};
}
forward_owned!(Add add, Sub sub, Mul mul);

/// Exact division `n / d` in `Z[q, q^{-1}]`.
///
/// Long division from the top exponent; the quotient may carry negative
/// exponents but can never reach below `min(n) - min(d)`, which is what
/// detects a nonzero remainder.
pub fn ql_exact_div(n: &QLaurent, d: &QLaurent) -> Result<QLaurent> {
    let (Some(dmin), Some(dmax)) = (d.min_exp(), d.max_exp()) else {
        return Err(Error::NotDivisible("division by zero".into()));
    };
    if n.is_zero() {
        return Ok(QLaurent::zero());
    }
    let floor = n.min_exp().unwrap() - dmin;
    let lead = d.terms[&dmax].clone();
    let mut rem = n.clone();
    let mut quot = QLaurent::zero();
    while let Some((&top, c)) = rem.terms.iter().next_back() {
        let k = top - dmax;
        if k < floor || !(c % &lead).is_zero() {
            return Err(Error::NotDivisible(format!("({n}) / ({d})")));
        }
        let qc = c / &lead;
        let step = QLaurent::monomial(k, qc.clone());
        rem -= &(&step * d);
        quot.add_term(k, qc);
    }
    Ok(quot)
}

/// Evaluation at `q = 1`: the sum of the coefficients.
pub fn eval_q1(x: &QLaurent) -> BigInt {
    x.terms.values().sum()
}

/// Which variable a q-multinomial is written in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Var {
    Q,
    /// `p = q^{r+1}` for the given rank `r`.
    P { rank: usize },
}

impl Var {
    fn scale(self) -> i64 {
        match self {
            Var::Q => 1,
            Var::P { rank } => rank as i64 + 1,
        }
    }
}

fn one_minus_pow(i: i64) -> QLaurent {
    QLaurent::from_terms([(0, BigInt::one()), (i, -BigInt::one())])
}

/// The Gaussian multinomial `[a_1+…+a_k; a_1,…,a_k]` in `var`, by exact
/// division of `∏(1-x^i)` by the factorial products.
///
/// Two-part convention: `[-1; 0]`, i.e. parts `(0, -1)`, equals 1.
pub fn qmultinomial(parts: &[i64], var: Var) -> Result<QLaurent> {
    if parts == [0, -1] {
        return Ok(QLaurent::one());
    }
    if let Some(&part) = parts.iter().find(|&&a| a < 0) {
        return Err(Error::NegativePart {
            parts: parts.to_vec(),
            part,
        });
    }
    let n: i64 = parts.iter().sum();
    // The largest part's factorial cancels against the bottom of the
    // numerator; only the rest is divided out.
    let big = parts.iter().copied().max().unwrap_or(0);
    let mut skipped = false;
    let mut den = QLaurent::one();
    for &a in parts {
        if a == big && !skipped {
            skipped = true;
            continue;
        }
        for i in 1..=a {
            den = &den * &one_minus_pow(i);
        }
    }
    let mut top = QLaurent::one();
    for i in big + 1..=n {
        top = &top * &one_minus_pow(i);
    }
    let out = ql_exact_div(&top, &den)?;
    Ok(out.scale_exponents(var.scale()))
}

/// `[n; k]` with the convention that it vanishes when `k < 0` or `n - k < 0`,
/// apart from `[-1; 0] = 1`.
pub fn qbinomial(n: i64, k: i64, var: Var) -> QLaurent {
    if n == -1 && k == 0 {
        return QLaurent::one();
    }
    if k < 0 || n - k < 0 {
        return QLaurent::zero();
    }
    qmultinomial(&[k, n - k], var).expect("binomial parts are nonnegative")
}

/// `[ℓ-1+Σrest; ℓ-1, rest…]`, the coefficient of `x^rest` in `φ_ℓ`.
///
/// `φ_0 = 1`, so for `ℓ = 0` the value is 1 at `rest = 0` and 0 otherwise;
/// any negative argument gives 0.
pub fn phi_coeff(ell: i64, rest: &[i64], var: Var) -> QLaurent {
    if ell < 0 || rest.iter().any(|&x| x < 0) {
        return QLaurent::zero();
    }
    if ell == 0 {
        return if rest.iter().all(|&x| x == 0) {
            QLaurent::one()
        } else {
            QLaurent::zero()
        };
    }
    let mut parts = Vec::with_capacity(rest.len() + 1);
    parts.push(ell - 1);
    parts.extend_from_slice(rest);
    qmultinomial(&parts, var).expect("parts are nonnegative")
}

/// Coefficients of `z^0..=z^order` in `φ_ℓ(z) = ∏_{i<ℓ} (1 - x^i z)^{-1}`,
/// by direct expansion of the product (independent of [`qmultinomial`]).
pub fn phi_series(ell: usize, order: usize, var: Var) -> Vec<QLaurent> {
    let mut series = vec![QLaurent::zero(); order + 1];
    series[0] = QLaurent::one();
    for i in 0..ell as i64 {
        // multiply by Σ_k x^{ik} z^k
        let mut next = vec![QLaurent::zero(); order + 1];
        for (a, s) in series.iter().enumerate() {
            if s.is_zero() {
                continue;
            }
            for k in 0..=order - a {
                next[a + k] += &s.shift(i * k as i64);
            }
        }
        series = next;
    }
    series
        .into_iter()
        .map(|s| s.scale_exponents(var.scale()))
        .collect()
}

impl Serialize for QLaurent {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (k, c) in &self.terms {
            seq.serialize_element(&(k, c.to_string()))?;
        }
        seq.end()
    }
}

impl<'de> Deserialize<'de> for QLaurent {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let pairs: Vec<(i64, String)> = Vec::deserialize(d)?;
        let mut out = QLaurent::zero();
        for (k, c) in pairs {
            let c: BigInt = c.parse().map_err(de::Error::custom)?;
            out.add_term(k, c);
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(terms: &[(i64, i64)]) -> QLaurent {
        QLaurent::from_terms(terms.iter().copied())
    }

    #[test]
    fn small_multinomials() {
        assert_eq!(qmultinomial(&[1, 1], Var::Q).unwrap(), p(&[(0, 1), (1, 1)]));
        assert_eq!(
            qmultinomial(&[1, 1, 1], Var::Q).unwrap(),
            p(&[(0, 1), (1, 2), (2, 2), (3, 1)])
        );
        assert_eq!(qmultinomial(&[0, -1], Var::Q).unwrap(), QLaurent::one());
        assert!(matches!(
            qmultinomial(&[2, -1], Var::Q),
            Err(Error::NegativePart { part: -1, .. })
        ));
        // p = q^3 at rank 2
        assert_eq!(
            qmultinomial(&[1, 1], Var::P { rank: 2 }).unwrap(),
            p(&[(0, 1), (3, 1)])
        );
    }

    #[test]
    fn exact_division() {
        let n = p(&[(0, 1), (1, 1), (2, 1), (3, 1)]);
        assert_eq!(ql_exact_div(&n, &p(&[(0, 1), (1, 1)])).unwrap(), p(&[(0, 1), (2, 1)]));
        assert_eq!(
            ql_exact_div(&p(&[(0, 1), (1, 1)]), &p(&[(1, 1)])).unwrap(),
            p(&[(-1, 1), (0, 1)])
        );
        assert!(ql_exact_div(&p(&[(0, 1), (1, 1), (2, 1)]), &p(&[(0, 1), (1, 1)])).is_err());
        assert!(ql_exact_div(&p(&[(0, 3)]), &p(&[(0, 2)])).is_err());
    }

    #[test]
    fn evaluation() {
        assert_eq!(eval_q1(&p(&[(0, 1), (1, 2), (2, 2), (3, 1)])), BigInt::from(6));
        assert_eq!(eval_q1(&QLaurent::zero()), BigInt::zero());
    }

    #[test]
    fn display() {
        assert_eq!(p(&[(-1, 1), (0, -2), (3, 1)]).to_string(), "q^-1 - 2 + q^3");
        assert_eq!(QLaurent::zero().to_string(), "0");
    }

    #[test]
    fn phi_conventions() {
        assert!(phi_coeff(0, &[0, 0], Var::Q).is_one());
        assert!(phi_coeff(0, &[1], Var::Q).is_zero());
        assert!(phi_coeff(2, &[-1], Var::Q).is_zero());
        assert_eq!(phi_coeff(2, &[1], Var::Q), p(&[(0, 1), (1, 1)]));
    }

    #[test]
    fn serde_round_trip() {
        let x = p(&[(-2, 5), (4, -1)]);
        let s = serde_json::to_string(&x).unwrap();
        assert_eq!(s, r#"[[-2,"5"],[4,"-1"]]"#);
        let back: QLaurent = serde_json::from_str(&s).unwrap();
        assert_eq!(back, x);
    }
}
