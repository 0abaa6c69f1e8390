//! The quantum torus over a cluster's `2r` generators: normal-ordered
//! Laurent monomials `x^a = g_1^{a_1}…g_n^{a_n}` with `g_u g_v = q^{λ_uv} g_v g_u`.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};
use std::sync::Arc;

use num_bigint::BigInt;
use serde::ser::{SerializeSeq, SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qcoeff::{ql_exact_div, QLaurent};

/// An exponent vector over the normal-ordered generators.
pub type Exponent = Vec<i64>;

/// Skew-symmetric integer form; `λ_uv` means `g_u g_v = q^{λ_uv} g_v g_u`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct SkewForm {
    lambda: Vec<Vec<i64>>,
}

impl SkewForm {
    /// Panics unless `lambda` is square and skew-symmetric.
    pub fn new(lambda: Vec<Vec<i64>>) -> Self {
        let n = lambda.len();
        for (u, row) in lambda.iter().enumerate() {
            assert_eq!(row.len(), n, "skew form must be square");
            for v in 0..n {
                assert_eq!(row[v], -lambda[v][u], "skew form must be skew-symmetric");
            }
        }
        Self { lambda }
    }

    pub fn dim(&self) -> usize {
        self.lambda.len()
    }

    pub fn entry(&self, u: usize, v: usize) -> i64 {
        self.lambda[u][v]
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.lambda
    }

    /// q-power picked up by normal-ordering `x^a x^b`: `Σ_{u>v} a_u b_v λ_uv`.
    pub fn sigma(&self, a: &[i64], b: &[i64]) -> i64 {
        let mut s = 0;
        for (u, &au) in a.iter().enumerate() {
            if au == 0 {
                continue;
            }
            for (v, &bv) in b.iter().enumerate().take(u) {
                s += au * bv * self.lambda[u][v];
            }
        }
        s
    }
}

/// `e` with `x^a x^b = q^e x^b x^a`, i.e. `aᵀ λ b`.
pub fn comm_exponent(a: &[i64], b: &[i64], form: &SkewForm) -> i64 {
    let mut e = 0;
    for (u, &au) in a.iter().enumerate() {
        if au == 0 {
            continue;
        }
        for (v, &bv) in b.iter().enumerate() {
            e += au * bv * form.lambda[u][v];
        }
    }
    e
}

/// Monomial order used to pick leading terms during division.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum TermOrder {
    /// Lexicographic in the normal-order generator sequence.
    #[default]
    Lex,
    /// Total degree first, then lexicographic.
    GradedLex,
}

impl TermOrder {
    fn key<'a>(self, e: &'a [i64]) -> (i64, &'a [i64]) {
        match self {
            TermOrder::Lex => (0, e),
            TermOrder::GradedLex => (e.iter().sum(), e),
        }
    }
}

/// An element of the quantum torus: a finite sum of `c(q) x^a`.
#[derive(Clone)]
pub struct TorusElem {
    form: Arc<SkewForm>,
    terms: BTreeMap<Exponent, QLaurent>,
}

impl PartialEq for TorusElem {
    fn eq(&self, other: &Self) -> bool {
        self.terms == other.terms && same_form(&self.form, &other.form)
    }
}

impl Eq for TorusElem {}

fn same_form(a: &Arc<SkewForm>, b: &Arc<SkewForm>) -> bool {
    Arc::ptr_eq(a, b) || a == b
}

impl TorusElem {
    pub fn zero(form: &Arc<SkewForm>) -> Self {
        Self {
            form: form.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(form: &Arc<SkewForm>) -> Self {
        Self::monomial(form, vec![0; form.dim()], QLaurent::one())
    }

    pub fn monomial(form: &Arc<SkewForm>, exponent: Exponent, coeff: QLaurent) -> Self {
        assert_eq!(exponent.len(), form.dim(), "exponent length must match the form");
        let mut out = Self::zero(form);
        out.add_term(exponent, &coeff);
        out
    }

    /// `g_u^k`.
    pub fn generator(form: &Arc<SkewForm>, u: usize, k: i64) -> Self {
        let mut e = vec![0; form.dim()];
        e[u] = k;
        Self::monomial(form, e, QLaurent::one())
    }

    pub fn from_terms<I>(form: &Arc<SkewForm>, terms: I) -> Self
    where
        I: IntoIterator<Item = (Exponent, QLaurent)>,
    {
        let mut out = Self::zero(form);
        for (e, c) in terms {
            assert_eq!(e.len(), form.dim(), "exponent length must match the form");
            out.add_term(e, &c);
        }
        out
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.terms.len() == 1
            && self
                .terms
                .iter()
                .next()
                .is_some_and(|(e, c)| e.iter().all(|&x| x == 0) && c.is_one())
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Terms in ascending lexicographic exponent order.
    pub fn terms(&self) -> impl Iterator<Item = (&Exponent, &QLaurent)> + '_ {
        self.terms.iter()
    }

    pub fn coeff(&self, e: &[i64]) -> QLaurent {
        self.terms.get(e).cloned().unwrap_or_default()
    }

    /// The single term, if this is a monomial.
    pub fn as_monomial(&self) -> Option<(&Exponent, &QLaurent)> {
        if self.terms.len() == 1 {
            self.terms.iter().next()
        } else {
            None
        }
    }

    /// A single term with coefficient `±q^k`.
    pub fn is_unit_monomial(&self) -> bool {
        self.as_monomial().is_some_and(|(_, c)| c.as_unit().is_some())
    }

    fn add_term(&mut self, e: Exponent, c: &QLaurent) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            std::collections::btree_map::Entry::Vacant(v) => {
                v.insert(c.clone());
            }
            std::collections::btree_map::Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    /// Multiply every coefficient by `q^s`.
    pub fn shift_q(&self, s: i64) -> Self {
        Self {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c.shift(s))).collect(),
        }
    }

    /// Multiply by a central scalar.
    pub fn scale(&self, c: &QLaurent) -> Self {
        let mut out = Self::zero(&self.form);
        for (e, a) in &self.terms {
            out.add_term(e.clone(), &(a * c));
        }
        out
    }

    fn check_form(&self, other: &Self) -> Result<()> {
        if same_form(&self.form, &other.form) {
            Ok(())
        } else {
            Err(Error::MismatchedForms)
        }
    }

    fn mul_unchecked(&self, other: &Self) -> Self {
        let mut out = Self::zero(&self.form);
        for (ea, ca) in &self.terms {
            for (eb, cb) in &other.terms {
                let e: Exponent = ea.iter().zip(eb).map(|(x, y)| x + y).collect();
                let s = self.form.sigma(ea, eb);
                out.add_term(e, &(ca * cb).shift(s));
            }
        }
        out
    }

    /// Inverse of a unit monomial `±q^k x^e`:
    /// `±q^{-k-σ(e,-e)} x^{-e}`.
    pub fn inverse_monomial(&self) -> Result<Self> {
        let (e, c) = self
            .as_monomial()
            .ok_or_else(|| Error::NonMonomial(self.to_string()))?;
        let (k, sign) = c.as_unit().ok_or_else(|| Error::NonMonomial(self.to_string()))?;
        let ne: Exponent = e.iter().map(|x| -x).collect();
        let s = self.form.sigma(e, &ne);
        Ok(Self::monomial(&self.form, ne, QLaurent::monomial(-k - s, sign)))
    }

    /// `self^n`; negative powers need a unit monomial.
    pub fn pow(&self, n: i64) -> Result<Self> {
        let base = if n < 0 { self.inverse_monomial()? } else { self.clone() };
        let mut out = Self::one(&self.form);
        for _ in 0..n.unsigned_abs() {
            out = out.mul_unchecked(&base);
        }
        Ok(out)
    }

    /// Leading term under `order`.
    pub fn leading(&self, order: TermOrder) -> Option<(&Exponent, &QLaurent)> {
        match order {
            TermOrder::Lex => self.terms.iter().next_back(),
            _ => self.terms.iter().max_by(|a, b| order.key(a.0).cmp(&order.key(b.0))),
        }
    }

    /// Evaluate at `q = 1`, giving a commutative Laurent polynomial.
    pub fn eval_q1(&self) -> BTreeMap<Exponent, BigInt> {
        self.terms
            .iter()
            .map(|(e, c)| (e.clone(), crate::qcoeff::eval_q1(c)))
            .filter(|(_, c)| c != &BigInt::from(0))
            .collect()
    }

    /// `(exponent, coefficient)` of the first term with a negative integer
    /// coefficient, if any.
    pub fn first_negative(&self) -> Option<(&Exponent, &QLaurent)> {
        self.terms.iter().find(|(_, c)| !c.is_nonnegative())
    }
}

/// Product in the quantum torus.
pub fn normal_mul(a: &TorusElem, b: &TorusElem) -> Result<TorusElem> {
    a.check_form(b)?;
    Ok(a.mul_unchecked(b))
}

#[derive(Clone, Copy)]
enum Side {
    Right,
    Left,
}

/// `X` with `X · d = n`.
pub fn exact_div_right(n: &TorusElem, d: &TorusElem, order: TermOrder) -> Result<TorusElem> {
    exact_div(n, d, order, Side::Right)
}

/// `X` with `d · X = n`.
pub fn exact_div_left(n: &TorusElem, d: &TorusElem, order: TermOrder) -> Result<TorusElem> {
    exact_div(n, d, order, Side::Left)
}

fn bounds(x: &TorusElem) -> (Vec<i64>, Vec<i64>) {
    let dim = x.form.dim();
    let mut lo = vec![i64::MAX; dim];
    let mut hi = vec![i64::MIN; dim];
    for e in x.terms.keys() {
        for u in 0..dim {
            lo[u] = lo[u].min(e[u]);
            hi[u] = hi[u].max(e[u]);
        }
    }
    (lo, hi)
}

// Greedy leading-term peeling. The torus is a domain, so the support of X
// is confined to [min n - min d, max n - max d] coordinatewise; leaving that
// box (or an inexact coefficient division) means d does not divide n.
fn exact_div(n: &TorusElem, d: &TorusElem, order: TermOrder, side: Side) -> Result<TorusElem> {
    n.check_form(d)?;
    let form = &n.form;
    let (ld, cd) = d
        .leading(order)
        .map(|(e, c)| (e.clone(), c.clone()))
        .ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
    let mut x = TorusElem::zero(form);
    if n.is_zero() {
        return Ok(x);
    }
    let (nlo, nhi) = bounds(n);
    let (dlo, dhi) = bounds(d);
    let lo: Vec<i64> = nlo.iter().zip(&dlo).map(|(a, b)| a - b).collect();
    let hi: Vec<i64> = nhi.iter().zip(&dhi).map(|(a, b)| a - b).collect();
    let mut rem = n.clone();
    while let Some((ln, cn)) = rem.leading(order).map(|(e, c)| (e.clone(), c.clone())) {
        let e: Exponent = ln.iter().zip(&ld).map(|(a, b)| a - b).collect();
        let outside = e.iter().enumerate().any(|(u, &v)| v < lo[u] || v > hi[u]);
        if outside {
            return Err(Error::NotDivisible(format!(
                "quotient term x^{e:?} escapes the support box"
            )));
        }
        let ratio = ql_exact_div(&cn, &cd)?;
        let term = match side {
            Side::Right => TorusElem::monomial(form, e.clone(), ratio.shift(-form.sigma(&e, &ld))),
            Side::Left => TorusElem::monomial(form, e.clone(), ratio.shift(-form.sigma(&ld, &e))),
        };
        let prod = match side {
            Side::Right => term.mul_unchecked(d),
            Side::Left => d.mul_unchecked(&term),
        };
        rem -= &prod;
        x += &term;
    }
    Ok(x)
}

impl AddAssign<&TorusElem> for TorusElem {
    fn add_assign(&mut self, rhs: &TorusElem) {
        assert!(same_form(&self.form, &rhs.form), "mismatched quantum tori");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), c);
        }
    }
}

impl SubAssign<&TorusElem> for TorusElem {
    fn sub_assign(&mut self, rhs: &TorusElem) {
        assert!(same_form(&self.form, &rhs.form), "mismatched quantum tori");
        for (e, c) in &rhs.terms {
            self.add_term(e.clone(), &-c);
        }
    }
}

impl Add for &TorusElem {
    type Output = TorusElem;
    fn add(self, rhs: &TorusElem) -> TorusElem {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &TorusElem {
    type Output = TorusElem;
    fn sub(self, rhs: &TorusElem) -> TorusElem {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &TorusElem {
    type Output = TorusElem;
    fn neg(self) -> TorusElem {
        TorusElem {
            form: self.form.clone(),
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

/// Panics on mismatched forms; use [`normal_mul`] for a checked product.
impl Mul for &TorusElem {
    type Output = TorusElem;
    fn mul(self, rhs: &TorusElem) -> TorusElem {
        assert!(same_form(&self.form, &rhs.form), "mismatched quantum tori");
        self.mul_unchecked(rhs)
    }
}

impl fmt::Display for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        for (i, (e, c)) in self.terms.iter().enumerate() {
            if i > 0 {
                write!(f, " + ")?;
            }
            let ex: Vec<String> = e.iter().map(|x| x.to_string()).collect();
            write!(f, "({c})x^({})", ex.join(","))?;
        }
        Ok(())
    }
}

impl fmt::Debug for TorusElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{self}")
    }
}

/// Serialized term: `{exponents, coeff}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TermRepr {
    pub exponents: Exponent,
    pub coeff: QLaurent,
}

impl TorusElem {
    pub fn to_repr(&self) -> Vec<TermRepr> {
        self.terms
            .iter()
            .map(|(e, c)| TermRepr {
                exponents: e.clone(),
                coeff: c.clone(),
            })
            .collect()
    }

    pub fn from_repr(form: &Arc<SkewForm>, repr: &[TermRepr]) -> Self {
        Self::from_terms(form, repr.iter().map(|t| (t.exponents.clone(), t.coeff.clone())))
    }
}

impl Serialize for TorusElem {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        struct Term<'a>(&'a Exponent, &'a QLaurent);
        impl Serialize for Term<'_> {
            fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
                let mut st = s.serialize_struct("Term", 2)?;
                st.serialize_field("exponents", self.0)?;
                st.serialize_field("coeff", self.1)?;
                st.end()
            }
        }
        let mut seq = s.serialize_seq(Some(self.terms.len()))?;
        for (e, c) in &self.terms {
            seq.serialize_element(&Term(e, c))?;
        }
        seq.end()
    }
}
