//! The `q = 1` Q-system `R_{i,j+1} R_{i,j-1} = R_{i,j}^2 + R_{i+1,j} R_{i-1,j}`
//! in commutative Laurent polynomials, and over plain integers. Shares only
//! the cell schedule with the quantum oracle.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{schedule, Dir, Window};
use crate::cluster::ClusterSeed;
use crate::error::{Error, Result};
use crate::qtorus::Exponent;

/// A commutative Laurent polynomial with integer coefficients.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CPoly(pub BTreeMap<Exponent, BigInt>);

impl CPoly {
    pub fn monomial(e: Exponent, c: BigInt) -> Self {
        let mut m = BTreeMap::new();
        if !c.is_zero() {
            m.insert(e, c);
        }
        Self(m)
    }

    pub fn one(dim: usize) -> Self {
        Self::monomial(vec![0; dim], BigInt::one())
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_empty()
    }

    fn add_term(&mut self, e: Exponent, c: BigInt) {
        let zero = {
            let slot = self.0.entry(e.clone()).or_insert_with(BigInt::zero);
            *slot += c;
            slot.is_zero()
        };
        if zero {
            self.0.remove(&e);
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), c.clone());
        }
        out
    }

    pub fn sub(&self, o: &Self) -> Self {
        let mut out = self.clone();
        for (e, c) in &o.0 {
            out.add_term(e.clone(), -c);
        }
        out
    }

    pub fn mul(&self, o: &Self) -> Self {
        let mut out = Self::default();
        for (a, x) in &self.0 {
            for (b, y) in &o.0 {
                let e = a.iter().zip(b).map(|(u, v)| u + v).collect();
                out.add_term(e, x * y);
            }
        }
        out
    }

    /// Exact quotient `self / d`, by repeatedly cancelling the lex-leading term.
    pub fn exact_div(&self, d: &Self) -> Result<Self> {
        let (de, dc) = d.0.iter().next_back().ok_or_else(|| Error::NotDivisible("division by zero".into()))?;
        let mut rem = self.clone();
        let mut quot = Self::default();
        // The quotient's support lies in the box min(n)-min(d) ..= max(n)-max(d).
        let dim = de.len();
        let bound = |p: &Self, f: fn(i64, i64) -> i64, init: i64| -> Vec<i64> {
            (0..dim).map(|u| p.0.keys().map(|e| e[u]).fold(init, f)).collect()
        };
        let (nlo, nhi) = (bound(self, i64::min, i64::MAX), bound(self, i64::max, i64::MIN));
        let (dlo, dhi) = (bound(d, i64::min, i64::MAX), bound(d, i64::max, i64::MIN));
        while let Some((re, rc)) = rem.0.iter().next_back() {
            let e: Exponent = re.iter().zip(de).map(|(a, b)| a - b).collect();
            let inside = (0..dim).all(|u| e[u] >= nlo[u] - dlo[u] && e[u] <= nhi[u] - dhi[u]);
            if !inside || (rc % dc) != BigInt::zero() {
                return Err(Error::NotDivisible(format!("commutative remainder at {re:?}")));
            }
            let t = Self::monomial(e, rc / dc);
            rem = rem.sub(&t.mul(d));
            quot = quot.add(&t);
        }
        Ok(quot)
    }
}

fn relation_cells(step: &super::Step) -> (i64, i64) {
    match step.dir {
        Dir::Forward => (step.time - 1, step.time - 2),
        Dir::Backward => (step.time + 1, step.time + 2),
    }
}

/// Symbolic evolution with the seed generators as commutative variables
/// (same variable order as the quantum torus).
pub fn evolve_classical(seed: &ClusterSeed, window: &Window) -> Result<BTreeMap<(usize, i64), CPoly>> {
    let r = seed.rank();
    let dim = 2 * r;
    let m = seed.path();
    let mut w = BTreeMap::new();
    for i in 1..=r {
        for t in [m.m(i), m.m(i) + 1] {
            let mut e = vec![0; dim];
            e[seed.index_of(i, t).expect("seed cell")] = 1;
            w.insert((i, t), CPoly::monomial(e, BigInt::one()));
        }
    }
    let get = |w: &BTreeMap<(usize, i64), CPoly>, i: usize, t: i64| -> Result<CPoly> {
        if i == 0 || i == r + 1 {
            return Ok(CPoly::one(dim));
        }
        w.get(&(i, t)).cloned().ok_or(Error::WindowTooSmall { row: i, time: t })
    };
    for step in schedule(seed, window)? {
        let (j, far) = relation_cells(&step);
        let i = step.row;
        let mid = get(&w, i, j)?;
        let num = mid.mul(&mid).add(&get(&w, i + 1, j)?.mul(&get(&w, i - 1, j)?));
        let q = num.exact_div(&get(&w, i, far)?).map_err(|e| Error::DivisionFailure {
            row: i,
            time: step.time,
            detail: e.to_string(),
        })?;
        w.insert((i, step.time), q);
    }
    Ok(w)
}

/// Numeric evolution from integer seed values, listed in the torus's
/// generator order; exact integer division throughout.
pub fn evolve_numeric(seed: &ClusterSeed, values: &[BigInt], window: &Window) -> Result<BTreeMap<(usize, i64), BigInt>> {
    let r = seed.rank();
    assert_eq!(values.len(), 2 * r, "one value per seed generator");
    let m = seed.path();
    let mut w = BTreeMap::new();
    for i in 1..=r {
        for t in [m.m(i), m.m(i) + 1] {
            w.insert((i, t), values[seed.index_of(i, t).expect("seed cell")].clone());
        }
    }
    let get = |w: &BTreeMap<(usize, i64), BigInt>, i: usize, t: i64| -> Result<BigInt> {
        if i == 0 || i == r + 1 {
            return Ok(BigInt::one());
        }
        w.get(&(i, t)).cloned().ok_or(Error::WindowTooSmall { row: i, time: t })
    };
    for step in schedule(seed, window)? {
        let (j, far) = relation_cells(&step);
        let i = step.row;
        let mid = get(&w, i, j)?;
        let num = &mid * &mid + get(&w, i + 1, j)? * get(&w, i - 1, j)?;
        let den = get(&w, i, far)?;
        if den.is_zero() || (&num % &den) != BigInt::zero() {
            return Err(Error::DivisionFailure {
                row: i,
                time: step.time,
                detail: format!("{num} is not divisible by {den}"),
            });
        }
        w.insert((i, step.time), num / den);
    }
    Ok(w)
}

/// `R_{1,0}, R_{1,1}, …, R_{1,n-1}` for rank 1 with both seed values 1.
pub fn rank_one_sequence(n: usize) -> Vec<BigInt> {
    let seed = ClusterSeed::new(crate::cluster::MotzkinPath::flat(1));
    let hi = (n as i64 - 1).max(1);
    let w = evolve_numeric(&seed, &[BigInt::one(), BigInt::one()], &Window::rectangle(1, 0, hi))
        .expect("the classical A_1 recursion is integral");
    (0..n as i64).map(|t| w[&(1, t)].clone()).collect()
}
