//! Ground truth: evolve the quantum Q-system
//! `q^{λ_i} R_{i,j+1} R_{i,j-1} = R_{i,j}^2 + R_{i+1,j} R_{i-1,j}`
//! from a seed by exact division in the seed's torus.

pub mod classical;

use std::collections::BTreeMap;

use serde_json::{Map, Value};

use crate::cfrac::TSeries;
use crate::cluster::ClusterSeed;
use crate::error::{Error, Result};
use crate::qcoeff::QLaurent;
use crate::qtorus::{exact_div_left, exact_div_right, Exponent, TermOrder, TorusElem};

/// `λ_i = i (r + 1 - i)`.
pub fn lambda(r: usize, i: usize) -> i64 {
    (i * (r + 1 - i)) as i64
}

/// Direction of a single schedule step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dir {
    Forward,
    Backward,
}

/// One cell of the evolution: compute `R_{row,time}` in direction `dir`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Step {
    pub row: usize,
    pub time: i64,
    pub dir: Dir,
}

/// Per-row targets `[lo_i, hi_i]` for the window.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Window {
    pub lo: Vec<i64>,
    pub hi: Vec<i64>,
}

impl Window {
    /// Every row over `[n_min, n_max]`.
    pub fn rectangle(r: usize, n_min: i64, n_max: i64) -> Self {
        Self {
            lo: vec![n_min; r],
            hi: vec![n_max; r],
        }
    }

    /// The staircase needed for `R_{1,n}` with `n ≤ m_1 + N + 1`, i.e. enough
    /// for both `F` and `G` to order `N`: `hi_i = max(m_i + 1, m_1 + N + 2 - i)`.
    pub fn for_series(seed: &ClusterSeed, order: usize) -> Self {
        let m = seed.path();
        let r = m.rank();
        let t1 = m.m(1) + order as i64 + 1;
        Self {
            lo: (1..=r).map(|i| m.m(i)).collect(),
            hi: (1..=r).map(|i| (m.m(i) + 1).max(t1 - (i as i64 - 1))).collect(),
        }
    }
}

/// The order in which cells are filled: forward sweeps first, always
/// advancing the row with the lowest frontier (ties to the smaller row),
/// then backward sweeps symmetrically. Every step's neighbours are checked
/// to exist before it is emitted.
pub fn schedule(seed: &ClusterSeed, window: &Window) -> Result<Vec<Step>> {
    let m = seed.path();
    let r = m.rank();
    let mut lo: Vec<i64> = (1..=r).map(|i| m.m(i)).collect();
    let mut hi: Vec<i64> = (1..=r).map(|i| m.m(i) + 1).collect();
    let have = |lo: &[i64], hi: &[i64], row: usize, t: i64| -> bool {
        row == 0 || row == r + 1 || (lo[row - 1] <= t && t <= hi[row - 1])
    };
    let mut steps = Vec::new();
    loop {
        let pending: Vec<usize> = (1..=r).filter(|&i| hi[i - 1] < window.hi[i - 1]).collect();
        if pending.is_empty() {
            break;
        }
        let ready = pending
            .iter()
            .copied()
            .filter(|&i| {
                let j = hi[i - 1];
                have(&lo, &hi, i - 1, j) && have(&lo, &hi, i + 1, j)
            })
            .min_by_key(|&i| (hi[i - 1], i));
        let Some(i) = ready else {
            let i = pending[0];
            return Err(Error::WindowTooSmall { row: i, time: hi[i - 1] + 1 });
        };
        hi[i - 1] += 1;
        steps.push(Step { row: i, time: hi[i - 1], dir: Dir::Forward });
    }
    loop {
        let pending: Vec<usize> = (1..=r).filter(|&i| lo[i - 1] > window.lo[i - 1]).collect();
        if pending.is_empty() {
            break;
        }
        let ready = pending
            .iter()
            .copied()
            .filter(|&i| {
                let j = lo[i - 1];
                have(&lo, &hi, i - 1, j) && have(&lo, &hi, i + 1, j)
            })
            .min_by_key(|&i| (-lo[i - 1], i));
        let Some(i) = ready else {
            let i = pending[0];
            return Err(Error::WindowTooSmall { row: i, time: lo[i - 1] - 1 });
        };
        lo[i - 1] -= 1;
        steps.push(Step { row: i, time: lo[i - 1], dir: Dir::Backward });
    }
    Ok(steps)
}

/// The computed `R_{i,n}` over a window; rows `0` and `r+1` are the constant 1.
#[derive(Debug, Clone)]
pub struct QSystemState {
    seed: ClusterSeed,
    window: BTreeMap<(usize, i64), TorusElem>,
}

impl QSystemState {
    pub fn seed(&self) -> &ClusterSeed {
        &self.seed
    }

    pub fn rank(&self) -> usize {
        self.seed.rank()
    }

    /// `R_{i,n}`, or [`Error::WindowTooSmall`].
    pub fn get(&self, i: usize, n: i64) -> Result<TorusElem> {
        if i == 0 || i == self.rank() + 1 {
            return Ok(TorusElem::one(self.seed.form()));
        }
        self.window
            .get(&(i, n))
            .cloned()
            .ok_or(Error::WindowTooSmall { row: i, time: n })
    }

    pub fn cells(&self) -> impl Iterator<Item = (&(usize, i64), &TorusElem)> + '_ {
        self.window.iter()
    }

    /// Division-free check of every interior cell whose neighbours are all
    /// present; returns how many cells were checked, or the first failing one.
    pub fn check_recursion(&self) -> std::result::Result<usize, (usize, i64)> {
        let r = self.rank();
        let mut checked = 0;
        for &(i, j) in self.window.keys() {
            let (Ok(up), Ok(down), Ok(a), Ok(b)) =
                (self.get(i, j + 1), self.get(i, j - 1), self.get(i + 1, j), self.get(i - 1, j))
            else {
                continue;
            };
            let mid = &self.window[&(i, j)];
            let lhs = (&up * &down).shift_q(lambda(r, i));
            let rhs = &(mid * mid) + &(&a * &b);
            if lhs != rhs {
                return Err((i, j));
            }
            checked += 1;
        }
        Ok(checked)
    }

    /// JSON map `"(i,n)"` → torus element.
    pub fn to_json(&self) -> Value {
        let mut map = Map::new();
        for (&(i, n), x) in &self.window {
            map.insert(format!("({i},{n})"), serde_json::to_value(x).expect("torus elements serialize"));
        }
        Value::Object(map)
    }
}

fn seed_window(seed: &ClusterSeed) -> BTreeMap<(usize, i64), TorusElem> {
    let r = seed.rank();
    let m = seed.path();
    let mut w = BTreeMap::new();
    for i in 1..=r {
        for t in [m.m(i), m.m(i) + 1] {
            let u = seed.index_of(i, t).expect("seed cell");
            w.insert((i, t), TorusElem::generator(seed.form(), u, 1));
        }
    }
    w
}

/// Evolve over an explicit window.
pub fn evolve_window(seed: &ClusterSeed, window: &Window) -> Result<QSystemState> {
    let r = seed.rank();
    let mut state = QSystemState {
        seed: seed.clone(),
        window: seed_window(seed),
    };
    for step in schedule(seed, window)? {
        let (i, t) = (step.row, step.time);
        // The cell that sits in the middle of the relation, and its far side.
        let (j, far) = match step.dir {
            Dir::Forward => (t - 1, t - 2),
            Dir::Backward => (t + 1, t + 2),
        };
        let mid = state.get(i, j)?;
        let num = &(&mid * &mid) + &(&state.get(i + 1, j)? * &state.get(i - 1, j)?);
        let den = state.get(i, far)?;
        let quot = match step.dir {
            Dir::Forward => exact_div_right(&num, &den, TermOrder::default()),
            Dir::Backward => exact_div_left(&num, &den, TermOrder::default()),
        }
        .map_err(|e| Error::DivisionFailure {
            row: i,
            time: t,
            detail: format!("{e}; numerator support {}, denominator {den}", num.len()),
        })?;
        state.window.insert((i, t), quot.shift_q(-lambda(r, i)));
    }
    Ok(state)
}

/// Evolve every row over `[n_min, n_max]`.
pub fn evolve(seed: &ClusterSeed, n_min: i64, n_max: i64) -> Result<QSystemState> {
    let m = seed.path();
    if n_min > m.min_height() || n_max < m.max_height() + 1 {
        return Err(Error::WindowTooSmall {
            row: 1,
            time: if n_min > m.min_height() { m.min_height() } else { m.max_height() + 1 },
        });
    }
    evolve_window(seed, &Window::rectangle(seed.rank(), n_min, n_max))
}

/// Evolve just far enough for `F` and `G` to order `N`.
pub fn evolve_for_series(seed: &ClusterSeed, order: usize) -> Result<QSystemState> {
    evolve_window(seed, &Window::for_series(seed, order))
}

fn rooted_series(state: &QSystemState, root: i64, order: usize) -> Result<TSeries> {
    let inv = state
        .get(1, root)?
        .inverse_monomial()
        .expect("the root is a seed generator");
    let coeffs = (0..=order as i64)
        .map(|n| Ok(&state.get(1, root + n)? * &inv))
        .collect::<Result<Vec<_>>>()?;
    Ok(TSeries::from_coeffs(coeffs))
}

/// `F_m = Σ t^n R_{1,m_1+n} R_{1,m_1}^{-1}`.
pub fn series_f_oracle(state: &QSystemState, order: usize) -> Result<TSeries> {
    rooted_series(state, state.seed.path().m(1), order)
}

/// `G_m = Σ t^n R_{1,m_1+1+n} R_{1,m_1+1}^{-1}`.
pub fn series_g_oracle(state: &QSystemState, order: usize) -> Result<TSeries> {
    rooted_series(state, state.seed.path().m(1) + 1, order)
}

/// Outcome of [`positivity_check`]; carries the first offending term.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Positivity {
    pub witness: Option<(Exponent, QLaurent)>,
}

impl Positivity {
    pub fn is_positive(&self) -> bool {
        self.witness.is_none()
    }
}

/// Whether every coefficient of `x` lies in `Z_+[q, q^{-1}]`.
pub fn positivity_check(x: &TorusElem) -> Positivity {
    Positivity {
        witness: x.first_negative().map(|(e, c)| (e.clone(), c.clone())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cluster::MotzkinPath;

    fn rank_one() -> ClusterSeed {
        ClusterSeed::new(MotzkinPath::flat(1))
    }

    #[test]
    fn rank_one_steps() {
        let seed = rank_one();
        let s = evolve(&seed, -1, 2).unwrap();
        let form = seed.form();
        let mono = |e: Vec<i64>, k| TorusElem::monomial(form, e, QLaurent::q_pow(k));
        assert_eq!(s.get(1, 2).unwrap(), &mono(vec![-1, 2], 1) + &mono(vec![-1, 0], -1));
        assert_eq!(s.get(1, -1).unwrap(), &mono(vec![2, -1], 1) + &mono(vec![0, -1], -1));
        assert!(s.check_recursion().unwrap() >= 2);
        assert!(positivity_check(&s.get(1, 2).unwrap()).is_positive());
    }

    #[test]
    fn rank_one_series() {
        let seed = rank_one();
        let s = evolve_for_series(&seed, 2).unwrap();
        let f = series_f_oracle(&s, 2).unwrap();
        let form = seed.form();
        assert!(f.coeff(0).is_one());
        assert_eq!(f.coeff(1), &TorusElem::monomial(form, vec![-1, 1], QLaurent::q_pow(1)));
        assert!(matches!(series_f_oracle(&s, 5), Err(Error::WindowTooSmall { .. })));
    }

    #[test]
    fn positivity_witness() {
        let form = rank_one().form().clone();
        let x = TorusElem::monomial(&form, vec![1, 0], QLaurent::from_terms([(0, 1), (1, -1)]));
        let p = positivity_check(&x);
        assert_eq!(p.witness.unwrap().0, vec![1, 0]);
        assert!(positivity_check(&TorusElem::one(&form)).is_positive());
    }

    #[test]
    fn all_seeds_small_windows() {
        for r in 1..=3 {
            for m in crate::cluster::enumerate_fundamental(r) {
                let seed = ClusterSeed::new(m);
                let s = evolve_for_series(&seed, 2).unwrap();
                s.check_recursion().unwrap();
                assert!(s.cells().all(|(_, x)| positivity_check(x).is_positive()));
            }
        }
    }
}
