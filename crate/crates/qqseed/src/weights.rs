//! The weights `y_1(m), …, y_{2r+1}(m)`: explicit construction, the
//! forward-mutation recursion, hatted versions and commutation quivers.

use crate::cluster::{cartan_lambda, mutate_path, mutation_case, ClusterSeed, Label, MotzkinPath, MutationCase, Quiver};
use crate::error::{Error, Result};
use crate::qcoeff::QLaurent;
use crate::qtorus::{comm_exponent, exact_div_right, TermOrder, TorusElem};

/// `y_1, …, y_{2r+1}` as unit monomials over a seed's torus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WeightVector {
    seed: ClusterSeed,
    y: Vec<TorusElem>,
}

impl WeightVector {
    pub fn new(seed: ClusterSeed, y: Vec<TorusElem>) -> Self {
        assert_eq!(y.len(), 2 * seed.rank() + 1, "need 2r+1 weights");
        Self { seed, y }
    }

    pub fn seed(&self) -> &ClusterSeed {
        &self.seed
    }

    pub fn path(&self) -> &MotzkinPath {
        self.seed.path()
    }

    pub fn rank(&self) -> usize {
        self.seed.rank()
    }

    /// `y_j`, 1-based.
    pub fn y(&self, j: usize) -> &TorusElem {
        &self.y[j - 1]
    }

    pub fn as_slice(&self) -> &[TorusElem] {
        &self.y
    }

    /// Replace `y_j` (used by fault injection and tests).
    pub fn set(&mut self, j: usize, value: TorusElem) {
        self.y[j - 1] = value;
    }
}

/// A word `q^k ∏ R_{a,n}^{±1}` in cluster variables, possibly leaving the seed.
#[derive(Debug, Clone, Default)]
struct Word {
    q: i64,
    letters: Vec<(Label, i64)>,
}

impl Word {
    fn new(q: i64) -> Self {
        Self { q, letters: Vec::new() }
    }

    fn push(&mut self, row: usize, time: i64, e: i64) -> &mut Self {
        self.letters.push((Label { row, time }, e));
        self
    }
}

// Two cluster variables q-commute by the seed rule iff some Motzkin
// path contains both.
fn share_cluster(a: Label, b: Label) -> bool {
    let gap = a.row.abs_diff(b.row) as i64;
    [a.time - 1, a.time].iter().any(|&ma| {
        [b.time - 1, b.time]
            .iter()
            .any(|&mb| (ma - mb).abs() <= gap && (a.row != b.row || ma == mb))
    })
}

/// Evaluate a word: drop boundary rows, cancel every non-seed letter
/// against its inverse by q-commuting it into place, then multiply out.
fn evaluate(seed: &ClusterSeed, word: &Word) -> TorusElem {
    let r = seed.rank();
    let mut q = word.q;
    let mut w: Vec<(Label, i64)> = word
        .letters
        .iter()
        .copied()
        .filter(|(l, _)| l.row >= 1 && l.row <= r)
        .collect();
    let lam = |a: Label, b: Label| (b.time - a.time) * cartan_lambda(r, a.row, b.row);
    while let Some(p) = w.iter().position(|(l, _)| seed.index_of(l.row, l.time).is_none()) {
        let (sym, e) = w[p];
        let mut k = (0..w.len())
            .find(|&k| k != p && w[k].0 == sym)
            .unwrap_or_else(|| panic!("{sym} has no partner to cancel against"));
        assert_eq!(w[k].1, -e, "{sym} must cancel against its inverse");
        // a^x b^y = q^{xy λ(a,b)} b^y a^x
        let mut swap = |w: &mut Vec<(Label, i64)>, at: usize| {
            let (a, b) = (w[at], w[at + 1]);
            assert!(share_cluster(a.0, b.0), "{} and {} do not q-commute", a.0, b.0);
            q += a.1 * b.1 * lam(a.0, b.0);
            w.swap(at, at + 1);
        };
        if k > p {
            while k > p + 1 {
                swap(&mut w, k - 1);
                k -= 1;
            }
            w.drain(p..p + 2);
        } else {
            while k + 1 < p {
                swap(&mut w, k);
                k += 1;
            }
            w.drain(k..k + 2);
        }
    }
    let form = seed.form();
    let mut out = TorusElem::monomial(form, vec![0; 2 * r], QLaurent::q_pow(q));
    for (l, e) in w {
        let u = seed.index_of(l.row, l.time).unwrap();
        out = &out * &TorusElem::generator(form, u, e);
    }
    out
}

/// Weights from the explicit formula for a general Motzkin path.
pub fn weights_explicit(seed: &ClusterSeed) -> WeightVector {
    let m = seed.path();
    let r = m.rank();
    let mm = |i: usize| m.m(i);
    let mut y = Vec::with_capacity(2 * r + 1);
    for i in 1..=r + 1 {
        let mut odd = Word::new(i as i64 - 1);
        if i <= r {
            odd.push(i, mm(i) + 1, 1).push(i, mm(i), -1);
        }
        if i >= 2 {
            odd.push(i - 1, mm(i - 1), 1).push(i - 1, mm(i - 1) + 1, -1);
        }
        y.push(evaluate(seed, &odd));
        if i > r {
            break;
        }
        let mi = mm(i);
        let mut even = Word::new(0);
        if i < r && mi == mm(i + 1) + 1 {
            let n = mm(i + 1);
            even.push(i + 1, n + 1, 1).push(i + 1, n, -1).push(i + 1, mi, 1).push(i + 1, mi + 1, -1);
        }
        even.push(i + 1, mi + 1, 1).push(i, mi + 1, -1).push(i, mi, -1).push(i - 1, mi, 1);
        if i >= 2 && mi == mm(i - 1) - 1 {
            let n = mm(i - 1);
            even.push(i - 1, mi + 1, 1).push(i - 1, mi, -1).push(i - 1, n, 1).push(i - 1, n + 1, -1);
        }
        y.push(evaluate(seed, &even));
    }
    WeightVector::new(seed.clone(), y)
}

/// The fundamental weights through their own (second) formula
/// `y_{2i-1} = R_{i,1}R_{i-1,1}^{-1}R_{i,0}^{-1}R_{i-1,0}`,
/// `y_{2i} = R_{i+1,1}R_{i,1}^{-1}R_{i,0}^{-1}R_{i-1,0}`.
pub fn weights_fundamental(r: usize) -> WeightVector {
    let seed = ClusterSeed::new(MotzkinPath::flat(r));
    let mut y = Vec::with_capacity(2 * r + 1);
    for i in 1..=r + 1 {
        let mut odd = Word::new(0);
        odd.push(i, 1, 1).push(i - 1, 1, -1).push(i, 0, -1).push(i - 1, 0, 1);
        y.push(evaluate(&seed, &odd));
        if i <= r {
            let mut even = Word::new(0);
            even.push(i + 1, 1, 1).push(i, 1, -1).push(i, 0, -1).push(i - 1, 0, 1);
            y.push(evaluate(&seed, &even));
        }
    }
    WeightVector::new(seed, y)
}

/// Re-expresses elements of the old seed's torus in `μ_i^+`'s torus.
struct Transport<'a> {
    old: &'a ClusterSeed,
    new: &'a ClusterSeed,
    mutated: usize,
    /// `R_{i,m_i} = q^{-λ_i} R_{i,m_i+2}^{-1}(R_{i,m_i+1}^2 + R_{i+1,m_i+1}R_{i-1,m_i+1})`
    replacement: TorusElem,
}

impl<'a> Transport<'a> {
    fn new(old: &'a ClusterSeed, new: &'a ClusterSeed, i: usize) -> Self {
        let r = old.rank();
        let mi = old.path().m(i);
        let form = new.form();
        let g = |row: usize, time: i64, e: i64| match new.index_of(row, time) {
            Some(u) => TorusElem::generator(form, u, e),
            None => {
                assert!(row == 0 || row == r + 1, "R_{{{row},{time}}} is not in the new seed");
                TorusElem::one(form)
            }
        };
        let a = &g(i, mi + 1, 1) * &g(i, mi + 1, 1);
        let b = &g(i + 1, mi + 1, 1) * &g(i - 1, mi + 1, 1);
        let lambda_i = (i * (r + 1 - i)) as i64;
        let replacement = (&g(i, mi + 2, -1) * &(&a + &b)).shift_q(-lambda_i);
        Self {
            old,
            new,
            mutated: i - 1,
            replacement,
        }
    }

    fn map(&self, x: &TorusElem) -> Result<TorusElem> {
        let form = self.new.form();
        let mut out = TorusElem::zero(form);
        for (e, c) in x.terms() {
            let mut term = TorusElem::monomial(form, vec![0; form.dim()], c.clone());
            for (u, &k) in e.iter().enumerate() {
                if k == 0 {
                    continue;
                }
                if u == self.mutated {
                    if k < 0 {
                        return Err(Error::NonMonomial(format!(
                            "negative power of the exchanged variable in {x}"
                        )));
                    }
                    for _ in 0..k {
                        term = &term * &self.replacement;
                    }
                } else {
                    let l = self.old.generators()[u];
                    let v = self.new.index_of(l.row, l.time).expect("unmutated variable survives");
                    term = &term * &TorusElem::generator(form, v, k);
                }
            }
            out += &term;
        }
        Ok(out)
    }
}

fn unit(x: TorusElem) -> Result<TorusElem> {
    if x.is_unit_monomial() {
        Ok(x)
    } else {
        Err(Error::NonMonomial(x.to_string()))
    }
}

/// One step of the weight recursion under `μ_i^+` in the given case:
/// `y'_{2i-1} = y_{2i-1}+y_{2i}`, `y'_{2i} = y_{2i+1}y_{2i}(y_{2i-1}+y_{2i})^{-1}`,
/// `y'_{2i+1} = y_{2i+1}y_{2i-1}(y_{2i-1}+y_{2i})^{-1}` and, in case (ii),
/// `y'_{2i+2} = y_{2i+2}y_{2i-1}(y_{2i-1}+y_{2i})^{-1}`; all others carry over.
///
/// The result lives over the mutated seed, where each new weight is again a
/// unit monomial.
pub fn weights_mutate(y: &WeightVector, i: usize, case: MutationCase) -> Result<WeightVector> {
    let m = y.path();
    let r = m.rank();
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange { index: i, rank: r });
    }
    if mutation_case(m, i) != Some(case) {
        return Err(Error::CaseMismatch {
            index: i,
            expected: case.to_string(),
        });
    }
    let old = y.seed();
    let new = ClusterSeed::new(mutate_path(m, i, 1)?);
    let tr = Transport::new(old, &new, i);
    let g_i = TorusElem::generator(old.form(), i - 1, 1);
    let sum = y.y(2 * i - 1) + y.y(2 * i);
    // (y_{2i-1}+y_{2i}) R_{i,m_i} has no negative power of R_{i,m_i}, so it
    // maps over; dividing its image by the image of R_{i,m_i} gives the sum.
    let s = unit(exact_div_right(&tr.map(&(&sum * &g_i))?, &tr.map(&g_i)?, TermOrder::Lex)?)?;
    let s_inv = s.inverse_monomial()?;
    let over_s = |a: &TorusElem, b: &TorusElem| -> Result<TorusElem> { unit(&tr.map(&(a * b))? * &s_inv) };

    let mut out = Vec::with_capacity(2 * r + 1);
    for j in 1..=2 * r + 1 {
        let v = if j == 2 * i - 1 {
            s.clone()
        } else if j == 2 * i {
            over_s(y.y(2 * i + 1), y.y(2 * i))?
        } else if j == 2 * i + 1 {
            over_s(y.y(2 * i + 1), y.y(2 * i - 1))?
        } else if j == 2 * i + 2 && case == MutationCase::II {
            over_s(y.y(2 * i + 2), y.y(2 * i - 1))?
        } else {
            unit(tr.map(y.y(j))?)?
        };
        out.push(v);
    }
    Ok(WeightVector::new(new, out))
}

/// A `t`-graded weight `a_0 + a_1 t + a_2 t^2`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatWeight {
    pub parts: [TorusElem; 3],
}

impl HatWeight {
    fn at(x: &TorusElem, deg: usize) -> Self {
        let z = TorusElem::zero(x.form());
        let mut parts = [z.clone(), z.clone(), z];
        parts[deg] = x.clone();
        Self { parts }
    }

    pub fn degree(&self, d: usize) -> &TorusElem {
        &self.parts[d]
    }
}

/// `ŷ_1, …, ŷ_{2r+1}`, 1-based through [`HatWeightVector::get`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HatWeightVector(pub Vec<HatWeight>);

impl HatWeightVector {
    pub fn get(&self, j: usize) -> &HatWeight {
        &self.0[j - 1]
    }
}

/// The hatted weights, chosen by the local step shape at each `i ∈ [1, r]`
/// (the step at `r` is taken as flat); `ŷ_{2r+1} = t y_{2r+1}`.
pub fn hat_weights(y: &WeightVector, m: &MotzkinPath) -> HatWeightVector {
    let r = m.rank();
    let mut out = Vec::with_capacity(2 * r + 1);
    for i in 1..=r {
        let (a, b) = (y.y(2 * i - 1), y.y(2 * i));
        match m.step(i) {
            0 => {
                out.push(HatWeight::at(a, 1));
                out.push(HatWeight::at(b, 1));
            }
            1 => {
                out.push(HatWeight::at(&(a + b), 1));
                out.push(HatWeight::at(&(y.y(2 * i + 1) * b), 2));
            }
            _ => {
                let z = &y.y(2 * i + 1).inverse_monomial().expect("weights are units") * b;
                let mut odd = HatWeight::at(a, 1);
                odd.parts[0] = -&z;
                out.push(odd);
                out.push(HatWeight::at(&z, 0));
            }
        }
    }
    out.push(HatWeight::at(y.y(2 * r + 1), 1));
    HatWeightVector(out)
}

/// Arrow multiplicities `k` with `y_i y_j = p^k y_j y_i`, `p = q^{r+1}`.
pub fn comm_quiver(y: &WeightVector) -> Result<Quiver> {
    let r = y.rank();
    let n = 2 * r + 1;
    let base = r as i64 + 1;
    let form = y.seed().form();
    let mut matrix = vec![vec![0; n]; n];
    for i in 0..n {
        for j in 0..n {
            let (a, _) = y.as_slice()[i].as_monomial().ok_or_else(|| Error::NonMonomial(y.as_slice()[i].to_string()))?;
            let (b, _) = y.as_slice()[j].as_monomial().ok_or_else(|| Error::NonMonomial(y.as_slice()[j].to_string()))?;
            let e = comm_exponent(a, b, form);
            if e % base != 0 {
                return Err(Error::ExponentNotMultiple {
                    i: i + 1,
                    j: j + 1,
                    exponent: e,
                    base,
                });
            }
            matrix[i][j] = e / base;
        }
    }
    Ok(Quiver {
        vertices: weight_labels(r),
        matrix,
    })
}

fn weight_labels(r: usize) -> Vec<String> {
    (1..=2 * r + 1).map(|j| format!("y{j}")).collect()
}

/// The commutation quiver predicted for `m`: one arrow `i → i+1`, and
/// `m_i - m_{i+1} + 1` arrows `2i → 2i+2`; everything else commutes.
pub fn expected_comm_quiver(m: &MotzkinPath) -> Quiver {
    let r = m.rank();
    let n = 2 * r + 1;
    let mut matrix = vec![vec![0i64; n]; n];
    let mut arrow = |a: usize, b: usize, k: i64| {
        matrix[a - 1][b - 1] += k;
        matrix[b - 1][a - 1] -= k;
    };
    for i in 1..2 * r + 1 {
        arrow(i, i + 1, 1);
    }
    for i in 1..r {
        arrow(2 * i, 2 * i + 2, m.m(i) - m.m(i + 1) + 1);
    }
    Quiver {
        vertices: weight_labels(r),
        matrix,
    }
}
