//! Motzkin-path initial data, their seeds, exchange matrices and the
//! forward-mutation planner.

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::str::FromStr;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::qtorus::SkewForm;

/// `(m_1, …, m_r)` with consecutive differences in `{-1, 0, 1}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "Vec<i64>", into = "Vec<i64>")]
pub struct MotzkinPath(Vec<i64>);

impl MotzkinPath {
    pub fn new(m: Vec<i64>) -> Result<Self> {
        if m.is_empty() {
            return Err(Error::MalformedPath("rank must be at least 1".into()));
        }
        for (step, w) in m.windows(2).enumerate() {
            if (w[1] - w[0]).abs() > 1 {
                return Err(Error::InvalidPath {
                    step: step + 1,
                    from: w[0],
                    to: w[1],
                });
            }
        }
        Ok(Self(m))
    }

    /// The flat path `m_0 = (0, …, 0)`.
    pub fn flat(r: usize) -> Self {
        Self(vec![0; r])
    }

    /// The ascending path `m_1 = (0, 1, …, r-1)`.
    pub fn ascending(r: usize) -> Self {
        Self((0..r as i64).collect())
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn as_slice(&self) -> &[i64] {
        &self.0
    }

    /// `m_i`, 1-based.
    pub fn m(&self, i: usize) -> i64 {
        self.0[i - 1]
    }

    /// `m_i` for `i ∈ [0, r+1]`, extended flatly past both ends.
    pub fn ext(&self, i: usize) -> i64 {
        let r = self.rank();
        self.0[i.clamp(1, r) - 1]
    }

    pub fn translate(&self, k: i64) -> Self {
        Self(self.0.iter().map(|x| x + k).collect())
    }

    pub fn min_height(&self) -> i64 {
        *self.0.iter().min().unwrap()
    }

    pub fn max_height(&self) -> i64 {
        *self.0.iter().max().unwrap()
    }

    /// The step `m_{i+1} - m_i` for `i ∈ [1, r]`, with the virtual flat step at `r`.
    pub fn step(&self, i: usize) -> i64 {
        self.ext(i + 1) - self.ext(i)
    }
}

impl TryFrom<Vec<i64>> for MotzkinPath {
    type Error = Error;
    fn try_from(v: Vec<i64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<MotzkinPath> for Vec<i64> {
    fn from(m: MotzkinPath) -> Self {
        m.0
    }
}

impl FromStr for MotzkinPath {
    type Err = Error;
    /// Comma-separated entries, e.g. `0,1,0`.
    fn from_str(s: &str) -> Result<Self> {
        let m = s
            .split(',')
            .map(|t| {
                t.trim()
                    .parse::<i64>()
                    .map_err(|_| Error::MalformedPath(format!("bad entry {t:?} in {s:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::new(m)
    }
}

impl fmt::Display for MotzkinPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|x| x.to_string()).collect();
        write!(f, "({})", parts.join(","))
    }
}

/// A cluster variable `R_{row,time}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Label {
    pub row: usize,
    pub time: i64,
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.row, self.time)
    }
}

/// `Λ_{ik} = min(i,k)(r+1-max(i,k))`.
pub fn cartan_lambda(r: usize, i: usize, k: usize) -> i64 {
    (i.min(k) * (r + 1 - i.max(k))) as i64
}

/// Normal-order generator labels `(1,m_1)…(r,m_r),(1,m_1+1)…(r,m_r+1)`.
pub fn generators(m: &MotzkinPath) -> Vec<Label> {
    let r = m.rank();
    (1..=r)
        .map(|i| Label { row: i, time: m.m(i) })
        .chain((1..=r).map(|i| Label { row: i, time: m.m(i) + 1 }))
        .collect()
}

/// `(Λ_m)_{(i,a),(k,b)} = (b - a) Λ_{ik}` over the normal-order generators.
pub fn build_lambda(m: &MotzkinPath) -> SkewForm {
    let r = m.rank();
    let g = generators(m);
    SkewForm::new(
        g.iter()
            .map(|a| {
                g.iter()
                    .map(|b| (b.time - a.time) * cartan_lambda(r, a.row, b.row))
                    .collect()
            })
            .collect(),
    )
}

/// A cluster: the path, its generator labels and the skew form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClusterSeed {
    path: MotzkinPath,
    generators: Vec<Label>,
    form: Arc<SkewForm>,
}

impl ClusterSeed {
    pub fn new(path: MotzkinPath) -> Self {
        let generators = generators(&path);
        let form = Arc::new(build_lambda(&path));
        Self {
            path,
            generators,
            form,
        }
    }

    pub fn path(&self) -> &MotzkinPath {
        &self.path
    }

    pub fn rank(&self) -> usize {
        self.path.rank()
    }

    pub fn generators(&self) -> &[Label] {
        &self.generators
    }

    pub fn form(&self) -> &Arc<SkewForm> {
        &self.form
    }

    /// Position of `R_{row,time}` in the normal order, if it is in this cluster.
    pub fn index_of(&self, row: usize, time: i64) -> Option<usize> {
        if row == 0 || row > self.rank() {
            return None;
        }
        let m = self.path.m(row);
        if time == m {
            Some(row - 1)
        } else if time == m + 1 {
            Some(self.rank() + row - 1)
        } else {
            None
        }
    }
}

/// `μ_i^±`: shift `m_i` by `direction`.
pub fn mutate_path(m: &MotzkinPath, i: usize, direction: i64) -> Result<MotzkinPath> {
    let r = m.rank();
    if i == 0 || i > r {
        return Err(Error::IndexOutOfRange { index: i, rank: r });
    }
    assert!(direction == 1 || direction == -1, "direction must be ±1");
    let mut v = m.0.clone();
    v[i - 1] += direction;
    MotzkinPath::new(v)
}

/// Skew-symmetric integer matrix; `B_uv > 0` counts arrows `u → v`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ExchangeMatrix(Vec<Vec<i64>>);

impl ExchangeMatrix {
    pub fn new(b: Vec<Vec<i64>>) -> Self {
        let n = b.len();
        for (u, row) in b.iter().enumerate() {
            assert_eq!(row.len(), n, "exchange matrix must be square");
            for v in 0..n {
                assert_eq!(row[v], -b[v][u], "exchange matrix must be skew-symmetric");
            }
        }
        Self(b)
    }

    /// `B_0 = (0 -C; C 0)` with `C` the `A_r` Cartan matrix.
    pub fn fundamental(r: usize) -> Self {
        let c = |i: usize, j: usize| -> i64 {
            if i == j {
                2
            } else if i.abs_diff(j) == 1 {
                -1
            } else {
                0
            }
        };
        let mut b = vec![vec![0; 2 * r]; 2 * r];
        for i in 0..r {
            for j in 0..r {
                b[i][r + j] = -c(i, j);
                b[r + i][j] = c(i, j);
            }
        }
        Self(b)
    }

    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn entry(&self, u: usize, v: usize) -> i64 {
        self.0[u][v]
    }

    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    /// Simultaneous row/column permutation: new index `a` is old `perm[a]`.
    pub fn permuted(&self, perm: &[usize]) -> Self {
        Self(
            perm.iter()
                .map(|&a| perm.iter().map(|&b| self.0[a][b]).collect())
                .collect(),
        )
    }

    pub fn swapped(&self, a: usize, b: usize) -> Self {
        let mut perm: Vec<usize> = (0..self.dim()).collect();
        perm.swap(a, b);
        self.permuted(&perm)
    }

    pub fn negated(&self) -> Self {
        Self(self.0.iter().map(|row| row.iter().map(|x| -x).collect()).collect())
    }
}

/// Matrix mutation at `k` (0-based).
pub fn mutate_exchange_matrix(b: &ExchangeMatrix, k: usize) -> ExchangeMatrix {
    let n = b.dim();
    let mut out = b.0.clone();
    for i in 0..n {
        for j in 0..n {
            out[i][j] = if i == k || j == k {
                -b.0[i][j]
            } else {
                let bik = b.0[i][k];
                b.0[i][j] + bik.signum() * (bik * b.0[k][j]).max(0)
            };
        }
    }
    ExchangeMatrix(out)
}

/// `B_{μ_i^+ m}` from `B_m`: mutate at the vertex `(i, m_i)`, then restore
/// the normal order of the new seed (the new variable `(i, m_i+2)` belongs
/// in the second block, `(i, m_i+1)` moves to the first).
pub fn mutate_forward(b: &ExchangeMatrix, r: usize, i: usize) -> ExchangeMatrix {
    mutate_exchange_matrix(b, i - 1).swapped(i - 1, r + i - 1)
}

/// `B_m` assembled from the local arrow configurations of each step of `m`.
pub fn build_exchange_matrix(m: &MotzkinPath) -> ExchangeMatrix {
    let seed = ClusterSeed::new(m.clone());
    let r = m.rank();
    let mut b = vec![vec![0i64; 2 * r]; 2 * r];
    let idx = |row: usize, time: i64| seed.index_of(row, time).expect("arrow ends are seed variables");
    let mut arrow = |from: (usize, i64), to: (usize, i64), k: i64| {
        let (u, v) = (idx(from.0, from.1), idx(to.0, to.1));
        b[u][v] += k;
        b[v][u] -= k;
    };
    for i in 1..=r {
        let a = m.m(i);
        arrow((i, a + 1), (i, a), 2);
    }
    for i in 1..r {
        let (a, c) = (m.m(i), m.m(i + 1));
        if a == c {
            arrow((i, a), (i + 1, a + 1), 1);
            arrow((i + 1, a), (i, a + 1), 1);
        } else {
            // lower row sits at times (t, t+1), upper row at (t+1, t+2)
            let (lo, hi, t) = if c == a + 1 { (i, i + 1, a) } else { (i + 1, i, c) };
            arrow((lo, t), (hi, t + 1), 1);
            arrow((hi, t + 1), (lo, t + 1), 2);
            arrow((lo, t + 1), (hi, t + 2), 1);
        }
    }
    ExchangeMatrix(b)
}

/// Permutation from the positional cluster order (first block holds each
/// row's even-time variable, second block the odd-time one) to normal order.
pub fn positional_permutation(m: &MotzkinPath) -> Vec<usize> {
    let r = m.rank();
    let mut perm = vec![0; 2 * r];
    for i in 0..r {
        let even_first = m.m(i + 1).rem_euclid(2) == 0;
        perm[i] = if even_first { i } else { r + i };
        perm[r + i] = if even_first { r + i } else { i };
    }
    perm
}

/// `B_m` with rows/columns in positional cluster order.
pub fn positional_exchange_matrix(m: &MotzkinPath) -> ExchangeMatrix {
    build_exchange_matrix(m).permuted(&positional_permutation(m))
}

/// `Λ_m B_m`.
pub fn lambda_times_b(m: &MotzkinPath) -> Vec<Vec<i64>> {
    let lam = build_lambda(m);
    let b = build_exchange_matrix(m);
    let n = b.dim();
    (0..n)
        .map(|i| (0..n).map(|j| (0..n).map(|k| lam.entry(i, k) * b.entry(k, j)).sum()).collect())
        .collect()
}

/// Lemma configurations allowing a forward mutation at `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum MutationCase {
    /// `m_{i-1} = m_i = m_{i+1} - 1`
    I,
    /// `m_{i-1} = m_i = m_{i+1}`
    II,
}

impl fmt::Display for MutationCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            MutationCase::I => "(i)",
            MutationCase::II => "(ii)",
        })
    }
}

/// The case `μ_i^+` on `m` falls under, using flat extension at the ends.
pub fn mutation_case(m: &MotzkinPath, i: usize) -> Option<MutationCase> {
    let (l, c, rt) = (m.ext(i - 1), m.ext(i), m.ext(i + 1));
    if l != c {
        None
    } else if rt == c + 1 {
        Some(MutationCase::I)
    } else if rt == c {
        Some(MutationCase::II)
    } else {
        None
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PlanStep {
    /// 1-based row mutated.
    pub index: usize,
    pub case: MutationCase,
    /// The path the mutation acts on.
    pub from: MotzkinPath,
}

/// Shortest sequence of case-(i)/(ii) forward mutations from `m_0` to `target`.
pub fn plan_mutations(target: &MotzkinPath) -> Result<Vec<PlanStep>> {
    if target.min_height() < 0 {
        return Err(Error::UnreachableTarget(target.to_string()));
    }
    let r = target.rank();
    let start = MotzkinPath::flat(r);
    let cap = target.max_height();
    let mut prev: HashMap<MotzkinPath, Option<PlanStep>> = HashMap::new();
    prev.insert(start.clone(), None);
    let mut queue = VecDeque::from([start]);
    while let Some(m) = queue.pop_front() {
        if &m == target {
            let mut steps = Vec::new();
            let mut cur = m;
            while let Some(Some(step)) = prev.get(&cur) {
                let from = step.from.clone();
                steps.push(step.clone());
                cur = from;
            }
            steps.reverse();
            return Ok(steps);
        }
        for i in 1..=r {
            let Some(case) = mutation_case(&m, i) else { continue };
            let Ok(next) = mutate_path(&m, i, 1) else { continue };
            if next.m(i) > cap || prev.contains_key(&next) {
                continue;
            }
            prev.insert(
                next.clone(),
                Some(PlanStep {
                    index: i,
                    case,
                    from: m.clone(),
                }),
            );
            queue.push_back(next);
        }
    }
    Err(Error::UnreachableTarget(target.to_string()))
}

/// `M_r`: Motzkin paths of rank `r` with minimum exactly 0, in lexicographic order.
pub fn enumerate_fundamental(r: usize) -> Vec<MotzkinPath> {
    fn go(r: usize, cur: &mut Vec<i64>, out: &mut Vec<MotzkinPath>) {
        if cur.len() == r {
            if cur.iter().min() == Some(&0) {
                out.push(MotzkinPath(cur.clone()));
            }
            return;
        }
        let cands: Vec<i64> = match cur.last() {
            None => (0..r as i64).collect(),
            Some(&l) => vec![l - 1, l, l + 1],
        };
        for c in cands {
            if c >= 0 && c < r as i64 {
                cur.push(c);
                go(r, cur, out);
                cur.pop();
            }
        }
    }
    assert!(r >= 1, "rank must be at least 1");
    let mut out = Vec::new();
    go(r, &mut Vec::new(), &mut out);
    out
}

/// A quiver as a labeled skew-symmetric matrix.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Quiver {
    pub vertices: Vec<String>,
    pub matrix: Vec<Vec<i64>>,
}

impl Quiver {
    pub fn from_exchange(seed: &ClusterSeed, b: &ExchangeMatrix) -> Self {
        Self {
            vertices: seed.generators().iter().map(|l| l.to_string()).collect(),
            matrix: b.rows().to_vec(),
        }
    }

    /// `(from, to, multiplicity)` for each positive entry, row-major.
    pub fn arrows(&self) -> Vec<(usize, usize, i64)> {
        let mut out = Vec::new();
        for (u, row) in self.matrix.iter().enumerate() {
            for (v, &k) in row.iter().enumerate() {
                if k > 0 {
                    out.push((u, v, k));
                }
            }
        }
        out
    }

    /// One `u -> v : k` line per arrow bundle.
    pub fn dump(&self) -> String {
        let mut s = String::new();
        for (u, v, k) in self.arrows() {
            s.push_str(&format!("{} -> {} : {}\n", self.vertices[u], self.vertices[v], k));
        }
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(v: &[i64]) -> MotzkinPath {
        MotzkinPath::new(v.to_vec()).unwrap()
    }

    #[test]
    fn path_validation() {
        assert_eq!(
            "0,2".parse::<MotzkinPath>(),
            Err(Error::InvalidPath { step: 1, from: 0, to: 2 })
        );
        assert!("0,x".parse::<MotzkinPath>().is_err());
        assert_eq!(mutate_path(&p(&[0, 0, 0]), 2, 1).unwrap(), p(&[0, 1, 0]));
        assert_eq!(mutate_path(&p(&[0, 0]), 1, 1).unwrap(), p(&[1, 0]));
        assert!(mutate_path(&p(&[0, 1, 2]), 3, 1).is_err());
    }

    #[test]
    fn fundamental_matrices() {
        assert_eq!(build_exchange_matrix(&p(&[0])).rows(), &[vec![0, -2], vec![2, 0]]);
        for r in 1..=4 {
            assert_eq!(build_exchange_matrix(&MotzkinPath::flat(r)), ExchangeMatrix::fundamental(r));
        }
        assert_eq!(build_lambda(&p(&[0])).matrix(), &[vec![0, 1], vec![-1, 0]]);
        assert_eq!(build_lambda(&p(&[0, 0])).entry(0, 3), 1);
    }

    #[test]
    fn mutation_is_an_involution_and_flips_rank_one() {
        let b = ExchangeMatrix::fundamental(1);
        assert_eq!(mutate_exchange_matrix(&b, 0).rows(), &[vec![0, 2], vec![-2, 0]]);
        let b = build_exchange_matrix(&p(&[1, 2, 1]));
        for k in 0..6 {
            assert_eq!(mutate_exchange_matrix(&mutate_exchange_matrix(&b, k), k), b);
        }
    }

    #[test]
    fn planner_examples() {
        assert!(plan_mutations(&p(&[0, 0, 0])).unwrap().is_empty());
        let plan = plan_mutations(&p(&[0, 1, 0])).unwrap();
        assert_eq!(plan.len(), 1);
        assert_eq!((plan[0].index, plan[0].case), (2, MutationCase::II));
        let plan = plan_mutations(&p(&[0, 1, 2])).unwrap();
        let idx: Vec<usize> = plan.iter().map(|s| s.index).collect();
        assert_eq!(idx, vec![3, 2, 3]);
        assert_eq!(plan[1].from, p(&[0, 0, 1]));
        assert_eq!(plan[2].from, p(&[0, 1, 1]));
        assert!(matches!(plan_mutations(&p(&[-1, 0])), Err(Error::UnreachableTarget(_))));
    }

    #[test]
    fn fundamental_domain_sizes() {
        assert_eq!(enumerate_fundamental(1), vec![p(&[0])]);
        assert_eq!(enumerate_fundamental(2), vec![p(&[0, 0]), p(&[0, 1]), p(&[1, 0])]);
        assert_eq!(enumerate_fundamental(3).len(), 9);
    }

    #[test]
    fn quiver_dump() {
        let m = p(&[0]);
        let q = Quiver::from_exchange(&ClusterSeed::new(m.clone()), &build_exchange_matrix(&m));
        assert_eq!(q.dump(), "(1, 1) -> (1, 0) : 2\n");
    }
}
