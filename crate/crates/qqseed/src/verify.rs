//! Every consistency check in one place, driven per path; the CLI's
//! `verify` mode and the acceptance suite both run through here.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::cfrac::{expand_continued_fraction, f_from_g, path_partition, rearrangement_sides, TSeries};
use crate::closedform::{
    ascending_product, coeff_a, coeff_a_recursive, flat_product_f, indices_up_to, series_closed, Which,
};
use crate::cluster::{
    build_exchange_matrix, lambda_times_b, mutate_forward, mutate_path, plan_mutations, positional_exchange_matrix,
    ClusterSeed, MotzkinPath,
};
use crate::error::Result;
use crate::oracle::classical::{evolve_classical, CPoly};
use crate::oracle::{evolve_for_series, positivity_check, series_f_oracle, series_g_oracle, QSystemState, Window};
use crate::qcoeff::QLaurent;
use crate::qtorus::{SkewForm, TorusElem};
use crate::weights::{comm_quiver, expected_comm_quiver, hat_weights, weights_explicit, weights_fundamental, weights_mutate, WeightVector};

/// Check names, in report order.
pub const CHECKS: &[&str] = &[
    "series_three_way",
    "positivity",
    "coeff_a_recursive",
    "special_cases",
    "weights_mutation",
    "comm_quiver",
    "compatibility",
    "quasi_periodicity",
    "mutation_consistency",
    "q_system_recursion",
    "rearrangement",
    "path_model",
    "classical_limit",
];

/// Deliberate corruption for exercising the failure path.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Fault {
    /// Multiply `y_1` by `q` before building the series.
    Weight,
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub rank: usize,
    pub paths: Vec<MotzkinPath>,
    pub order: usize,
    /// Also run the `q = 1` comparison against the commutative recursion.
    pub q1: bool,
    /// Check names to leave out.
    pub skip: Vec<String>,
    pub fault: Option<Fault>,
    /// Number of randomized rearrangement instances.
    pub rearrangement_cases: usize,
}

impl VerifyConfig {
    pub fn new(rank: usize, paths: Vec<MotzkinPath>, order: usize) -> Self {
        Self {
            rank,
            paths,
            order,
            q1: false,
            skip: Vec::new(),
            fault: None,
            rearrangement_cases: 100,
        }
    }

    fn wants(&self, check: &str) -> bool {
        !self.skip.iter().any(|s| s == check) && (check != "classical_limit" || self.q1)
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    /// `None` for path-independent checks.
    pub path: Option<MotzkinPath>,
    pub check: String,
    pub passed: bool,
    pub detail: String,
    pub counterexample: Option<Value>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub results: Vec<CheckResult>,
}

impl Report {
    pub fn passed(&self) -> bool {
        self.results.iter().all(|c| c.passed)
    }

    pub fn first_failure(&self) -> Option<&CheckResult> {
        self.results.iter().find(|c| !c.passed)
    }

    pub fn get(&self, path: Option<&MotzkinPath>, check: &str) -> Option<&CheckResult> {
        self.results.iter().find(|c| c.path.as_ref() == path && c.check == check)
    }
}

fn ok(path: &Option<MotzkinPath>, check: &str, detail: impl Into<String>) -> CheckResult {
    CheckResult {
        path: path.clone(),
        check: check.into(),
        passed: true,
        detail: detail.into(),
        counterexample: None,
    }
}

fn fail(path: &Option<MotzkinPath>, check: &str, detail: impl Into<String>, cx: Value) -> CheckResult {
    CheckResult {
        path: path.clone(),
        check: check.into(),
        passed: false,
        detail: detail.into(),
        counterexample: Some(cx),
    }
}

/// The three computations of `F_m`, `G_m` for one path.
pub struct SeriesBundle {
    pub weights: WeightVector,
    pub closed_f: TSeries,
    pub closed_g: TSeries,
    pub cfrac_f: TSeries,
    pub cfrac_g: TSeries,
    pub oracle: QSystemState,
    pub oracle_f: TSeries,
    pub oracle_g: TSeries,
}

/// Compute all three series; `fault` corrupts the weights fed to the closed
/// form and the continued fraction (the oracle is untouched).
pub fn series_bundle(m: &MotzkinPath, order: usize, fault: Option<Fault>) -> Result<SeriesBundle> {
    let seed = ClusterSeed::new(m.clone());
    let mut y = weights_explicit(&seed);
    if fault == Some(Fault::Weight) {
        let bad = y.y(1).shift_q(1);
        y.set(1, bad);
    }
    let closed_f = series_closed(m, Which::F, order, &y);
    let closed_g = series_closed(m, Which::G, order, &y);
    let cfrac_g = expand_continued_fraction(m, &y, &hat_weights(&y, m), order)?;
    let cfrac_f = f_from_g(&cfrac_g, y.y(1));
    let oracle = evolve_for_series(&seed, order)?;
    let oracle_f = series_f_oracle(&oracle, order)?;
    let oracle_g = series_g_oracle(&oracle, order)?;
    Ok(SeriesBundle {
        weights: y,
        closed_f,
        closed_g,
        cfrac_f,
        cfrac_g,
        oracle,
        oracle_f,
        oracle_g,
    })
}

fn series_diff(name: &str, a: &TSeries, b: &TSeries, an: &str, bn: &str) -> Option<(String, Value)> {
    let d = a.first_difference(b)?;
    Some((
        format!("{name}: {an} and {bn} differ at t^{d}"),
        json!({ "series": name, "degree": d, an: a.coeff(d), bn: b.coeff(d) }),
    ))
}

fn check_series(p: &Option<MotzkinPath>, b: &SeriesBundle) -> CheckResult {
    let c = "series_three_way";
    let pairs = [
        ("F", &b.closed_f, &b.cfrac_f, "closed", "cfrac"),
        ("F", &b.cfrac_f, &b.oracle_f, "cfrac", "oracle"),
        ("G", &b.closed_g, &b.cfrac_g, "closed", "cfrac"),
        ("G", &b.cfrac_g, &b.oracle_g, "cfrac", "oracle"),
    ];
    for (name, x, y, xn, yn) in pairs {
        if let Some((d, v)) = series_diff(name, x, y, xn, yn) {
            return fail(p, c, d, v);
        }
    }
    ok(p, c, format!("F, G agree to t^{}", b.oracle_f.order()))
}

fn check_positivity(p: &Option<MotzkinPath>, b: &SeriesBundle) -> CheckResult {
    let c = "positivity";
    let series = [("F", &b.closed_f), ("G", &b.closed_g)];
    for (name, s) in series {
        for (d, x) in s.coeffs().iter().enumerate() {
            if let Some((e, q)) = positivity_check(x).witness {
                return fail(p, c, format!("{name} at t^{d}"), json!({ "series": name, "degree": d, "exponent": e, "coeff": q }));
            }
        }
    }
    let mut n = 0;
    for (&(i, t), x) in b.oracle.cells() {
        if let Some((e, q)) = positivity_check(x).witness {
            return fail(p, c, format!("R_{{{i},{t}}}"), json!({ "cell": format!("({i},{t})"), "exponent": e, "coeff": q }));
        }
        n += 1;
    }
    ok(p, c, format!("series and {n} Q-system cells positive"))
}

fn check_recursion(p: &Option<MotzkinPath>, b: &SeriesBundle) -> CheckResult {
    match b.oracle.check_recursion() {
        Ok(n) => ok(p, "q_system_recursion", format!("{n} interior cells")),
        Err((i, j)) => fail(p, "q_system_recursion", format!("relation fails at ({i},{j})"), json!({ "cell": [i, j] })),
    }
}

fn check_coeff_a(p: &Option<MotzkinPath>, m: &MotzkinPath, order: usize) -> CheckResult {
    let c = "coeff_a_recursive";
    let all = indices_up_to(m, order);
    for ell in &all {
        let (a, b) = (coeff_a(m, ell), coeff_a_recursive(m, ell));
        if a != b {
            return fail(p, c, format!("index {:?}", ell.0), json!({ "index": ell.0, "product": a, "recursive": b }));
        }
    }
    ok(p, c, format!("{} indices", all.len()))
}

/// The flat and ascending special-case products; `None` for other paths.
fn check_special(p: &Option<MotzkinPath>, m: &MotzkinPath, order: usize) -> Option<CheckResult> {
    let c = "special_cases";
    let r = m.rank();
    let flat = *m == MotzkinPath::flat(r);
    let asc = *m == MotzkinPath::ascending(r);
    if !flat && !asc {
        return None;
    }
    let all = indices_up_to(m, order);
    for ell in &all {
        let a = coeff_a(m, ell);
        let (fa, ga, gb) = if flat {
            let g = crate::closedform::flat_product_g(r, ell);
            (flat_product_f(r, ell), coeff_a(m, &ell.shift_first(1)), g)
        } else {
            (
                ascending_product(r, ell, Which::F),
                coeff_a(m, &ell.shift_first(1)),
                ascending_product(r, ell, Which::G),
            )
        };
        if a != fa || ga != gb {
            return Some(fail(p, c, format!("index {:?}", ell.0), json!({ "index": ell.0, "coeff_a": a, "theorem_f": fa, "shifted_coeff_a": ga, "theorem_g": gb })));
        }
    }
    let which = if flat { "flat" } else { "ascending" };
    Some(ok(p, c, format!("{which} products on {} indices", all.len())))
}

fn check_weights(p: &Option<MotzkinPath>, m: &MotzkinPath) -> CheckResult {
    let c = "weights_mutation";
    let plan = match plan_mutations(m) {
        Ok(plan) => plan,
        Err(e) => return fail(p, c, e.to_string(), json!({ "path": m })),
    };
    let mut y = weights_fundamental(m.rank());
    for step in &plan {
        y = match weights_mutate(&y, step.index, step.case) {
            Ok(y) => y,
            Err(e) => return fail(p, c, e.to_string(), json!({ "step": step })),
        };
    }
    let want = weights_explicit(&ClusterSeed::new(m.clone()));
    if let Some(j) = (1..=2 * m.rank() + 1).find(|&j| y.y(j) != want.y(j)) {
        return fail(p, c, format!("y_{j} differs"), json!({ "j": j, "mutated": y.y(j), "explicit": want.y(j) }));
    }
    if y != want {
        return fail(p, c, "seeds differ", json!({ "path": m }));
    }
    ok(p, c, format!("{} mutations", plan.len()))
}

fn check_comm_quiver(p: &Option<MotzkinPath>, m: &MotzkinPath) -> CheckResult {
    let c = "comm_quiver";
    let y = weights_explicit(&ClusterSeed::new(m.clone()));
    match comm_quiver(&y) {
        Err(e) => fail(p, c, e.to_string(), json!({ "path": m })),
        Ok(q) => {
            let want = expected_comm_quiver(m);
            if q == want {
                ok(p, c, format!("{} arrow bundles", q.arrows().len()))
            } else {
                fail(p, c, "multiplicities differ", json!({ "computed": q.matrix, "expected": want.matrix }))
            }
        }
    }
}

fn check_compat(p: &Option<MotzkinPath>, m: &MotzkinPath) -> CheckResult {
    let c = "compatibility";
    let lb = lambda_times_b(m);
    let r = m.rank() as i64;
    let n = lb.len();
    let good = (0..n).all(|i| (0..n).all(|j| lb[i][j] == if i == j { r + 1 } else { 0 }));
    if good {
        ok(p, c, format!("Λ B = {}·I", r + 1))
    } else {
        fail(p, c, "Λ B is not (r+1)·I", json!({ "lambda_b": lb }))
    }
}

fn check_quasi_periodicity(p: &Option<MotzkinPath>, m: &MotzkinPath) -> CheckResult {
    let c = "quasi_periodicity";
    let b = positional_exchange_matrix(m);
    let b1 = positional_exchange_matrix(&m.translate(1));
    if b1 == b.negated() {
        ok(p, c, "B_{m+1} = -B_m")
    } else {
        fail(p, c, "B_{m+1} != -B_m in positional order", json!({ "b_m": b.rows(), "b_m_plus_1": b1.rows() }))
    }
}

fn check_mutation(p: &Option<MotzkinPath>, m: &MotzkinPath) -> CheckResult {
    let c = "mutation_consistency";
    let r = m.rank();
    let b = build_exchange_matrix(m);
    let mut n = 0;
    for i in 1..=r {
        let Ok(next) = mutate_path(m, i, 1) else { continue };
        let got = mutate_forward(&b, r, i);
        let want = build_exchange_matrix(&next);
        if got != want {
            return fail(p, c, format!("μ_{i}^+ disagrees"), json!({ "index": i, "mutated": got.rows(), "built": want.rows() }));
        }
        n += 1;
    }
    ok(p, c, format!("{n} forward mutations"))
}

fn check_path_model(p: &Option<MotzkinPath>, m: &MotzkinPath, b: &SeriesBundle) -> Option<CheckResult> {
    let r = m.rank();
    if *m != MotzkinPath::flat(r) || r > 2 {
        return None;
    }
    let c = "path_model";
    let walks = path_partition(r, &b.weights, b.cfrac_g.order());
    Some(match walks.first_difference(&b.cfrac_g) {
        None => ok(p, c, format!("walks agree to t^{}", walks.order())),
        Some(d) => fail(p, c, format!("differs at t^{d}"), json!({ "degree": d, "walks": walks.coeff(d), "cfrac": b.cfrac_g.coeff(d) })),
    })
}

fn cpoly_of(x: &TorusElem) -> CPoly {
    CPoly(x.eval_q1())
}

fn check_classical(p: &Option<MotzkinPath>, m: &MotzkinPath, order: usize, b: &SeriesBundle) -> CheckResult {
    let c = "classical_limit";
    let seed = ClusterSeed::new(m.clone());
    let w = match evolve_classical(&seed, &Window::for_series(&seed, order)) {
        Ok(w) => w,
        Err(e) => return fail(p, c, e.to_string(), json!({ "path": m })),
    };
    for (&(i, t), x) in b.oracle.cells() {
        if cpoly_of(x) != w[&(i, t)] {
            return fail(p, c, format!("R_{{{i},{t}}} at q=1"), json!({ "cell": format!("({i},{t})") }));
        }
    }
    // F at q = 1 is R_{1,m_1+n} / R_{1,m_1}, a monomial shift.
    let e0: Vec<i64> = {
        let mut e = vec![0; 2 * m.rank()];
        e[seed.index_of(1, m.m(1)).unwrap()] = 1;
        e
    };
    for (n, x) in b.closed_f.coeffs().iter().enumerate() {
        let want = w[&(1, m.m(1) + n as i64)].mul(&CPoly::monomial(e0.iter().map(|v| -v).collect(), 1.into()));
        if cpoly_of(x) != want {
            return fail(p, c, format!("F at q=1 differs at t^{n}"), json!({ "degree": n }));
        }
    }
    ok(p, c, format!("{} cells and F to t^{order}", w.len()))
}

fn random_monomial(rng: &mut StdRng, form: &std::sync::Arc<SkewForm>) -> TorusElem {
    let e = (0..form.dim()).map(|_| rng.random_range(-2..=2)).collect();
    let sign = if rng.random_bool(0.2) { -1 } else { 1 };
    TorusElem::monomial(form, e, QLaurent::monomial(rng.random_range(-3..=3), sign))
}

/// Both sides of the rearrangement identity on `cases` random instances:
/// `a, b, c` are `t`-degree-one monomials and `u` a short series with zero
/// constant term.
pub fn check_rearrangement(rank: usize, order: usize, cases: usize, seed: u64) -> CheckResult {
    let c = "rearrangement";
    let none = None;
    let mut rng = StdRng::seed_from_u64(seed);
    let form = ClusterSeed::new(MotzkinPath::flat(rank)).form().clone();
    for k in 0..cases {
        let a = TSeries::monomial(&random_monomial(&mut rng, &form), 1, order);
        let b = TSeries::monomial(&random_monomial(&mut rng, &form), 1, order);
        let cc = TSeries::monomial(&random_monomial(&mut rng, &form), 1, order);
        let mut u = TSeries::zero(&form, order);
        for _ in 0..rng.random_range(1..=3) {
            let d = rng.random_range(1..=order.max(1));
            u = &u + &TSeries::monomial(&random_monomial(&mut rng, &form), d, order);
        }
        match rearrangement_sides(&a, &b, &cc, &u) {
            Err(e) => return fail(&none, c, e.to_string(), json!({ "case": k })),
            Ok((l, r)) => {
                if let Some(d) = l.first_difference(&r) {
                    return fail(&none, c, format!("case {k} differs at t^{d}"), json!({ "case": k, "a": a, "b": b, "c": cc, "u": u }));
                }
            }
        }
    }
    ok(&none, c, format!("{cases} instances to t^{order}"))
}

fn verify_path(cfg: &VerifyConfig, m: &MotzkinPath) -> Vec<CheckResult> {
    let p = Some(m.clone());
    let mut out = Vec::new();
    let needs_series = ["series_three_way", "positivity", "q_system_recursion", "path_model", "classical_limit"]
        .iter()
        .any(|c| cfg.wants(c));
    let bundle = if needs_series {
        match series_bundle(m, cfg.order, cfg.fault) {
            Ok(b) => Some(b),
            Err(e) => {
                out.push(fail(&p, "series_three_way", e.to_string(), json!({ "path": m })));
                None
            }
        }
    } else {
        None
    };
    if let Some(b) = &bundle {
        if cfg.wants("series_three_way") {
            out.push(check_series(&p, b));
        }
        if cfg.wants("positivity") {
            out.push(check_positivity(&p, b));
        }
        if cfg.wants("q_system_recursion") {
            out.push(check_recursion(&p, b));
        }
        if cfg.wants("path_model") {
            out.extend(check_path_model(&p, m, b));
        }
        if cfg.wants("classical_limit") {
            out.push(check_classical(&p, m, cfg.order, b));
        }
    }
    if cfg.wants("coeff_a_recursive") {
        out.push(check_coeff_a(&p, m, cfg.order));
    }
    if cfg.wants("special_cases") {
        out.extend(check_special(&p, m, cfg.order));
    }
    if cfg.wants("weights_mutation") {
        out.push(check_weights(&p, m));
    }
    if cfg.wants("comm_quiver") {
        out.push(check_comm_quiver(&p, m));
    }
    if cfg.wants("compatibility") {
        out.push(check_compat(&p, m));
    }
    if cfg.wants("quasi_periodicity") {
        out.push(check_quasi_periodicity(&p, m));
    }
    if cfg.wants("mutation_consistency") {
        out.push(check_mutation(&p, m));
    }
    out
}

fn check_rank(c: &CheckResult) -> usize {
    CHECKS.iter().position(|n| *n == c.check).unwrap_or(CHECKS.len())
}

/// Run every selected check; paths run in parallel, results are sorted by
/// path and then by check.
pub fn run_verify(cfg: &VerifyConfig) -> Report {
    let mut results: Vec<CheckResult> = cfg.paths.par_iter().flat_map(|m| verify_path(cfg, m)).collect();
    if cfg.wants("rearrangement") {
        results.push(check_rearrangement(cfg.rank, cfg.order.min(6), cfg.rearrangement_cases, 0x5eed));
    }
    results.sort_by(|a, b| (&a.path, check_rank(a)).cmp(&(&b.path, check_rank(b))));
    Report { results }
}
