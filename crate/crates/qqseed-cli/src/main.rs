//! `qqseed`: series, verification and quiver inspection for the quantum
//! A_r Q-system.
//!
//! Exit codes: 0 success, 1 verification failure, 2 usage error.

use std::process::ExitCode;

use clap::{Parser, ValueEnum};
use qqseed::cfrac::TSeries;
use qqseed::closedform::{series_closed, Which};
use qqseed::cluster::{build_exchange_matrix, enumerate_fundamental, ClusterSeed, MotzkinPath, Quiver};
use qqseed::verify::{run_verify, Fault, Report, VerifyConfig, CHECKS};
use qqseed::weights::{comm_quiver, weights_explicit};
use serde_json::{json, Value};

const SCHEMA: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    Series,
    Verify,
    Quiver,
    Paths,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Parser)]
#[command(name = "qqseed", version, about = "Exact generating series of the quantum A_r Q-system")]
struct Cli {
    /// Rank r ≥ 1.
    #[arg(long)]
    rank: usize,
    /// Motzkin path as comma-separated heights, or "all" for every path with minimum 0.
    #[arg(long, default_value = "all")]
    path: String,
    /// Truncation order N in t.
    #[arg(long, default_value_t = 4)]
    order: usize,
    #[arg(long, value_enum, default_value_t = Mode::Series)]
    mode: Mode,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Specialize to q = 1 (series mode) / add the commutative comparison (verify mode).
    #[arg(long)]
    q1: bool,
    /// Worker threads (0 = one per core).
    #[arg(long, env = "QQ_SEED_THREADS", default_value_t = 0)]
    threads: usize,
    /// Verify checks to leave out (repeatable or comma-separated).
    #[arg(long, value_delimiter = ',')]
    skip: Vec<String>,
}

struct Usage(String);

fn paths(cli: &Cli) -> Result<Vec<MotzkinPath>, Usage> {
    if cli.rank == 0 {
        return Err(Usage("--rank must be at least 1".into()));
    }
    if cli.path == "all" {
        return Ok(enumerate_fundamental(cli.rank));
    }
    let m: MotzkinPath = cli.path.parse().map_err(|e: qqseed::Error| Usage(e.to_string()))?;
    if m.rank() != cli.rank {
        return Err(Usage(format!("path {m} has {} entries but --rank is {}", m.rank(), cli.rank)));
    }
    Ok(vec![m])
}

fn q1_series(s: &TSeries) -> Value {
    let coeffs: Vec<Value> = s
        .coeffs()
        .iter()
        .map(|c| {
            Value::Array(
                c.eval_q1()
                    .into_iter()
                    .map(|(e, v)| json!({ "exponents": e, "coeff": v.to_string() }))
                    .collect(),
            )
        })
        .collect();
    json!({ "order": s.order(), "coeffs": coeffs })
}

fn q1_text(x: &qqseed::qtorus::TorusElem) -> String {
    let terms: Vec<String> = x.eval_q1().into_iter().map(|(e, v)| format!("{v}·x^{e:?}")).collect();
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join(" + ")
    }
}

fn run_series(cli: &Cli, ms: &[MotzkinPath]) -> String {
    use rayon::prelude::*;
    let computed: Vec<(MotzkinPath, TSeries, TSeries)> = ms
        .par_iter()
        .map(|m| {
            let y = weights_explicit(&ClusterSeed::new(m.clone()));
            (m.clone(), series_closed(m, Which::F, cli.order, &y), series_closed(m, Which::G, cli.order, &y))
        })
        .collect();
    match cli.format {
        Format::Json => {
            let results: Vec<Value> = computed
                .iter()
                .map(|(m, f, g)| {
                    let (f, g) = if cli.q1 {
                        (q1_series(f), q1_series(g))
                    } else {
                        (serde_json::to_value(f).unwrap(), serde_json::to_value(g).unwrap())
                    };
                    json!({ "path": m, "F": f, "G": g })
                })
                .collect();
            let out = json!({ "schema": SCHEMA, "mode": "series", "rank": cli.rank, "order": cli.order, "q1": cli.q1, "results": results });
            serde_json::to_string_pretty(&out).unwrap()
        }
        Format::Text => {
            let mut s = String::new();
            for (m, f, g) in &computed {
                s.push_str(&format!("path {m}\n"));
                for (name, series) in [("F", f), ("G", g)] {
                    s.push_str(&format!("  {name}:\n"));
                    for (n, c) in series.coeffs().iter().enumerate() {
                        let shown = if cli.q1 { q1_text(c) } else { c.to_string() };
                        s.push_str(&format!("    t^{n}: {shown}\n"));
                    }
                }
            }
            s.pop();
            s
        }
    }
}

fn verify_text(rep: &Report) -> String {
    let mut s = String::new();
    for c in &rep.results {
        let path = c.path.as_ref().map(|p| p.to_string()).unwrap_or_else(|| "-".into());
        let tag = if c.passed { "PASS" } else { "FAIL" };
        s.push_str(&format!("{tag}  {path:<12} {:<22} {}\n", c.check, c.detail));
    }
    let failed = rep.results.iter().filter(|c| !c.passed).count();
    s.push_str(&format!("{} checks, {failed} failed", rep.results.len()));
    if let Some(c) = rep.first_failure() {
        s.push_str(&format!("\nfirst counterexample: {}", serde_json::to_string(&c.counterexample).unwrap()));
    }
    s
}

fn run_verify_mode(cli: &Cli, ms: Vec<MotzkinPath>) -> Result<(String, bool), Usage> {
    if let Some(bad) = cli.skip.iter().find(|s| !CHECKS.contains(&s.as_str())) {
        return Err(Usage(format!("unknown check '{bad}' (known: {})", CHECKS.join(", "))));
    }
    let mut cfg = VerifyConfig::new(cli.rank, ms, cli.order);
    cfg.q1 = cli.q1;
    cfg.skip = cli.skip.clone();
    cfg.fault = match std::env::var("QQSEED_FAULT").as_deref() {
        Ok("weight") => Some(Fault::Weight),
        _ => None,
    };
    let rep = run_verify(&cfg);
    let text = match cli.format {
        Format::Text => verify_text(&rep),
        Format::Json => {
            let out = json!({
                "schema": SCHEMA,
                "mode": "verify",
                "rank": cli.rank,
                "order": cli.order,
                "passed": rep.passed(),
                "results": rep.results,
                "first_counterexample": rep.first_failure().and_then(|c| c.counterexample.clone()),
            });
            serde_json::to_string_pretty(&out).unwrap()
        }
    };
    Ok((text, rep.passed()))
}

fn rows(q: &Quiver) -> String {
    let r: Vec<String> = q.matrix.iter().map(|row| format!("{row:?}").replace(' ', "")).collect();
    format!("[{}]", r.join(","))
}

fn run_quiver(cli: &Cli, ms: &[MotzkinPath]) -> String {
    let data: Vec<(MotzkinPath, Quiver, Quiver)> = ms
        .iter()
        .map(|m| {
            let seed = ClusterSeed::new(m.clone());
            let b = Quiver::from_exchange(&seed, &build_exchange_matrix(m));
            let c = comm_quiver(&weights_explicit(&seed)).expect("weights p-commute");
            (m.clone(), b, c)
        })
        .collect();
    match cli.format {
        Format::Json => {
            let results: Vec<Value> = data
                .iter()
                .map(|(m, b, c)| json!({ "path": m, "exchange": b, "commutation": c }))
                .collect();
            serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "mode": "quiver", "rank": cli.rank, "results": results })).unwrap()
        }
        Format::Text => {
            let mut s = String::new();
            for (m, b, c) in &data {
                s.push_str(&format!("path {m}\nB = {}\n# exchange quiver\n{}# commutation quiver\n{}", rows(b), b.dump(), c.dump()));
            }
            s.pop();
            s
        }
    }
}

fn run_paths(cli: &Cli) -> String {
    let ms = enumerate_fundamental(cli.rank);
    match cli.format {
        Format::Json => serde_json::to_string_pretty(&json!({ "schema": SCHEMA, "mode": "paths", "rank": cli.rank, "paths": ms })).unwrap(),
        Format::Text => ms.iter().map(|m| m.to_string()).collect::<Vec<_>>().join("\n"),
    }
}

fn run(cli: &Cli) -> Result<(String, bool), Usage> {
    if cli.threads > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(cli.threads)
            .build_global()
            .map_err(|e| Usage(e.to_string()))?;
    }
    if cli.mode == Mode::Paths {
        if cli.rank == 0 {
            return Err(Usage("--rank must be at least 1".into()));
        }
        return Ok((run_paths(cli), true));
    }
    let ms = paths(cli)?;
    match cli.mode {
        Mode::Series => Ok((run_series(cli, &ms), true)),
        Mode::Verify => run_verify_mode(cli, ms),
        Mode::Quiver => Ok((run_quiver(cli, &ms), true)),
        Mode::Paths => unreachable!(),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok((out, passed)) => {
            println!("{out}");
            if passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(Usage(msg)) => {
            eprintln!("qqseed: {msg}");
            ExitCode::from(2)
        }
    }
}
