//! Command-line front end: exact/float evaluation, verification sweeps,
//! bound checking with constant fitting, table export, norm reports and raw
//! quadrature access.
//!
//! Data goes to stdout and is byte-for-byte deterministic for fixed flags;
//! timing goes to stderr. Exit codes: 0 success, 1 verification/math
//! failure, 2 usage error, 3 resource budget exceeded.

use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use hermprod::{
    build_wmatrix, operator_norm, theorem_bound, w4_exact, w4_quadrature, Convention, Index4,
    NormReport,
};

mod verify;

const EXIT_VERIFY_FAILED: i32 = 1;
const EXIT_USAGE: i32 = 2;
const EXIT_RESOURCE: i32 = 3;

/// Enumeration budget in scan cells; HERMPROD_MAX_BUDGET overrides.
fn budget() -> u64 {
    std::env::var("HERMPROD_MAX_BUDGET")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(hermprod::asymptotics::DEFAULT_SCAN_BUDGET)
}

#[derive(Parser)]
#[command(
    name = "hermprod",
    about = "Integrals of products of four Hermite functions: exact values, quadrature oracle, decay bounds and operator-matrix analysis",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConventionArg {
    /// Paper-weight normalization (h_j pairings integrate to sqrt(pi))
    Paper,
    /// Orthonormal functions (extra pi^(-1/4) each; 4-products divide by pi)
    Unit,
}

impl From<ConventionArg> for Convention {
    fn from(c: ConventionArg) -> Self {
        match c {
            ConventionArg::Paper => Convention::PaperWeight,
            ConventionArg::Unit => Convention::Orthonormal,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Exact,
    Float,
    Both,
}

#[derive(Args)]
struct IndexArgs {
    j: u64,
    p: u64,
    q: u64,
    k: u64,
}

#[derive(Subcommand)]
enum Command {
    /// Exact and/or float value of one 4-product integral
    W4 {
        #[command(flatten)]
        idx: IndexArgs,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionArg,
        #[arg(long, value_enum, default_value = "both")]
        format: FormatArg,
    },
    /// Cross-check exact, consolidated, I-factor and quadrature paths over
    /// all tuples with index sum up to --max-sum
    Verify {
        #[arg(long, default_value_t = 12)]
        max_sum: u64,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Stream per-tuple bound reports for fixed (p,q) and fit the constant
    Bounds {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long, default_value_t = 400)]
        jkmax: u64,
    },
    /// CSV table of W values over a (j,k) grid at fixed (p,q)
    Table {
        #[arg(long)]
        jmax: u64,
        #[arg(long, default_value_t = 0)]
        p: u64,
        #[arg(long, default_value_t = 0)]
        q: u64,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionArg,
    },
    /// Schur-vs-operator-norm report for the truncated matrix at (p,q)
    Norms {
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        #[arg(long)]
        size: usize,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionArg,
        #[arg(long, default_value_t = 1e-10)]
        tol: f64,
    },
    /// Raw Gauss-Hermite quadrature of one 4-product integral
    Quad {
        #[command(flatten)]
        idx: IndexArgs,
        #[arg(long)]
        nodes: Option<usize>,
        #[arg(long, value_enum, default_value = "paper")]
        convention: ConventionArg,
    },
}

#[derive(Serialize)]
struct ValueRecord {
    command: &'static str,
    inputs: serde_json::Value,
    results: ResultPayload,
}

#[derive(Serialize)]
struct ResultPayload {
    #[serde(skip_serializing_if = "Option::is_none")]
    exact: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    float: Option<f64>,
    provenance: &'static str,
}

fn exit_code_for(err: &hermprod::Error) -> i32 {
    match err {
        hermprod::Error::Domain(_) => EXIT_USAGE,
        hermprod::Error::Resource(_) => EXIT_RESOURCE,
        _ => EXIT_VERIFY_FAILED,
    }
}

fn main() {
    let started = Instant::now();
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            exit_code_for(&err)
        }
    };
    eprintln!(
        "{}",
        serde_json::json!({ "timing_ms": started.elapsed().as_secs_f64() * 1e3 })
    );
    std::process::exit(code);
}

fn run(cli: Cli) -> hermprod::Result<i32> {
    match cli.command {
        Command::W4 {
            idx,
            convention,
            format,
        } => {
            let index = Index4::new(idx.j, idx.p, idx.q, idx.k);
            let conv: Convention = convention.into();
            let w = w4_exact(index, conv);
            let (exact, float) = match format {
                FormatArg::Exact => (Some(w.canonical_text()), None),
                FormatArg::Float => (None, Some(w.to_f64())),
                FormatArg::Both => (Some(w.canonical_text()), Some(w.to_f64())),
            };
            let rec = ValueRecord {
                command: "w4",
                inputs: serde_json::json!({
                    "j": idx.j, "p": idx.p, "q": idx.q, "k": idx.k,
                    "convention": conv.to_string(),
                }),
                results: ResultPayload {
                    exact,
                    float,
                    provenance: "exact",
                },
            };
            println!("{}", serde_json::to_string(&rec).unwrap());
            Ok(0)
        }
        Command::Verify { max_sum, tol } => {
            if !(tol.is_finite() && tol > 0.0) {
                return Err(hermprod::Error::Domain(format!(
                    "tolerance must be a positive number, got {tol}"
                )));
            }
            let summary = verify::run(max_sum, tol, budget())?;
            let ok = summary.failures.is_empty();
            println!("{}", serde_json::to_string(&summary).unwrap());
            Ok(if ok { 0 } else { EXIT_VERIFY_FAILED })
        }
        Command::Bounds { p, q, jkmax } => {
            if p > 10 || q > 10 {
                return Err(hermprod::Error::Domain(
                    "p and q are capped at 10".into(),
                ));
            }
            if jkmax > 2000 {
                return Err(hermprod::Error::Domain("jkmax is capped at 2000".into()));
            }
            let fit = hermprod::asymptotics::cpq_fit_pair(p, q, jkmax, budget())?;
            let c = fit.c;
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            use std::io::Write;
            for j in 0..=jkmax {
                for k in 0..=j {
                    if (j + k + p + q) % 2 != 0 || (j + k == 0 && p + q == 0) {
                        continue;
                    }
                    let report = theorem_bound(Index4::new(j, p, q, k), c)?;
                    writeln!(lock, "{}", serde_json::to_string(&report).unwrap())
                        .map_err(|e| hermprod::Error::Resource(e.to_string()))?;
                }
            }
            let a = if p + q > 0 {
                Some(c.powf(1.0 / (p + q) as f64))
            } else {
                None
            };
            writeln!(
                lock,
                "{}",
                serde_json::json!({ "fitted": { "p": p, "q": q, "c": c, "a": a, "jkmax": jkmax } })
            )
            .map_err(|e| hermprod::Error::Resource(e.to_string()))?;
            Ok(0)
        }
        Command::Table {
            jmax,
            p,
            q,
            convention,
        } => {
            let conv: Convention = convention.into();
            println!("j,p,q,k,W_float,W_exact,provenance");
            for j in 0..=jmax {
                for k in 0..=jmax {
                    let w = w4_exact(Index4::new(j, p, q, k), conv);
                    println!(
                        "{j},{p},{q},{k},{},{},exact",
                        w.to_f64(),
                        w.canonical_text()
                    );
                }
            }
            Ok(0)
        }
        Command::Norms {
            p,
            q,
            size,
            convention,
            tol,
        } => {
            let conv: Convention = convention.into();
            let m = build_wmatrix(p, q, size, conv)?;
            let report: NormReport = operator_norm(&m, tol)?;
            let rec = serde_json::json!({
                "command": "norms",
                "inputs": { "p": p, "q": q, "size": size, "convention": conv.to_string(), "tol": tol },
                "results": report,
                "provenance": "exact",
            });
            println!("{}", serde_json::to_string(&rec).unwrap());
            Ok(0)
        }
        Command::Quad {
            idx,
            nodes,
            convention,
        } => {
            let index = Index4::new(idx.j, idx.p, idx.q, idx.k);
            let conv: Convention = convention.into();
            let v: f64 = w4_quadrature(index, conv, nodes)?;
            let rec = ValueRecord {
                command: "quad",
                inputs: serde_json::json!({
                    "j": idx.j, "p": idx.p, "q": idx.q, "k": idx.k,
                    "nodes": nodes.unwrap_or_else(|| hermprod::auto_npoints(index)),
                    "convention": conv.to_string(),
                }),
                results: ResultPayload {
                    exact: None,
                    float: Some(v),
                    provenance: "quadrature",
                },
            };
            println!("{}", serde_json::to_string(&rec).unwrap());
            Ok(0)
        }
    }
}
