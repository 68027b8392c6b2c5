//! The verification sweep behind `hermprod verify`: enumerate every tuple
//! with index sum up to the cap and compare the exact assembly against the
//! consolidated display, the I-factor assembly, and the quadrature oracle.

use serde::Serialize;

use hermprod::{
    w4_exact, w4_quadrature, w4_via_consolidated, w4_via_ifactors, Convention, Index4,
};

#[derive(Serialize)]
pub struct Failure {
    pub idx: [u64; 4],
    pub kind: String,
    pub detail: String,
}

#[derive(Serialize)]
pub struct Summary {
    pub command: &'static str,
    pub max_sum: u64,
    pub tol: f64,
    pub tuples_checked: u64,
    pub max_rel_deviation: f64,
    pub max_odd_abs: f64,
    pub failures: Vec<Failure>,
}

const MAX_REPORTED_FAILURES: usize = 100;

pub fn run(max_sum: u64, tol: f64, budget: u64) -> hermprod::Result<Summary> {
    // Cells here are tuples; the default budget admits the stock sweep cap
    // of 80 with room to spare.
    let mut count = 0u64;
    for j in 0..=max_sum {
        for p in 0..=max_sum - j {
            let rest = max_sum - j - p;
            count += (rest + 1) * (rest + 2) / 2;
        }
    }
    if max_sum > 80 && count > budget {
        return Err(hermprod::Error::Resource(format!(
            "{count} tuples at max-sum {max_sum} exceeds the budget {budget}"
        )));
    }

    let mut summary = Summary {
        command: "verify",
        max_sum,
        tol,
        tuples_checked: 0,
        max_rel_deviation: 0.0,
        max_odd_abs: 0.0,
        failures: Vec::new(),
    };

    for j in 0..=max_sum {
        for p in 0..=max_sum - j {
            for q in 0..=max_sum - j - p {
                for k in 0..=max_sum - j - p - q {
                    let idx = Index4::new(j, p, q, k);
                    summary.tuples_checked += 1;
                    let exact = w4_exact(idx, Convention::PaperWeight);
                    if w4_via_consolidated(idx) != exact {
                        push(&mut summary, idx, "consolidated-mismatch", String::new());
                    }
                    if w4_via_ifactors(idx) != exact {
                        push(&mut summary, idx, "ifactor-mismatch", String::new());
                    }
                    let quad: f64 = w4_quadrature(idx, Convention::PaperWeight, None)?;
                    if idx.is_odd() {
                        summary.max_odd_abs = summary.max_odd_abs.max(quad.abs());
                        if !exact.is_zero() {
                            push(&mut summary, idx, "odd-sum-nonzero", String::new());
                        }
                        if quad.abs() > 1e-12 {
                            push(
                                &mut summary,
                                idx,
                                "odd-sum-oracle",
                                format!("|oracle| = {quad:e}"),
                            );
                        }
                    } else {
                        let ex = exact.to_f64();
                        let dev = (ex - quad).abs() / quad.abs().max(1.0);
                        summary.max_rel_deviation = summary.max_rel_deviation.max(dev);
                        if dev > tol {
                            push(
                                &mut summary,
                                idx,
                                "oracle-deviation",
                                format!("exact {ex:e} vs quadrature {quad:e}"),
                            );
                        }
                    }
                }
            }
        }
    }
    Ok(summary)
}

fn push(summary: &mut Summary, idx: Index4, kind: &str, detail: String) {
    if summary.failures.len() < MAX_REPORTED_FAILURES {
        summary.failures.push(Failure {
            idx: idx.as_array(),
            kind: kind.to_string(),
            detail,
        });
    }
}
