//! Truncated operator matrices M^(p,q)_{jk} = W_{jpqk} and the comparison of
//! their Schur bound against the spectral norm.

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{w4_ln_abs, Index4};
use crate::hermite::Convention;

/// Hard cap on the truncation size; entries are exact values rounded once.
pub const MAX_MATRIX_SIZE: usize = 5000;

/// Dense symmetric truncation of the 4-product family at fixed (p, q).
#[derive(Clone, Debug)]
pub struct WMatrix {
    pub p: u64,
    pub q: u64,
    pub size: usize,
    pub convention: Convention,
    entries: Vec<f64>,
}

impl WMatrix {
    #[inline]
    pub fn get(&self, j: usize, k: usize) -> f64 {
        self.entries[j * self.size + k]
    }

    pub fn rows(&self) -> impl Iterator<Item = &[f64]> {
        self.entries.chunks(self.size)
    }

    /// The leading n-by-n truncation (same family, smaller cutoff).
    pub fn leading_submatrix(&self, n: usize) -> WMatrix {
        assert!(n >= 1 && n <= self.size);
        let mut entries = vec![0.0; n * n];
        for j in 0..n {
            entries[j * n..(j + 1) * n].copy_from_slice(&self.entries[j * self.size..j * self.size + n]);
        }
        WMatrix {
            p: self.p,
            q: self.q,
            size: n,
            convention: self.convention,
            entries,
        }
    }

    /// CSV export: a two-line header with p, q, N and convention, then the
    /// dense rows. See docs/formats.md.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("p,q,size,convention\n");
        out.push_str(&format!("{},{},{},{}\n", self.p, self.q, self.size, self.convention));
        for row in self.rows() {
            let cells: Vec<String> = row.iter().map(|v| format!("{v}")).collect();
            out.push_str(&cells.join(","));
            out.push('\n');
        }
        out
    }
}

/// Build the truncated matrix entries[j][k] = W_{jpqk}, j,k < size.
pub fn build_wmatrix(p: u64, q: u64, size: usize, conv: Convention) -> Result<WMatrix> {
    if size == 0 || size > MAX_MATRIX_SIZE {
        return Err(Error::Resource(format!(
            "matrix size must be in 1..={MAX_MATRIX_SIZE}, got {size}"
        )));
    }
    let ln_conv = match conv {
        Convention::PaperWeight => 0.0,
        Convention::Orthonormal => std::f64::consts::PI.ln(),
    };
    // Upper triangle in parallel rows, then mirrored.
    let rows: Vec<Vec<f64>> = (0..size)
        .into_par_iter()
        .map(|j| {
            let mut row = vec![0.0; size - j];
            for k in j..size {
                if !(j as u64 + k as u64 + p + q).is_multiple_of(2) {
                    continue;
                }
                if let Some((sign, ln)) = w4_ln_abs(Index4::new(j as u64, p, q, k as u64)) {
                    let v = (ln - ln_conv).exp();
                    row[k - j] = if sign == std::cmp::Ordering::Less { -v } else { v };
                }
            }
            row
        })
        .collect();
    let mut entries = vec![0.0; size * size];
    for (j, row) in rows.iter().enumerate() {
        for (off, &v) in row.iter().enumerate() {
            let k = j + off;
            entries[j * size + k] = v;
            entries[k * size + j] = v;
        }
    }
    Ok(WMatrix {
        p,
        q,
        size,
        convention: conv,
        entries,
    })
}

/// Schur bound: the maximum absolute row sum (equals the column version by
/// symmetry); an upper bound for the spectral norm of a symmetric matrix.
pub fn schur_norm(m: &WMatrix) -> f64 {
    m.rows()
        .map(|row| row.iter().map(|v| v.abs()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Outcome of the norm comparison.
#[derive(Clone, Debug, Serialize)]
pub struct NormReport {
    pub schur_norm: f64,
    pub opnorm: f64,
    /// schur_norm / opnorm; at least 1 up to roundoff.
    pub ratio: f64,
    pub iterations: usize,
    pub residual: f64,
}

const MAX_POWER_ITERATIONS: usize = 50_000;

fn mat_vec(m: &WMatrix, v: &[f64], out: &mut [f64]) {
    for (j, row) in m.rows().enumerate() {
        out[j] = row.iter().zip(v).map(|(a, b)| a * b).sum();
    }
}

fn power_iteration(m: &WMatrix, start: &[f64], tol: f64) -> Option<(f64, usize, f64)> {
    let n = m.size;
    let mut v = start.to_vec();
    let norm = (v.iter().map(|x| x * x).sum::<f64>()).sqrt();
    v.iter_mut().for_each(|x| *x /= norm);
    let mut av = vec![0.0; n];
    let mut rayleigh = 0.0f64;
    for it in 1..=MAX_POWER_ITERATIONS {
        mat_vec(m, &v, &mut av);
        let new_rayleigh: f64 = v.iter().zip(&av).map(|(a, b)| a * b).sum();
        let norm = (av.iter().map(|x| x * x).sum::<f64>()).sqrt();
        if norm == 0.0 {
            // start vector annihilated; let the caller restart
            return None;
        }
        av.iter_mut().for_each(|x| *x /= norm);
        std::mem::swap(&mut v, &mut av);
        let residual = (new_rayleigh - rayleigh).abs();
        rayleigh = new_rayleigh;
        if it > 1 && residual <= tol {
            return Some((rayleigh.abs(), it, residual));
        }
    }
    None
}

/// Largest-magnitude eigenvalue by power iteration with the deterministic
/// all-ones start, one automatic alternating-sign restart, and a Rayleigh
/// quotient stopping rule.
pub fn operator_norm(m: &WMatrix, tol: f64) -> Result<NormReport> {
    if tol <= 0.0 {
        return Err(Error::Domain("tolerance must be positive".into()));
    }
    let schur = schur_norm(m);
    if schur == 0.0 {
        return Ok(NormReport {
            schur_norm: 0.0,
            opnorm: 0.0,
            ratio: 1.0,
            iterations: 0,
            residual: 0.0,
        });
    }
    let n = m.size;
    let ones = vec![1.0; n];
    let attempt = power_iteration(m, &ones, tol).or_else(|| {
        let alt: Vec<f64> = (0..n).map(|i| if i % 2 == 0 { 1.0 } else { -1.0 }).collect();
        power_iteration(m, &alt, tol)
    });
    let Some((opnorm, iterations, residual)) = attempt else {
        return Err(Error::Convergence(format!(
            "power iteration did not converge in {MAX_POWER_ITERATIONS} iterations"
        )));
    };
    let ratio = schur / opnorm;
    Ok(NormReport {
        schur_norm: schur,
        opnorm,
        ratio,
        iterations,
        residual,
    })
}
