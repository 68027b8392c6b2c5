//! Stirling asymptotics, the two-index decay bound and the three-tier bound
//! verification machinery, all in floating point derived from exact values.
//!
//! Tier units. The two-index closed form obeys |W_{j00k}| <= (1/sqrt J) e^{-K^2/2J}
//! with J = (j+k)/2, K = (j-k)/2, and that is the shape the tiers here use:
//! with G = K^2/(2J),
//!
//!   tier1(C) = (C/sqrt J) e^{-G} * sum_{l=0}^{floor((p+q)/2)} G^l / l!
//!   tier2(C) = (C/sqrt J) e^{-2G/3}      when (j-k)/sqrt(j+k) >= sqrt(p+q)
//!   tier3(C) = C/sqrt J
//!
//! The proportionality constants these envelopes hide are made measurable by
//! `cpq_fit`, which reports the smallest C_{p,q} covering all three tiers on
//! a scanned grid together with the smallest a with C_{p,q} <= a^(p+q).

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::{w4_ln_abs, Index4};

const LN_2: f64 = std::f64::consts::LN_2;

/// Natural log of n!, accurate to 1e-12 relative for all n: exact
/// summation below 256, Stirling's log series beyond.
pub fn log_factorial(n: u64) -> f64 {
    static SMALL: std::sync::OnceLock<Vec<f64>> = std::sync::OnceLock::new();
    let small = SMALL.get_or_init(|| {
        let mut t = vec![0.0f64; 256];
        let mut acc = 0.0f64;
        let mut comp = 0.0f64; // Kahan carry
        for m in 1..256u64 {
            let y = (m as f64).ln() - comp;
            let s = acc + y;
            comp = (s - acc) - y;
            acc = s;
            t[m as usize] = acc;
        }
        t
    });
    if n < 256 {
        return small[n as usize];
    }
    let x = n as f64;
    (x + 0.5) * x.ln() - x + 0.5 * (2.0 * std::f64::consts::PI).ln() + 1.0 / (12.0 * x)
        - 1.0 / (360.0 * x.powi(3))
        + 1.0 / (1260.0 * x.powi(5))
}

fn check_even_pair(j: u64, k: u64) -> Result<(u64, u64)> {
    if !(j + k).is_multiple_of(2) {
        return Err(Error::Domain(format!("j+k must be even, got j={j} k={k}")));
    }
    if j + k == 0 {
        return Err(Error::Domain("j+k must be at least 2".into()));
    }
    Ok(((j + k) / 2, j.abs_diff(k) / 2))
}

/// Leading Stirling term of W_{j00k}: (-1)^K J! / sqrt(2J (J+K)! (J-K)!),
/// evaluated through log-factorials so it never overflows.
pub fn w2_asymptotic(j: u64, k: u64) -> Result<f64> {
    let (cap_j, cap_k) = check_even_pair(j, k)?;
    let ln = log_factorial(cap_j)
        - 0.5 * ((2.0 * cap_j as f64).ln() + log_factorial(cap_j + cap_k) + log_factorial(cap_j - cap_k));
    let sign = if cap_k % 2 == 0 { 1.0 } else { -1.0 };
    Ok(sign * ln.exp())
}

/// Gaussian decay bound on the two-index integral: (1/sqrt J) e^{-K^2/2J}.
pub fn w2_bound(j: u64, k: u64) -> Result<f64> {
    let (cap_j, cap_k) = check_even_pair(j, k)?;
    let jf = cap_j as f64;
    let kf = cap_k as f64;
    Ok((1.0 / jf.sqrt()) * (-kf * kf / (2.0 * jf)).exp())
}

/// ln of |W_{j00k}| through log-factorials (None for parity zeros). Fast
/// enough for the full j,k <= 2000 scan.
pub fn w2_ln_abs(j: u64, k: u64) -> Option<f64> {
    if !(j + k).is_multiple_of(2) {
        return None;
    }
    Some(
        log_factorial(j + k) - (j + k) as f64 * LN_2 - log_factorial((j + k) / 2)
            - 0.5 * (log_factorial(j) + log_factorial(k))
            + 0.5 * (std::f64::consts::PI / 2.0).ln(),
    )
}

/// The entropy-like function phi(x) = (1+x)log(1+x) + (1-x)log(1-x) on [0,1],
/// with the continuous extension phi(1) = 2 log 2.
pub fn phi(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::Domain(format!("phi domain is [0,1], got {x}")));
    }
    let up = (1.0 + x) * (1.0 + x).ln();
    let down = if x == 1.0 { 0.0 } else { (1.0 - x) * (1.0 - x).ln() };
    Ok(up + down)
}

fn check_ifactor_args(j: u64, k: u64, l: u64) -> Result<()> {
    if l > j + k || !(j + k - l).is_multiple_of(2) {
        return Err(Error::Domain(format!(
            "need l <= j+k with matching parity, got j={j} k={k} l={l}"
        )));
    }
    Ok(())
}

/// ln of the double factorial n!! (with (-1)!! = 0!! = 1).
fn ln_double_factorial(n: i64) -> f64 {
    match n {
        -1 | 0 => 0.0,
        n if n % 2 == 0 => {
            let m = (n / 2) as u64;
            m as f64 * LN_2 + log_factorial(m)
        }
        n => {
            let m = ((n - 1) / 2) as u64;
            log_factorial(n as u64) - m as f64 * LN_2 - log_factorial(m)
        }
    }
}

/// Exact magnitude of F1 = |I_jk^(0)| * l!/2^(l/2) * (j+k-l-1)!!/(j+k-1)!!,
/// as a float derived from exact logs.
pub fn f1_exact(j: u64, k: u64, l: u64) -> Result<f64> {
    check_ifactor_args(j, k, l)?;
    let ln = ln_i0_abs(j, k) + log_factorial(l) - 0.5 * l as f64 * LN_2
        + ln_double_factorial((j + k) as i64 - l as i64 - 1)
        - ln_double_factorial((j + k) as i64 - 1);
    Ok(ln.exp())
}

/// The claimed envelope |F1| <= |I_jk^(0)| * l!/2^(l/2) * e^(l/2)/(j+k)^floor(l/2).
pub fn f1_bound(j: u64, k: u64, l: u64) -> Result<f64> {
    check_ifactor_args(j, k, l)?;
    if j + k == 0 {
        // l = 0 as well; the correction factors are empty.
        return Ok(1.0);
    }
    let ln = ln_i0_abs(j, k) + log_factorial(l) - 0.5 * l as f64 * LN_2 + l as f64 / 2.0
        - (l / 2) as f64 * ((j + k) as f64).ln();
    Ok(ln.exp())
}

/// ln |I_jk^(0)| = ln[(j+k)! / (2^(j+k) ((j+k)/2)! sqrt(j!k!))].
fn ln_i0_abs(j: u64, k: u64) -> f64 {
    log_factorial(j + k)
        - (j + k) as f64 * LN_2
        - log_factorial((j + k) / 2)
        - 0.5 * (log_factorial(j) + log_factorial(k))
}

/// Half-sum / half-difference coordinates of the outer pair, kept exact,
/// plus the scaled separation X = (j-k)/sqrt(j+k).
#[derive(Clone, Debug)]
pub struct JKCoords {
    /// J = (j+k)/2 (a half-integer when j+k is odd).
    pub half_sum: BigRational,
    /// K = |j-k|/2.
    pub half_diff: BigRational,
    /// X = |j-k|/sqrt(j+k).
    pub x_scaled: f64,
}

impl JKCoords {
    pub fn new(j: u64, k: u64) -> Self {
        let half = BigRational::new(1.into(), 2.into());
        JKCoords {
            half_sum: BigRational::from_integer((j + k).into()) * half.clone(),
            half_diff: BigRational::from_integer(j.abs_diff(k).into()) * half,
            x_scaled: if j + k == 0 {
                0.0
            } else {
                j.abs_diff(k) as f64 / ((j + k) as f64).sqrt()
            },
        }
    }
}

/// Per-tuple record of |W| against each tier of the three-tier bound.
#[derive(Clone, Debug, Serialize)]
pub struct BoundReport {
    pub idx: [u64; 4],
    pub abs_w: f64,
    pub tier1: f64,
    /// Present only when X >= sqrt(p+q).
    pub tier2: Option<f64>,
    pub tier3: f64,
    pub cpq_used: f64,
    pub ok_tier1: bool,
    pub ok_tier2: Option<bool>,
    pub ok_tier3: bool,
}

const OK_MARGIN: f64 = 1e-12;

fn tier_units(outer: (u64, u64), inner_sum: u64) -> (f64, Option<f64>, f64) {
    let (j, k) = outer;
    let jf = (j + k) as f64 / 2.0; // J
    let g = {
        let kf = j.abs_diff(k) as f64 / 2.0;
        kf * kf / (2.0 * jf)
    };
    let inv_sqrt_j = 1.0 / jf.sqrt();
    let m = (inner_sum / 2) as i64;
    let mut sum = 0.0;
    let mut term = 1.0;
    for l in 0..=m {
        if l > 0 {
            term *= g / l as f64;
        }
        sum += term;
    }
    let tier1 = inv_sqrt_j * (-g).exp() * sum;
    let x = j.abs_diff(k) as f64 / ((j + k) as f64).sqrt();
    let tier2 = if x >= (inner_sum as f64).sqrt() {
        Some(inv_sqrt_j * (-2.0 * g / 3.0).exp())
    } else {
        None
    };
    (tier1, tier2, inv_sqrt_j)
}

/// Evaluate the three-tier bound for one tuple with the supplied constant.
/// |W| comes from the exact assembly, rounded once.
pub fn theorem_bound(idx: Index4, cpq: f64) -> Result<BoundReport> {
    if cpq <= 0.0 {
        return Err(Error::Domain("cpq must be positive".into()));
    }
    let (outer, inner) = idx.normalized_pairs();
    if outer.0 + outer.1 == 0 {
        return Err(Error::Domain(
            "the (0,0,0,0) tuple has no decay direction; j+k must be positive after pair normalization".into(),
        ));
    }
    let abs_w = match w4_ln_abs(idx) {
        None => 0.0,
        Some((_, ln)) => ln.exp(),
    };
    let (u1, u2, u3) = tier_units(outer, inner.0 + inner.1);
    let tier1 = cpq * u1;
    let tier2 = u2.map(|u| cpq * u);
    let tier3 = cpq * u3;
    Ok(BoundReport {
        idx: idx.as_array(),
        abs_w,
        tier1,
        tier2,
        tier3,
        cpq_used: cpq,
        ok_tier1: abs_w <= tier1 * (1.0 + OK_MARGIN),
        ok_tier2: tier2.map(|t| abs_w <= t * (1.0 + OK_MARGIN)),
        ok_tier3: abs_w <= tier3 * (1.0 + OK_MARGIN),
    })
}

/// Fitted constant for one inner pair.
#[derive(Clone, Debug, Serialize)]
pub struct CpqEntry {
    pub p: u64,
    pub q: u64,
    /// Smallest constant covering every tier over the scanned grid.
    pub c: f64,
    pub need_tier1: f64,
    pub need_tier2: f64,
    pub need_tier3: f64,
}

/// Result of the constant fit over a (j,k) grid.
#[derive(Clone, Debug, Serialize)]
pub struct CpqFit {
    pub jkmax: u64,
    pub entries: Vec<CpqEntry>,
    /// Smallest a with C_{p,q} <= a^(p+q) over the fitted pairs (p+q >= 1).
    pub a: f64,
}

impl CpqFit {
    pub fn constant(&self, p: u64, q: u64) -> Option<f64> {
        self.entries
            .iter()
            .find(|e| (e.p, e.q) == (p, q) || (e.q, e.p) == (p, q))
            .map(|e| e.c)
    }
}

/// Cells explored per fitted pair are capped by this default budget; the CLI
/// can raise it explicitly.
pub const DEFAULT_SCAN_BUDGET: u64 = 400_000_000;

/// The per-tier constants one inner pair needs over a (j,k) grid.
fn scan_pair(p: u64, q: u64, jkmax: u64) -> (f64, f64, f64) {
    (0..=jkmax)
        .into_par_iter()
        .map(|j| {
            let mut m1 = 0.0f64;
            let mut m2 = 0.0f64;
            let mut m3 = 0.0f64;
            for k in 0..=j {
                if !(j + k + p + q).is_multiple_of(2) {
                    continue;
                }
                if j + k == 0 && p + q == 0 {
                    continue;
                }
                let idx = Index4::new(j, p, q, k);
                let Some((_, ln_w)) = w4_ln_abs(idx) else {
                    continue;
                };
                let (outer, inner) = idx.normalized_pairs();
                let (u1, u2, u3) = tier_units(outer, inner.0 + inner.1);
                let w = ln_w.exp();
                m1 = m1.max(w / u1);
                if let Some(u2) = u2 {
                    m2 = m2.max(w / u2);
                }
                m3 = m3.max(w / u3);
            }
            (m1, m2, m3)
        })
        .reduce(
            || (0.0, 0.0, 0.0),
            |a, b| (a.0.max(b.0), a.1.max(b.1), a.2.max(b.2)),
        )
}

/// Fit the constant one (p,q) needs, without scanning the whole rectangle.
pub fn cpq_fit_pair(p: u64, q: u64, jkmax: u64, budget: u64) -> Result<CpqEntry> {
    if p > 10 || q > 10 {
        return Err(Error::Domain("p and q are capped at 10".into()));
    }
    let cells = (jkmax + 1) * (jkmax + 1);
    if cells > budget {
        return Err(Error::Resource(format!(
            "scan of {cells} cells exceeds the budget of {budget}"
        )));
    }
    let (n1, n2, n3) = scan_pair(p, q, jkmax);
    Ok(CpqEntry {
        p,
        q,
        c: n1.max(n2).max(n3),
        need_tier1: n1,
        need_tier2: n2,
        need_tier3: n3,
    })
}

/// Fit the tier constants: for each (p,q) up to (pmax,qmax), the smallest
/// C making every tier hold over all even-total (j,k) with j,k <= jkmax,
/// then the smallest a with C_{p,q} <= a^(p+q). Deterministic given ranges.
pub fn cpq_fit(pmax: u64, qmax: u64, jkmax: u64, budget: u64) -> Result<CpqFit> {
    if pmax > 10 || qmax > 10 {
        return Err(Error::Domain("pmax and qmax are capped at 10".into()));
    }
    // C_{p,q} = C_{q,p}; fit one representative when the mirror is in range.
    let mut pairs: Vec<(u64, u64)> = Vec::new();
    for p in 0..=pmax {
        for q in 0..=qmax {
            if q < p && q <= pmax && p <= qmax {
                continue;
            }
            pairs.push((p, q));
        }
    }
    let cells = (jkmax + 1) * (jkmax + 1) * pairs.len() as u64;
    if cells > budget {
        return Err(Error::Resource(format!(
            "scan of {cells} cells exceeds the budget of {budget}"
        )));
    }

    let mut entries = Vec::new();
    for &(p, q) in &pairs {
        let (n1, n2, n3) = scan_pair(p, q, jkmax);
        entries.push(CpqEntry {
            p,
            q,
            c: n1.max(n2).max(n3),
            need_tier1: n1,
            need_tier2: n2,
            need_tier3: n3,
        });
    }
    let a = entries
        .iter()
        .filter(|e| e.p + e.q >= 1)
        .map(|e| e.c.powf(1.0 / (e.p + e.q) as f64))
        .fold(0.0f64, f64::max);
    Ok(CpqFit {
        jkmax,
        entries,
        a,
    })
}
