//! Floating-point evaluation of Hermite polynomials and Hermite functions.
//!
//! The function evaluator carries the Gaussian through a normalized
//! three-term recurrence with a binary exponent, so no intermediate value
//! overflows for degrees up to 10^6 and |x| up to 50; far-tail results
//! underflow gracefully to zero only when the true value is subnormal.

use crate::error::{Error, Result};
use crate::real::{from_f64, Real};

/// Normalization convention for the Hermite functions.
///
/// `PaperWeight`: h_j = H_j / sqrt(2^j j!) * e^{-x^2/2}, so ∫ h_j h_k = sqrt(pi) δ_jk.
/// `Orthonormal`: an extra pi^{-1/4} per function, so ∫ h_j h_k = δ_jk.
/// A product of four functions converts by a factor 1/pi from PaperWeight to
/// Orthonormal.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub enum Convention {
    PaperWeight,
    Orthonormal,
}

impl std::fmt::Display for Convention {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Convention::PaperWeight => f.write_str("paper"),
            Convention::Orthonormal => f.write_str("unit"),
        }
    }
}

impl std::str::FromStr for Convention {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "paper" | "paperweight" => Ok(Convention::PaperWeight),
            "unit" | "orthonormal" => Ok(Convention::Orthonormal),
            other => Err(Error::Domain(format!("unknown convention '{other}'"))),
        }
    }
}

/// Default cap on polynomial/function degree. A configuration constant, not
/// a hard mathematical limit.
pub const DEFAULT_MAX_DEGREE: usize = 10_000;

fn check_point<R: Real>(x: R) -> Result<()> {
    if !x.is_finite() {
        return Err(Error::Domain("evaluation point must be finite".into()));
    }
    Ok(())
}

fn check_degree(n: usize) -> Result<()> {
    if n > DEFAULT_MAX_DEGREE {
        return Err(Error::Domain(format!(
            "degree {n} exceeds the configured maximum {DEFAULT_MAX_DEGREE}"
        )));
    }
    Ok(())
}

/// H_n(x) by the raw three-term recurrence H_{n+1} = 2x H_n - 2n H_{n-1}.
///
/// Overflow for large n|x| is reported as an error rather than returned as
/// infinity; callers should switch to `hermite_fn` or a log-scaled path.
pub fn hermite_poly<R: Real>(n: usize, x: R) -> Result<R> {
    check_degree(n)?;
    check_point(x)?;
    let two = from_f64::<R>(2.0);
    let mut prev = R::one();
    if n == 0 {
        return Ok(prev);
    }
    let mut cur = two * x;
    for m in 1..n {
        let next = two * x * cur - two * from_f64::<R>(m as f64) * prev;
        prev = cur;
        cur = next;
    }
    if !cur.is_finite() {
        return Err(Error::Overflow(format!("H_{n}({x:?}) exceeds f64 range")));
    }
    Ok(cur)
}

/// Mantissa/exponent pair: value = mantissa * 2^exp2.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scaled<R> {
    pub mantissa: R,
    pub exp2: i64,
}

impl<R: Real> Scaled<R> {
    pub fn value(self) -> R {
        self.mantissa.scale_exp2(self.exp2)
    }
}

const RESCALE_LIMIT: f64 = 1e150;

/// Run the normalized recurrence g_{m+1} = x sqrt(2/(m+1)) g_m - sqrt(m/(m+1)) g_{m-1}
/// from a scaled seed, rescaling the carried pair to dodge over/underflow.
/// With seed e^{-x^2/2} this produces the paper-weight h_n; with seed 1 it
/// produces H_n / sqrt(2^n n!) (the Gaussian-free factor the quadrature uses).
fn normalized_recurrence<R: Real>(n: usize, x: R, seed: Scaled<R>) -> (Scaled<R>, Scaled<R>) {
    let up = from_f64::<R>(RESCALE_LIMIT);
    let down = from_f64::<R>(1.0 / RESCALE_LIMIT);
    let mut prev = R::zero();
    let mut cur = seed.mantissa;
    let mut exp2 = seed.exp2;
    for m in 0..n {
        let a = x * (from_f64::<R>(2.0 / (m as f64 + 1.0))).sqrt();
        let b = (from_f64::<R>(m as f64 / (m as f64 + 1.0))).sqrt();
        let next = a * cur - b * prev;
        prev = cur;
        cur = next;
        let mag = cur.abs().max(prev.abs());
        if mag > up {
            cur = cur.scale_exp2(-512);
            prev = prev.scale_exp2(-512);
            exp2 += 512;
        } else if mag < down && mag > R::zero() {
            cur = cur.scale_exp2(512);
            prev = prev.scale_exp2(512);
            exp2 -= 512;
        }
    }
    (
        Scaled { mantissa: prev, exp2 },
        Scaled { mantissa: cur, exp2 },
    )
}

fn gaussian_seed<R: Real>(x: R) -> Scaled<R> {
    // e^{-x^2/2} = m * 2^e without underflow for any finite x.
    let t = -(x.to_f64().unwrap().powi(2)) / 2.0;
    let e = (t / std::f64::consts::LN_2).floor();
    Scaled {
        mantissa: from_f64((t - e * std::f64::consts::LN_2).exp()),
        exp2: e as i64,
    }
}

/// Hermite function h_n(x) in the requested convention, via the normalized
/// recurrence (the Gaussian rides along every iterate).
pub fn hermite_fn<R: Real>(n: usize, x: R, conv: Convention) -> Result<R> {
    check_degree(n)?;
    check_point(x)?;
    let (_, hn) = normalized_recurrence(n, x, gaussian_seed(x));
    let v = hn.value();
    Ok(match conv {
        Convention::PaperWeight => v,
        Convention::Orthonormal => v * from_f64(std::f64::consts::PI.powf(-0.25)),
    })
}

/// (h_{n-1}, h_n) paper-weight values on a shared binary exponent.
pub(crate) fn hermite_fn_pair_scaled<R: Real>(n: usize, x: R) -> (Scaled<R>, Scaled<R>) {
    normalized_recurrence(n, x, gaussian_seed(x))
}

/// H_n(x)/sqrt(2^n n!) without the Gaussian, scaled.
pub(crate) fn hermite_normalized_scaled<R: Real>(n: usize, x: R) -> Scaled<R> {
    let seed = Scaled {
        mantissa: R::one(),
        exp2: 0,
    };
    normalized_recurrence(n, x, seed).1
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn poly_base_cases() {
        assert_eq!(hermite_poly::<f64>(0, 3.7).unwrap(), 1.0);
        assert_eq!(hermite_poly::<f64>(2, 1.0).unwrap(), 2.0);
        assert_eq!(hermite_poly::<f64>(3, 0.0).unwrap(), 0.0);
        assert_eq!(hermite_poly::<f64>(1, -2.0).unwrap(), -4.0);
    }

    #[test]
    fn poly_overflow_reported() {
        let err = hermite_poly::<f64>(400, 30.0).unwrap_err();
        assert!(matches!(err, Error::Overflow(_)));
    }

    #[test]
    fn poly_rejects_nan_and_excess_degree() {
        assert!(matches!(
            hermite_poly::<f64>(2, f64::NAN),
            Err(Error::Domain(_))
        ));
        assert!(matches!(
            hermite_poly::<f64>(DEFAULT_MAX_DEGREE + 1, 0.5),
            Err(Error::Domain(_))
        ));
    }

    #[test]
    fn fn_base_cases() {
        assert_eq!(hermite_fn::<f64>(0, 0.0, Convention::PaperWeight).unwrap(), 1.0);
        let h0_unit = hermite_fn::<f64>(0, 0.0, Convention::Orthonormal).unwrap();
        assert!((h0_unit - 0.7511255444649425).abs() < 1e-15);
        let h1 = hermite_fn::<f64>(1, 1.0, Convention::PaperWeight).unwrap();
        assert!((h1 - 0.857763884960707).abs() < 1e-15);
    }

    #[test]
    fn fn_matches_poly_times_weight() {
        // Cross-check against the unnormalized path where it does not overflow.
        for n in 0usize..=200 {
            for &x in &[-5.0f64, -1.3, 0.0, 0.7, 4.1] {
                let h = hermite_fn::<f64>(n, x, Convention::PaperWeight).unwrap();
                let p = hermite_poly::<f64>(n, x).unwrap();
                // weight via logs: e^{-x^2/2} / sqrt(2^n n!)
                let lw = -x * x / 2.0
                    - 0.5 * (n as f64 * std::f64::consts::LN_2 + crate::asymptotics::log_factorial(n as u64));
                let expect = p * lw.exp();
                assert!(
                    (h - expect).abs() <= 1e-10 * expect.abs().max(1e-300),
                    "n={n} x={x}: {h} vs {expect}"
                );
            }
        }
    }

    #[test]
    fn fn_parity() {
        for n in [1usize, 2, 7, 36, 111] {
            for &x in &[0.3f64, 1.7, 4.9] {
                let plus = hermite_fn::<f64>(n, x, Convention::Orthonormal).unwrap();
                let minus = hermite_fn::<f64>(n, -x, Convention::Orthonormal).unwrap();
                let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
                assert!((minus - sign * plus).abs() <= 1e-14 * plus.abs().max(1e-300));
            }
        }
    }

    #[test]
    fn fn_survives_deep_tail_and_high_degree() {
        // x = 50: h_0 is ~1e-543 (true zero in f64), but high modes revive.
        let tail = hermite_fn::<f64>(0, 50.0, Convention::PaperWeight).unwrap();
        assert_eq!(tail, 0.0);
        let revived = hermite_fn::<f64>(2500, 50.0, Convention::PaperWeight).unwrap();
        assert!(revived.is_finite() && revived.abs() > 1e-3, "got {revived}");
        // and n = 10^6-ish degrees stay finite within the default cap
        let big = hermite_fn::<f64>(10_000, 50.0, Convention::PaperWeight).unwrap();
        assert!(big.is_finite());
    }

    #[test]
    fn f32_kernel_agrees_roughly() {
        let a = hermite_fn::<f32>(12, 0.8f32, Convention::PaperWeight).unwrap();
        let b = hermite_fn::<f64>(12, 0.8, Convention::PaperWeight).unwrap();
        assert!((a as f64 - b).abs() < 1e-5);
    }
}
