//! Exact 4-product integrals W_{jpqk} = ∫ h_j h_p h_q h_k dx.
//!
//! Three independent assemblies of the same value are kept side by side:
//! the generating-function route (linearization coefficients against the
//! diagonal integrals c_l), the consolidated double-binomial display, and the
//! I-factor route. Exact agreement of all three is enforced by tests; the
//! generating-function route is the one the public `w4_exact` uses.

use std::cmp::Ordering;
use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::factorial::{accumulate_factorial_exponents, alt_sign, factorial};
use super::linearize::{a_coeff, coeff_inner_sum, linearize};
use super::radical::{bigfloat, ExactRadical};
use crate::hermite::Convention;

/// A 4-tuple of non-negative Hermite indices (j, p, q, k).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, serde::Serialize, serde::Deserialize)]
pub struct Index4 {
    pub j: u64,
    pub p: u64,
    pub q: u64,
    pub k: u64,
}

impl Index4 {
    pub fn new(j: u64, p: u64, q: u64, k: u64) -> Self {
        Index4 { j, p, q, k }
    }

    pub fn sum(&self) -> u64 {
        self.j + self.p + self.q + self.k
    }

    /// The integrand is even or odd with the total degree.
    pub fn is_odd(&self) -> bool {
        self.sum() % 2 == 1
    }

    /// Outer pair (j, k) and inner pair (p, q), reordered so the pair with
    /// the smaller sum plays the role of (p, q).
    pub fn normalized_pairs(&self) -> ((u64, u64), (u64, u64)) {
        let outer = (self.j, self.k);
        let inner = (self.p, self.q);
        if inner.0 + inner.1 <= outer.0 + outer.1 {
            (outer, inner)
        } else {
            (inner, outer)
        }
    }

    pub fn as_array(&self) -> [u64; 4] {
        [self.j, self.p, self.q, self.k]
    }
}

impl From<[u64; 4]> for Index4 {
    fn from(a: [u64; 4]) -> Self {
        Index4::new(a[0], a[1], a[2], a[3])
    }
}

/// Diagonal integral c_l = ∫ [H_l(sqrt2 x)]^2 e^{-2x^2} dx = 2^(l-1/2) l! sqrt(pi).
pub fn c_integral(l: u64) -> ExactRadical {
    let coeff = BigRational::from_integer((BigInt::one() << l) * factorial(l));
    ExactRadical::new(coeff, BigRational::new(BigInt::one(), BigInt::from(2)), 1)
}

/// Closed-form W_{j00k} (paper-weight convention): zero for odd j+k, else
/// (-1)^((j-k)/2) (j+k)! / (2^(j+k) ((j+k)/2)! sqrt(j! k!)) * sqrt(pi/2).
pub fn w2_00(j: u64, k: u64) -> ExactRadical {
    if !(j + k).is_multiple_of(2) {
        return ExactRadical::zero();
    }
    let coeff = BigRational::new(
        factorial(j + k) * alt_sign((j as i64 - k as i64) / 2),
        (BigInt::one() << (j + k)) * factorial((j + k) / 2),
    );
    let mut exps = BTreeMap::new();
    exps.insert(2, -1i64);
    accumulate_factorial_exponents(j, -1, &mut exps);
    accumulate_factorial_exponents(k, -1, &mut exps);
    ExactRadical::from_sqrt_exponents(coeff, &exps, 1)
}

/// Exact W_{jpqk} assembled from the generating-function linearization:
/// I = sum_l a_l b_l c_l against the Hermite-function normalization.
pub fn w4_exact(idx: Index4, conv: Convention) -> ExactRadical {
    let w = w4_exact_paper(idx);
    match conv {
        Convention::PaperWeight => w,
        // Four pi^(-1/4) factors: exact division by pi.
        Convention::Orthonormal => w.div_pi(),
    }
}

fn w4_exact_paper(idx: Index4) -> ExactRadical {
    if idx.is_odd() {
        return ExactRadical::zero();
    }
    let ((j, k), (p, q)) = idx.normalized_pairs();
    // Only the inner pair's few expansion coefficients are needed; the outer
    // pair's are computed on demand rather than expanding all of H_j H_k.
    let b = linearize(p, q);
    // The rescaled-basis coefficients of both pairs carry sqrt(2)^-sigma each;
    // together that is an exact factor 2^-sigma.
    let sigma = (j + k) % 2;
    let mut s = BigRational::zero();
    for (&l, bl) in &b.coeffs {
        let al = a_coeff(j, k, l);
        if al.is_zero() {
            continue;
        }
        // c_l = 2^l l! sqrt(pi/2); the radical is factored out of the sum.
        s += al * bl * BigRational::from_integer((BigInt::one() << l) * factorial(l));
    }
    if sigma == 1 {
        s /= BigRational::from_integer(BigInt::from(2));
    }
    if s.is_zero() {
        return ExactRadical::zero();
    }
    // Prefactor 1/sqrt(2^(j+p+q+k) j! p! q! k!) and the sqrt(pi/2) from c_l.
    let mut exps = BTreeMap::new();
    exps.insert(2, -(idx.sum() as i64) - 1);
    for n in [j, k, p, q] {
        accumulate_factorial_exponents(n, -1, &mut exps);
    }
    ExactRadical::from_sqrt_exponents(s, &exps, 1)
}

/// Exact W_{jpqk} from the consolidated double-binomial display (cross-check
/// path; must agree with `w4_exact` identically).
pub fn w4_via_consolidated(idx: Index4) -> ExactRadical {
    if idx.is_odd() {
        return ExactRadical::zero();
    }
    let ((j, k), (p, q)) = idx.normalized_pairs();
    let half_total = ((j + k + p + q) / 2) as i64;
    let mut s = BigRational::zero();
    let mut l = p + q;
    loop {
        let sjk = coeff_inner_sum(l, j, k);
        let spq = coeff_inner_sum(l, p, q);
        if !sjk.is_zero() && !spq.is_zero() {
            let num = (BigInt::one() << l) * sjk * spq * alt_sign(half_total - l as i64);
            let den = factorial((j + k - l) / 2) * factorial((p + q - l) / 2) * factorial(l);
            s += BigRational::new(num, den);
        }
        if l < 2 {
            break;
        }
        l -= 2;
    }
    if s.is_zero() {
        return ExactRadical::zero();
    }
    // sqrt(j!k!p!q!) * sqrt(pi/2) / 2^(j+p+q+k)
    let coeff = s / BigRational::from_integer(BigInt::one() << idx.sum());
    let mut exps = BTreeMap::new();
    exps.insert(2, -1i64);
    for n in [j, k, p, q] {
        accumulate_factorial_exponents(n, 1, &mut exps);
    }
    ExactRadical::from_sqrt_exponents(coeff, &exps, 1)
}

/// I-factor I_jk^(l): sqrt(j!k!)/2^(j+k) * 1/((j+k-l)/2)! * inner sum.
/// Exact zero when l exceeds j+k or has the wrong parity.
pub fn i_factor(j: u64, k: u64, l: u64) -> ExactRadical {
    if l > j + k || !(j + k - l).is_multiple_of(2) {
        return ExactRadical::zero();
    }
    let s = coeff_inner_sum(l, j, k);
    if s.is_zero() {
        return ExactRadical::zero();
    }
    let coeff = BigRational::new(s, (BigInt::one() << (j + k)) * factorial((j + k - l) / 2));
    let mut exps = BTreeMap::new();
    accumulate_factorial_exponents(j, 1, &mut exps);
    accumulate_factorial_exponents(k, 1, &mut exps);
    ExactRadical::from_sqrt_exponents(coeff, &exps, 0)
}

/// Exact W_{jpqk} from the I-factor assembly
/// W = sqrt(pi/2) sum_l (-1)^((j+k+p+q)/2 - l) 2^l/l! I_jk^(l) I_pq^(l);
/// must equal `w4_exact` identically.
pub fn w4_via_ifactors(idx: Index4) -> ExactRadical {
    if idx.is_odd() {
        return ExactRadical::zero();
    }
    let ((j, k), (p, q)) = idx.normalized_pairs();
    let half_total = ((j + k + p + q) / 2) as i64;
    let mut acc = ExactRadical::zero();
    let mut l = p + q;
    loop {
        let ijk = i_factor(j, k, l);
        let ipq = i_factor(p, q, l);
        if !ijk.is_zero() && !ipq.is_zero() {
            let term = ijk.mul(&ipq).scale(&BigRational::new(
                (BigInt::one() << l) * alt_sign(half_total - l as i64),
                factorial(l),
            ));
            acc = acc
                .add_same_radicand(&term)
                .expect("I-factor products share one radicand per tuple");
        }
        if l < 2 {
            break;
        }
        l -= 2;
    }
    acc.mul(&ExactRadical::sqrt_pi_over_two())
}

/// Sign and natural log of |W_{jpqk}| (paper weight) computed from the exact
/// rational sum with a log-factorial prefactor: the scan-friendly route that
/// rounds once at the end. None when the value is exactly zero.
pub fn w4_ln_abs(idx: Index4) -> Option<(Ordering, f64)> {
    if idx.is_odd() {
        return None;
    }
    let ((j, k), (p, q)) = idx.normalized_pairs();
    let half_total = ((j + k + p + q) / 2) as i64;
    let mut s = BigRational::zero();
    let mut l = p + q;
    loop {
        let sjk = coeff_inner_sum(l, j, k);
        let spq = coeff_inner_sum(l, p, q);
        if !sjk.is_zero() && !spq.is_zero() {
            let num = (BigInt::one() << l) * sjk * spq * alt_sign(half_total - l as i64);
            let den = factorial((j + k - l) / 2) * factorial((p + q - l) / 2) * factorial(l);
            s += BigRational::new(num, den);
        }
        if l < 2 {
            break;
        }
        l -= 2;
    }
    if s.is_zero() {
        return None;
    }
    let lf = crate::asymptotics::log_factorial;
    let ln = bigfloat::ln_abs_ratio(&s)
        + 0.5 * (lf(j) + lf(k) + lf(p) + lf(q))
        - idx.sum() as f64 * std::f64::consts::LN_2
        + 0.5 * (std::f64::consts::PI / 2.0).ln();
    let sign = if s.is_negative() {
        Ordering::Less
    } else {
        Ordering::Greater
    };
    Some((sign, ln))
}

/// |W| rounded to f64 via the log route; exact zeros map to 0.0.
pub fn w4_abs_f64(idx: Index4) -> f64 {
    match w4_ln_abs(idx) {
        None => 0.0,
        Some((_, ln)) => ln.exp(),
    }
}

/// Signed W as f64 via the log route.
pub fn w4_f64(idx: Index4, conv: Convention) -> f64 {
    let scale = match conv {
        Convention::PaperWeight => 0.0,
        Convention::Orthonormal => std::f64::consts::PI.ln(),
    };
    match w4_ln_abs(idx) {
        None => 0.0,
        Some((sign, ln)) => {
            let v = (ln - scale).exp();
            if sign == Ordering::Less {
                -v
            } else {
                v
            }
        }
    }
}
