//! Exact linearization of Hermite-polynomial products.
//!
//! H_j(x) H_k(x) expands over Hermite polynomials in sqrt(2)x. The expansion
//! coefficients here are stated in the rescaled basis
//!
//! ```text
//! B_l(x) = H_l(sqrt(2) x) * sqrt(2)^-(l mod 2)
//! ```
//!
//! which has integer polynomial coefficients, so every expansion coefficient
//! is an exact rational for both parities of j+k. For even j+k (the only
//! parity that contributes to the integrals) B_l is H_l(sqrt(2)x) itself.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::factorial::{alt_sign, binomial, factorial};
use crate::error::{Error, Result};

/// Inner alternating sum of the expansion coefficient for the pair (a, b):
/// sum_r (-1)^(b-r) C(l, r) C(a+b-l, b-r).
pub(crate) fn coeff_inner_sum(l: u64, a: u64, b: u64) -> BigInt {
    let mut s = BigInt::zero();
    for r in 0..=l {
        let m = b as i64 - r as i64;
        let c = binomial((a + b - l) as i64, m);
        if c.is_zero() {
            continue;
        }
        s += binomial(l as i64, r as i64) * c * alt_sign(m);
    }
    s
}

/// Expansion coefficient of H_j H_k on B_l (see module docs). Zero when l
/// exceeds j+k or has the wrong parity.
pub fn a_coeff(j: u64, k: u64, l: u64) -> BigRational {
    if l > j + k || !(j + k - l).is_multiple_of(2) {
        return BigRational::zero();
    }
    let s = coeff_inner_sum(l, j, k);
    if s.is_zero() {
        return BigRational::zero();
    }
    let num = factorial(j) * factorial(k) * s * alt_sign(((j + k - l) / 2) as i64);
    let den = (BigInt::one() << ((j + k) / 2)) * factorial(l) * factorial((j + k - l) / 2);
    BigRational::new(num, den)
}

/// Exact expansion of H_j H_k over the rescaled basis B_l.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LinearizationExpansion {
    pub j: u64,
    pub k: u64,
    /// Nonzero coefficients, keyed by l; only l = j+k, j+k-2, ... appear.
    pub coeffs: BTreeMap<u64, BigRational>,
}

impl LinearizationExpansion {
    /// Coefficient on B_l (zero when absent).
    pub fn coeff(&self, l: u64) -> BigRational {
        self.coeffs.get(&l).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Evaluate sum_l coeff_l B_l(x) exactly at a rational point.
    pub fn evaluate(&self, x: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for (&l, c) in &self.coeffs {
            acc += c * eval_scaled_basis(l, x);
        }
        acc
    }
}

/// Expansion of H_j H_k over B_l, per the generating-function coefficients.
pub fn linearize(j: u64, k: u64) -> LinearizationExpansion {
    let mut coeffs = BTreeMap::new();
    let mut l = j + k;
    loop {
        let c = a_coeff(j, k, l);
        if !c.is_zero() {
            coeffs.insert(l, c);
        }
        if l < 2 {
            break;
        }
        l -= 2;
    }
    LinearizationExpansion { j, k, coeffs }
}

/// Integer coefficients of H_n(x), constant term first.
pub fn hermite_poly_coeffs(n: u64) -> Vec<BigInt> {
    let mut prev = vec![BigInt::one()]; // H_0
    if n == 0 {
        return prev;
    }
    let mut cur = vec![BigInt::zero(), BigInt::from(2)]; // H_1
    for m in 1..n {
        // H_{m+1} = 2x H_m - 2m H_{m-1}
        let mut next = vec![BigInt::zero(); m as usize + 2];
        for (i, c) in cur.iter().enumerate() {
            next[i + 1] += 2 * c;
        }
        for (i, c) in prev.iter().enumerate() {
            next[i] -= 2 * BigInt::from(m) * c;
        }
        prev = cur;
        cur = next;
    }
    cur
}

/// Integer coefficients of B_l(x) = H_l(sqrt(2)x) / sqrt(2)^(l mod 2).
pub fn scaled_basis_coeffs(l: u64) -> Vec<BigInt> {
    hermite_poly_coeffs(l)
        .into_iter()
        .enumerate()
        .map(|(m, c)| {
            if c.is_zero() {
                c
            } else {
                // x^m picks up sqrt(2)^m; only m = l (mod 2) occurs.
                c << (m as u64 / 2)
            }
        })
        .collect()
}

fn eval_poly(coeffs: &[BigInt], x: &BigRational) -> BigRational {
    let mut acc = BigRational::zero();
    for c in coeffs.iter().rev() {
        acc = acc * x + BigRational::from_integer(c.clone());
    }
    acc
}

/// H_n at a rational point, exactly.
pub fn hermite_poly_exact(n: u64, x: &BigRational) -> BigRational {
    eval_poly(&hermite_poly_coeffs(n), x)
}

/// B_l at a rational point, exactly.
pub fn eval_scaled_basis(l: u64, x: &BigRational) -> BigRational {
    eval_poly(&scaled_basis_coeffs(l), x)
}

/// Which of the two equivalent binomial forms of the F2 sum to evaluate.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum F2Form {
    /// sum_r (-1)^r C(k, r) C(j, l-r)
    A,
    /// sum_r (-1)^r C(k, r) C(j-k, l-2r); requires j >= k
    B,
}

/// The alternating binomial sum F2 in either of its two closed forms.
pub fn f2_sum(j: u64, k: u64, l: u64, form: F2Form) -> Result<BigInt> {
    match form {
        F2Form::A => {
            let mut s = BigInt::zero();
            for r in 0..=l {
                let t = binomial(k as i64, r as i64) * binomial(j as i64, l as i64 - r as i64);
                if !t.is_zero() {
                    s += t * alt_sign(r as i64);
                }
            }
            Ok(s)
        }
        F2Form::B => {
            if j < k {
                return Err(Error::Domain(format!(
                    "F2 form B requires j >= k, got j={j}, k={k}"
                )));
            }
            let mut s = BigInt::zero();
            for r in 0..=l / 2 {
                let t = binomial(k as i64, r as i64)
                    * binomial((j - k) as i64, l as i64 - 2 * r as i64);
                if !t.is_zero() {
                    s += t * alt_sign(r as i64);
                }
            }
            Ok(s)
        }
    }
}
