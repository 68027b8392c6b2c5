//! Exact radical values of the form  coeff · sqrt(radicand) · sqrt(pi)^pi_pow.
//!
//! Every linearization coefficient, I-factor and 4-product integral in this
//! crate lives in the set { q * sqrt(r) * pi^(e/2) : q, r rational, e integer },
//! which is closed under multiplication. The canonical form keeps the
//! radicand squarefree (numerator and denominator separately, coprime), so
//! equality of values is equality of components.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::{BigInt, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// ln and one-rounding f64 conversion helpers for big integers/rationals.
pub(crate) mod bigfloat {
    use super::*;

    const LN_2: f64 = std::f64::consts::LN_2;

    /// Natural log of a positive big integer.
    pub fn ln_bigint(n: &BigInt) -> f64 {
        debug_assert!(n.is_positive());
        let bits = n.bits();
        if bits <= 53 {
            return n.to_f64().unwrap().ln();
        }
        let shift = bits - 53;
        let head: BigInt = n >> shift;
        head.to_f64().unwrap().ln() + shift as f64 * LN_2
    }

    /// Natural log of the absolute value of a nonzero rational.
    pub fn ln_abs_ratio(r: &BigRational) -> f64 {
        ln_bigint(&r.numer().abs()) - ln_bigint(&r.denom().abs())
    }

    /// Round a rational to the nearest f64, overflowing to +-inf gracefully.
    pub fn ratio_to_f64(r: &BigRational) -> f64 {
        if r.is_zero() {
            return 0.0;
        }
        let num = r.numer().abs();
        let den = r.denom().abs();
        let e = num.bits() as i64 - den.bits() as i64;
        // Shift so the integer quotient carries ~80 significant bits.
        let s = 80 - e;
        let q = if s >= 0 {
            (&num << s as u64) / &den
        } else {
            &num / (&den << (-s) as u64)
        };
        let mut v = q.to_f64().unwrap();
        v = crate::real::Real::scale_exp2(v, -s);
        if r.is_negative() {
            -v
        } else {
            v
        }
    }
}

/// Exact value coeff * sqrt(radicand) * sqrt(pi)^pi_pow.
///
/// Invariants: the radicand is a positive rational with squarefree numerator
/// and denominator; all square factors live in `coeff`. Zero is canonically
/// (0, 1, 0). For 4-product integrals in the paper-weight convention,
/// pi_pow = 1 and value^2 = coeff^2 * pi * radicand.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactRadical {
    coeff: BigRational,
    radicand: BigRational,
    pi_pow: i8,
}

impl ExactRadical {
    /// Canonical zero.
    pub fn zero() -> Self {
        ExactRadical {
            coeff: BigRational::zero(),
            radicand: BigRational::one(),
            pi_pow: 0,
        }
    }

    /// Place each radicand prime on the side matching the sign of its total
    /// exponent in value^2, so equal values have equal components no matter
    /// which assembly built them. Factorization-free: a prime needs moving
    /// exactly when it divides both the radicand and the opposite part of
    /// the coefficient, which repeated gcds detect.
    fn rebalanced(mut self) -> Self {
        if self.coeff.is_zero() {
            return Self::zero();
        }
        let mut rad_num = self.radicand.numer().clone();
        let mut rad_den = self.radicand.denom().clone();
        let mut co_num = self.coeff.numer().abs();
        let mut co_den = self.coeff.denom().clone();
        let negative = self.coeff.is_negative();
        loop {
            // p in radicand denominator but also in the coefficient numerator:
            // total exponent is positive, so p belongs in the radicand numerator.
            let g = co_num.gcd(&rad_den);
            if !g.is_one() {
                co_num /= &g;
                rad_den /= &g;
                rad_num *= &g;
                continue;
            }
            // Mirror case: total exponent negative, move p down.
            let g = co_den.gcd(&rad_num);
            if !g.is_one() {
                co_den /= &g;
                rad_num /= &g;
                rad_den *= &g;
                continue;
            }
            break;
        }
        let mut coeff = BigRational::new(co_num, co_den);
        if negative {
            coeff = -coeff;
        }
        self.coeff = coeff;
        self.radicand = BigRational::new(rad_num, rad_den);
        self
    }

    /// A plain rational (radicand 1, no pi).
    pub fn from_rational(q: BigRational) -> Self {
        if q.is_zero() {
            return Self::zero();
        }
        ExactRadical {
            coeff: q,
            radicand: BigRational::one(),
            pi_pow: 0,
        }
    }

    pub fn from_integer(n: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(n)))
    }

    /// sqrt(pi/2): the prefactor of every 4-product assembly.
    pub fn sqrt_pi_over_two() -> Self {
        ExactRadical {
            coeff: BigRational::one(),
            radicand: BigRational::new(BigInt::one(), BigInt::from(2)),
            pi_pow: 1,
        }
    }

    /// coeff * sqrt(prod p^e) from a prime-exponent map (exponents may be
    /// negative). Square parts are folded into the coefficient.
    pub fn from_sqrt_exponents(coeff: BigRational, exps: &BTreeMap<u64, i64>, pi_pow: i8) -> Self {
        if coeff.is_zero() {
            return Self::zero();
        }
        let mut c = coeff;
        let mut rad_num = BigInt::one();
        let mut rad_den = BigInt::one();
        for (&p, &e) in exps {
            if e == 0 {
                continue;
            }
            // Truncating split e = 2h + r keeps r the sign of e, so odd
            // negative exponents leave the prime in the radicand denominator.
            let half = e / 2;
            let rem = e - 2 * half;
            if half != 0 {
                let pw = BigInt::from(p).pow(half.unsigned_abs() as u32);
                if half > 0 {
                    c *= BigRational::from_integer(pw);
                } else {
                    c /= BigRational::from_integer(pw);
                }
            }
            match rem {
                1 => rad_num *= BigInt::from(p),
                -1 => rad_den *= BigInt::from(p),
                _ => {}
            }
        }
        ExactRadical {
            coeff: c,
            radicand: BigRational::new(rad_num, rad_den),
            pi_pow,
        }
        .rebalanced()
    }

    /// General constructor: canonicalizes coeff * sqrt(radicand) * sqrt(pi)^pi_pow
    /// by trial division of the radicand (intended for small radicands; the
    /// internal factored constructors never need it).
    pub fn new(coeff: BigRational, radicand: BigRational, pi_pow: i8) -> Self {
        assert!(radicand.is_positive(), "radicand must be positive");
        if coeff.is_zero() {
            return Self::zero();
        }
        let (nsq, nfree) = split_square(radicand.numer().clone());
        let (dsq, dfree) = split_square(radicand.denom().clone());
        let c = coeff * BigRational::new(nsq, dsq);
        ExactRadical {
            coeff: c,
            radicand: BigRational::new(nfree, dfree),
            pi_pow,
        }
        .rebalanced()
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero()
    }

    pub fn coeff(&self) -> &BigRational {
        &self.coeff
    }

    pub fn radicand(&self) -> &BigRational {
        &self.radicand
    }

    /// Exponent of sqrt(pi) carried by the value.
    pub fn pi_pow(&self) -> i8 {
        self.pi_pow
    }

    pub fn sign(&self) -> Ordering {
        if self.coeff.is_zero() {
            Ordering::Equal
        } else if self.coeff.is_positive() {
            Ordering::Greater
        } else {
            Ordering::Less
        }
    }

    /// value^2 as (rational, pi exponent). For paper-weight integrals
    /// (pi_pow = 1) this is coeff^2 * radicand paired with pi^1.
    pub fn squared(&self) -> (BigRational, i8) {
        (&self.coeff * &self.coeff * &self.radicand, self.pi_pow)
    }

    pub fn neg(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ExactRadical {
            coeff: -self.coeff.clone(),
            radicand: self.radicand.clone(),
            pi_pow: self.pi_pow,
        }
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        if q.is_zero() || self.is_zero() {
            return Self::zero();
        }
        ExactRadical {
            coeff: &self.coeff * q,
            radicand: self.radicand.clone(),
            pi_pow: self.pi_pow,
        }
        .rebalanced()
    }

    /// Exact division by pi (sqrt(pi)^-2).
    pub fn div_pi(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        ExactRadical {
            coeff: self.coeff.clone(),
            radicand: self.radicand.clone(),
            pi_pow: self.pi_pow - 2,
        }
    }

    /// Product of two radicals; square factors of the combined radicand are
    /// folded back into the coefficient.
    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut n1 = self.radicand.numer().clone();
        let mut d1 = self.radicand.denom().clone();
        let mut n2 = other.radicand.numer().clone();
        let mut d2 = other.radicand.denom().clone();
        let mut coeff = &self.coeff * &other.coeff;

        // Cross cancellation (+1 against -1 exponents).
        let g = n1.gcd(&d2);
        n1 /= &g;
        d2 /= g;
        let g = n2.gcd(&d1);
        n2 /= &g;
        d1 /= g;
        // Shared primes become squares.
        let g = n1.gcd(&n2);
        coeff *= BigRational::from_integer(g.clone());
        n1 /= &g;
        n2 /= g;
        let g = d1.gcd(&d2);
        coeff /= BigRational::from_integer(g.clone());
        d1 /= &g;
        d2 /= g;

        ExactRadical {
            coeff,
            radicand: BigRational::new(n1 * n2, d1 * d2),
            pi_pow: self.pi_pow + other.pi_pow,
        }
        .rebalanced()
    }

    /// Sum of two radicals whose radicands differ by the square of a
    /// rational (the only way a sum can stay inside this value space).
    /// Returns None when they genuinely differ.
    pub fn add_same_radicand(&self, other: &Self) -> Option<Self> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.pi_pow != other.pi_pow {
            return None;
        }
        let other_coeff = if self.radicand == other.radicand {
            other.coeff.clone()
        } else {
            // sqrt(r2) = s * sqrt(r1) with s = sqrt(r2/r1) rational.
            let ratio = &other.radicand / &self.radicand;
            let sn = ratio.numer().sqrt();
            let sd = ratio.denom().sqrt();
            if &sn * &sn != *ratio.numer() || &sd * &sd != *ratio.denom() {
                return None;
            }
            &other.coeff * BigRational::new(sn, sd)
        };
        let coeff = &self.coeff + other_coeff;
        if coeff.is_zero() {
            return Some(Self::zero());
        }
        Some(
            ExactRadical {
                coeff,
                radicand: self.radicand.clone(),
                pi_pow: self.pi_pow,
            }
            .rebalanced(),
        )
    }

    /// Natural log of |value| together with its sign; None for zero.
    pub fn ln_abs(&self) -> Option<(Ordering, f64)> {
        if self.is_zero() {
            return None;
        }
        let ln = bigfloat::ln_abs_ratio(&self.coeff)
            + 0.5 * bigfloat::ln_abs_ratio(&self.radicand)
            + 0.5 * self.pi_pow as f64 * std::f64::consts::PI.ln();
        Some((self.sign(), ln))
    }

    /// Round the exact value to f64 once. Uses direct conversion when the
    /// parts are comfortably in range, otherwise the log route.
    pub fn to_f64(&self) -> f64 {
        match self.ln_abs() {
            None => 0.0,
            Some((sign, ln)) => {
                let s = if sign == Ordering::Less { -1.0 } else { 1.0 };
                if ln.abs() < 600.0 {
                    let c = bigfloat::ratio_to_f64(&self.coeff);
                    let r = bigfloat::ratio_to_f64(&self.radicand);
                    if c.is_finite() && c != 0.0 && r.is_finite() && r != 0.0 {
                        return c
                            * r.sqrt()
                            * std::f64::consts::PI.powf(self.pi_pow as f64 / 2.0);
                    }
                }
                s * ln.exp()
            }
        }
    }

    /// Canonical text form. For pi_pow = 1 (paper-weight integrals) this is
    /// the interchange format "+(a/b)*sqrt(pi*(c/d))" with lowest-terms
    /// integers; zero prints as "+(0/1)*sqrt(pi*(1/1))".
    pub fn canonical_text(&self) -> String {
        if self.is_zero() {
            return "+(0/1)*sqrt(pi*(1/1))".to_string();
        }
        let sign = if self.coeff.is_negative() { '-' } else { '+' };
        let a = self.coeff.numer().abs();
        let b = self.coeff.denom().abs();
        let c = self.radicand.numer();
        let d = self.radicand.denom();
        match self.pi_pow {
            0 => format!("{sign}({a}/{b})*sqrt(({c}/{d}))"),
            1 => format!("{sign}({a}/{b})*sqrt(pi*({c}/{d}))"),
            -1 => format!("{sign}({a}/{b})*sqrt(({c}/{d})/pi)"),
            p => format!("{sign}({a}/{b})*sqrt(({c}/{d}))*pi^({p}/2)"),
        }
    }
}

impl fmt::Display for ExactRadical {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.canonical_text())
    }
}

/// Split n = s^2 * f with f squarefree (up to square factors made of primes
/// beyond the trial-division bound, which never arise from the factored
/// constructors). Returns (s, f).
fn split_square(n: BigInt) -> (BigInt, BigInt) {
    debug_assert!(n.sign() == Sign::Plus || n.is_one());
    let mut remaining = n;
    let mut square_root = BigInt::one();
    let mut free = BigInt::one();
    let mut p = BigInt::from(2);
    let limit = BigInt::from(1_000_000u64);
    while &p * &p <= remaining && p <= limit {
        if (&remaining % &p).is_zero() {
            let mut e = 0u32;
            while (&remaining % &p).is_zero() {
                remaining /= &p;
                e += 1;
            }
            if e >= 2 {
                square_root *= p.pow(e / 2);
            }
            if e % 2 == 1 {
                free *= &p;
            }
        }
        p += 1;
    }
    // Whatever is left is prime-free below the bound; check for a perfect square.
    if !remaining.is_one() {
        let r = remaining.sqrt();
        if &r * &r == remaining {
            square_root *= r;
        } else {
            free *= remaining;
        }
    }
    (square_root, free)
}
