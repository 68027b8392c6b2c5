//! Property tests for the structural invariants: radical round-trips,
//! parity vanishing, reconstruction, and the function-evaluation identities.

use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

use hermprod::exact::linearize::{eval_scaled_basis, hermite_poly_exact};
use hermprod::{linearize, w4_exact, w4_via_consolidated, w4_via_ifactors, Convention, ExactRadical, Index4};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

proptest! {
    // value^2 = coeff^2 * radicand * pi^pi_pow is the round-trip invariant
    // of the radical representation.
    #[test]
    fn radical_square_roundtrip(
        cn in -200i64..200,
        cd in 1i64..60,
        rn in 1i64..400,
        rd in 1i64..400,
        pi_pow in -1i8..=1,
    ) {
        let v = ExactRadical::new(rat(cn, cd), rat(rn, rd), pi_pow);
        let (sq, pw) = v.squared();
        let direct = rat(cn, cd) * rat(cn, cd) * rat(rn, rd);
        prop_assert_eq!(sq, direct);
        if cn != 0 {
            prop_assert_eq!(pw, pi_pow);
            // and as floats
            let f = v.to_f64();
            let expect = (cn as f64 / cd as f64)
                * (rn as f64 / rd as f64).sqrt()
                * std::f64::consts::PI.powf(pi_pow as f64 / 2.0);
            prop_assert!((f - expect).abs() <= 1e-12 * expect.abs());
        }
    }

    // multiplication is commutative on canonical forms and consistent with f64
    #[test]
    fn radical_mul_commutes(
        an in -60i64..60, ar in 1i64..120,
        bn in -60i64..60, br in 1i64..120,
    ) {
        let a = ExactRadical::new(rat(an, 7), rat(ar, 5), 1);
        let b = ExactRadical::new(rat(bn, 3), rat(br, 11), 0);
        let ab = a.mul(&b);
        let ba = b.mul(&a);
        prop_assert_eq!(&ab, &ba);
        let f = ab.to_f64();
        let direct = a.to_f64() * b.to_f64();
        prop_assert!((f - direct).abs() <= 1e-12 * direct.abs().max(1e-12));
    }

    // odd total degree kills the integral exactly, on every assembly path
    #[test]
    fn odd_sum_vanishes(j in 0u64..30, p in 0u64..30, q in 0u64..30, k in 0u64..30) {
        let idx = Index4::new(j, p, q, 2 * k + (1 + j + p + q) % 2);
        prop_assume!(idx.is_odd());
        prop_assert!(w4_exact(idx, Convention::PaperWeight).is_zero());
        prop_assert!(w4_via_consolidated(idx).is_zero());
        prop_assert!(w4_via_ifactors(idx).is_zero());
    }

    // the expansion reproduces H_j H_k exactly at rational points
    #[test]
    fn linearize_reconstructs(j in 0u64..=40, k in 0u64..=40, xn in -9i64..=9, xd in 1i64..=7) {
        let x = rat(xn, xd);
        let e = linearize(j, k);
        let mut rhs = BigRational::from_integer(0.into());
        for (&l, c) in &e.coeffs {
            rhs += c * eval_scaled_basis(l, &x);
        }
        let lhs = hermite_poly_exact(j, &x) * hermite_poly_exact(k, &x);
        prop_assert_eq!(lhs, rhs);
    }

    // pair swap and outer/inner exchange leave the exact value unchanged
    #[test]
    fn pair_symmetries(j in 0u64..=20, p in 0u64..=20, q in 0u64..=20, k in 0u64..=20) {
        let base = w4_exact(Index4::new(j, p, q, k), Convention::PaperWeight);
        prop_assert_eq!(&base, &w4_exact(Index4::new(k, p, q, j), Convention::PaperWeight));
        prop_assert_eq!(&base, &w4_exact(Index4::new(j, q, p, k), Convention::PaperWeight));
        prop_assert_eq!(&base, &w4_exact(Index4::new(p, j, k, q), Convention::PaperWeight));
    }

    // canonical text of the paper-weight values parses back to the same value
    #[test]
    fn canonical_text_shape(j in 0u64..=12, p in 0u64..=12, q in 0u64..=12, k in 0u64..=12) {
        let w = w4_exact(Index4::new(j, p, q, k), Convention::PaperWeight);
        let text = w.canonical_text();
        // ±(a/b)*sqrt(pi*(c/d))
        prop_assert!(text.starts_with('+') || text.starts_with('-'));
        prop_assert!(text.contains("*sqrt(pi*("));
        let float_from_text = parse_canonical(&text);
        prop_assert!((float_from_text - w.to_f64()).abs() <= 1e-12 * w.to_f64().abs().max(1e-300));
    }
}

// The expansion reproduces the product at the five pinned rational points,
// for every pair up to (40, 40), in exact arithmetic.
#[test]
fn linearize_reconstructs_at_pinned_points() {
    use rayon::prelude::*;
    let points: Vec<BigRational> = vec![rat(0, 1), rat(1, 1), rat(1, 2), rat(2, 1), rat(-3, 7)];
    let defects: usize = (0u64..=40)
        .into_par_iter()
        .map(|j| {
            let mut bad = 0usize;
            for k in 0..=40u64 {
                let e = linearize(j, k);
                for x in &points {
                    let mut rhs = BigRational::from_integer(0.into());
                    for (&l, c) in &e.coeffs {
                        rhs += c * eval_scaled_basis(l, x);
                    }
                    if rhs != hermite_poly_exact(j, x) * hermite_poly_exact(k, x) {
                        bad += 1;
                    }
                }
            }
            bad
        })
        .sum();
    assert_eq!(defects, 0);
}

fn parse_canonical(text: &str) -> f64 {
    // ±(a/b)*sqrt(pi*(c/d))
    let sign = if text.starts_with('-') { -1.0 } else { 1.0 };
    let inner: Vec<&str> = text[1..].split("*sqrt(pi*").collect();
    let frac = |s: &str| -> f64 {
        let s = s.trim_matches(|c| c == '(' || c == ')');
        let mut it = s.split('/');
        let n: f64 = it.next().unwrap().parse().unwrap();
        let d: f64 = it.next().unwrap().parse().unwrap();
        n / d
    };
    let coeff = frac(inner[0]);
    let rad = frac(inner[1].trim_end_matches(')'));
    sign * coeff * (std::f64::consts::PI * rad).sqrt()
}
