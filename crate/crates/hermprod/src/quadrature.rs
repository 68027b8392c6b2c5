//! Gauss–Hermite quadrature: the independent numerical oracle for the
//! 4-product integrals. Nothing here uses the linearization formulas; nodes
//! come from the Jacobi-matrix eigenvalues polished by Newton steps on the
//! normalized recurrence, and integrands are evaluated through `hermite`.

use crate::error::{Error, Result};
use crate::hermite::{hermite_fn_pair_scaled, hermite_normalized_scaled, Convention};
use crate::real::{from_f64, Real};

/// Nodes and weights integrating f(y) e^{-y^2} over the real line.
///
/// Nodes are strictly increasing and symmetric about 0; weights are positive
/// and symmetric; the rule is exact for polynomials of degree 2n - 1.
#[derive(Clone, Debug)]
pub struct QuadratureRule<R> {
    pub nodes: Vec<R>,
    pub weights: Vec<R>,
    pub degree_exact: usize,
}

impl<R: Real> QuadratureRule<R> {
    pub fn npoints(&self) -> usize {
        self.nodes.len()
    }

    /// ∫ f(y) e^{-y^2} dy. Mirror-symmetric pair summation: odd integrands
    /// cancel exactly, even ones gain a digit.
    pub fn integrate<F: Fn(R) -> R>(&self, f: F) -> R {
        let n = self.nodes.len();
        let mut acc = R::zero();
        for i in 0..n / 2 {
            let lo = f(self.nodes[i]);
            let hi = f(self.nodes[n - 1 - i]);
            acc = acc + self.weights[i] * (lo + hi);
        }
        if n % 2 == 1 {
            acc = acc + self.weights[n / 2] * f(self.nodes[n / 2]);
        }
        acc
    }
}

/// Maximum numbers of points a rule may have.
pub const MAX_NPOINTS: usize = 2000;

/// Eigenvalues of the symmetric tridiagonal Jacobi matrix (diagonal zero,
/// off-diagonal sqrt(m/2)) by the implicit-shift QL sweep. These are the
/// Hermite nodes up to roundoff; Newton refinement tightens them below.
fn jacobi_eigenvalues(n: usize) -> Result<Vec<f64>> {
    let mut d = vec![0.0f64; n];
    let mut e: Vec<f64> = (1..n).map(|m| (m as f64 / 2.0).sqrt()).collect();
    e.push(0.0);
    for l in 0..n {
        let mut iter = 0;
        loop {
            let mut m = l;
            while m + 1 < n {
                let dd = d[m].abs() + d[m + 1].abs();
                if e[m].abs() <= f64::EPSILON * dd {
                    break;
                }
                m += 1;
            }
            if m == l {
                break;
            }
            iter += 1;
            if iter > 60 {
                return Err(Error::Convergence(format!(
                    "QL sweep for {n}-point rule did not settle"
                )));
            }
            let mut g = (d[l + 1] - d[l]) / (2.0 * e[l]);
            let mut r = g.hypot(1.0);
            g = d[m] - d[l] + e[l] / (g + r.copysign(g));
            let (mut s, mut c) = (1.0f64, 1.0f64);
            let mut p = 0.0f64;
            let mut restart = false;
            for i in (l..m).rev() {
                let f = s * e[i];
                let b = c * e[i];
                r = f.hypot(g);
                e[i + 1] = r;
                if r == 0.0 {
                    d[i + 1] -= p;
                    e[m] = 0.0;
                    restart = true;
                    break;
                }
                s = f / r;
                c = g / r;
                g = d[i + 1] - p;
                r = (d[i] - g) * s + 2.0 * c * b;
                p = s * r;
                d[i + 1] = g + p;
                g = c * r - b;
            }
            if restart {
                continue;
            }
            d[l] -= p;
            e[l] = g;
            e[m] = 0.0;
        }
    }
    d.sort_by(|a, b| a.partial_cmp(b).unwrap());
    Ok(d)
}

/// Build the n-point Gauss–Hermite rule. Non-negative nodes are refined by
/// Newton iteration on the normalized Hermite function and mirrored, so the
/// rule is symmetric by construction.
pub fn gauss_hermite_rule<R: Real>(npoints: usize) -> Result<QuadratureRule<R>> {
    if npoints == 0 || npoints > MAX_NPOINTS {
        return Err(Error::Domain(format!(
            "npoints must be in 1..={MAX_NPOINTS}, got {npoints}"
        )));
    }
    if npoints == 1 {
        return Ok(QuadratureRule {
            nodes: vec![R::zero()],
            weights: vec![from_f64(std::f64::consts::PI.sqrt())],
            degree_exact: 1,
        });
    }
    let eig = jacobi_eigenvalues(npoints)?;
    let sqrt_pi = std::f64::consts::PI.sqrt();
    let n = npoints;

    // Refine the strictly positive half; a center zero is exact by symmetry.
    let mut pos_nodes = Vec::with_capacity(n / 2);
    let mut pos_weights = Vec::with_capacity(n / 2);
    for &x0 in eig.iter().skip(n - n / 2) {
        let mut x = x0;
        let mut converged = false;
        for _ in 0..60 {
            let (hm1, hn) = hermite_fn_pair_scaled::<f64>(n, x);
            // h_n' = sqrt(2n) h_{n-1} - x h_n, on the shared exponent.
            let deriv = (2.0 * n as f64).sqrt() * hm1.mantissa - x * hn.mantissa;
            if deriv == 0.0 {
                break;
            }
            let step = hn.mantissa / deriv;
            x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
                converged = true;
                break;
            }
        }
        if !converged {
            // Accept if the residual is already at the noise floor.
            let (hm1, hn) = hermite_fn_pair_scaled::<f64>(n, x);
            let deriv = (2.0 * n as f64).sqrt() * hm1.mantissa - x * hn.mantissa;
            if deriv == 0.0 || (hn.mantissa / deriv).abs() > 1e-14 * x.abs().max(1.0) {
                return Err(Error::Convergence(format!(
                    "node refinement stalled near {x0} for the {n}-point rule"
                )));
            }
        }
        // w = sqrt(pi) / (n * g_{n-1}(x)^2), g the Gaussian-free factor.
        let g = hermite_normalized_scaled::<f64>(n - 1, x);
        let w = (sqrt_pi / (n as f64 * g.mantissa * g.mantissa)).scale_exp2(-2 * g.exp2);
        pos_nodes.push(x);
        pos_weights.push(w);
    }

    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in (0..pos_nodes.len()).rev() {
        nodes.push(from_f64::<R>(-pos_nodes[i]));
        weights.push(from_f64::<R>(pos_weights[i]));
    }
    if n % 2 == 1 {
        // Central node: weight from the same formula at x = 0.
        let g = hermite_normalized_scaled::<f64>(n - 1, 0.0);
        let w = (sqrt_pi / (n as f64 * g.mantissa * g.mantissa)).scale_exp2(-2 * g.exp2);
        nodes.push(R::zero());
        weights.push(from_f64::<R>(w));
    }
    for i in 0..pos_nodes.len() {
        nodes.push(from_f64::<R>(pos_nodes[i]));
        weights.push(from_f64::<R>(pos_weights[i]));
    }
    Ok(QuadratureRule {
        nodes,
        weights,
        degree_exact: 2 * n - 1,
    })
}

/// Node count that integrates the degree-(sum) polynomial part exactly, plus
/// a safety margin of 4 points.
pub fn auto_npoints(idx: crate::exact::Index4) -> usize {
    (idx.sum() as usize + 2).div_ceil(2) + 4
}

/// The 4-product integral by quadrature: substitute x = y/sqrt(2) so the
/// product's Gaussian e^{-2x^2} becomes the rule's weight e^{-y^2}, and
/// evaluate the four normalization-carrying polynomial factors stably.
pub fn w4_quadrature<R: Real>(
    idx: crate::exact::Index4,
    conv: Convention,
    npoints: Option<usize>,
) -> Result<R> {
    let n = npoints.unwrap_or_else(|| auto_npoints(idx));
    let rule = gauss_hermite_rule::<R>(n)?;
    let inv_sqrt2 = from_f64::<R>(std::f64::consts::FRAC_1_SQRT_2);
    let orders = idx.as_array();
    let eval = |y: R| -> R {
        let x = y * inv_sqrt2;
        let mut mantissa = R::one();
        let mut exp2 = 0i64;
        for &m in &orders {
            let s = hermite_normalized_scaled::<R>(m as usize, x);
            mantissa = mantissa * s.mantissa;
            exp2 += s.exp2;
        }
        mantissa.scale_exp2(exp2)
    };
    let mut v = rule.integrate(eval) * inv_sqrt2;
    if conv == Convention::Orthonormal {
        v = v / from_f64::<R>(std::f64::consts::PI);
    }
    Ok(v)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::Index4;

    const SQRT_PI: f64 = 1.7724538509055159;

    #[test]
    fn one_point_rule() {
        let r = gauss_hermite_rule::<f64>(1).unwrap();
        assert_eq!(r.nodes, vec![0.0]);
        assert!((r.weights[0] - SQRT_PI).abs() < 1e-15);
    }

    #[test]
    fn two_point_rule() {
        let r = gauss_hermite_rule::<f64>(2).unwrap();
        let x = std::f64::consts::FRAC_1_SQRT_2;
        assert!((r.nodes[0] + x).abs() < 1e-14);
        assert!((r.nodes[1] - x).abs() < 1e-14);
        assert!((r.weights[0] - SQRT_PI / 2.0).abs() < 1e-14);
        assert!((r.weights[1] - SQRT_PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn three_point_rule_matches_reference() {
        let r = gauss_hermite_rule::<f64>(3).unwrap();
        let x = 1.2247448713915890;
        for (got, want) in r.nodes.iter().zip([-x, 0.0, x]) {
            assert!((got - want).abs() < 1e-14);
        }
        for (got, want) in r
            .weights
            .iter()
            .zip([0.29540897515091933, 1.1816359006036774, 0.29540897515091933])
        {
            assert!((got - want).abs() < 1e-14, "{got} vs {want}");
        }
    }

    #[test]
    fn rule_invariants_across_sizes() {
        for n in [1usize, 2, 3, 7, 20, 64, 101, 200] {
            let r = gauss_hermite_rule::<f64>(n).unwrap();
            assert_eq!(r.npoints(), n);
            assert_eq!(r.degree_exact, 2 * n - 1);
            // strictly increasing, symmetric
            for w in r.nodes.windows(2) {
                assert!(w[0] < w[1]);
            }
            for i in 0..n {
                assert!((r.nodes[i] + r.nodes[n - 1 - i]).abs() == 0.0);
                assert_eq!(r.weights[i], r.weights[n - 1 - i]);
                assert!(r.weights[i] > 0.0);
            }
            // total mass and second moment of e^{-y^2}
            let mass: f64 = r.integrate(|_| 1.0);
            assert!((mass - SQRT_PI).abs() <= 1e-13 * SQRT_PI, "n={n}: {mass}");
            if r.degree_exact >= 2 {
                let second: f64 = r.integrate(|y| y * y);
                assert!((second - SQRT_PI / 2.0).abs() <= 1e-13, "n={n}");
            }
        }
    }

    #[test]
    fn quadrature_examples() {
        let v: f64 = w4_quadrature(Index4::new(0, 0, 0, 0), Convention::PaperWeight, None).unwrap();
        assert!((v - 1.2533141373155003).abs() < 1e-13);
        let v: f64 = w4_quadrature(Index4::new(1, 1, 1, 1), Convention::PaperWeight, None).unwrap();
        assert!((v - 0.9399856029866252).abs() < 1e-13);
        let v: f64 =
            w4_quadrature(Index4::new(1, 1, 1, 1), Convention::PaperWeight, Some(8)).unwrap();
        assert!((v - 0.9399856029866252).abs() < 1e-13);
    }

    #[test]
    fn odd_tuples_cancel_exactly() {
        for idx in [Index4::new(1, 0, 0, 2), Index4::new(3, 2, 1, 1), Index4::new(0, 0, 0, 1)] {
            let v: f64 = w4_quadrature(idx, Convention::PaperWeight, None).unwrap();
            assert_eq!(v, 0.0, "{idx:?}");
        }
    }

    #[test]
    fn quadrature_matches_exact_midsize() {
        let idx = Index4::new(3, 2, 1, 0);
        let q: f64 = w4_quadrature(idx, Convention::PaperWeight, None).unwrap();
        let e = crate::exact::w4_exact(idx, Convention::PaperWeight).to_f64();
        assert!((q - e).abs() <= 1e-12 * e.abs().max(1.0));
    }

    #[test]
    fn rejects_bad_sizes() {
        assert!(gauss_hermite_rule::<f64>(0).is_err());
        assert!(gauss_hermite_rule::<f64>(MAX_NPOINTS + 1).is_err());
    }

    #[test]
    fn largest_rule_constructs() {
        let r = gauss_hermite_rule::<f64>(MAX_NPOINTS).unwrap();
        assert_eq!(r.npoints(), MAX_NPOINTS);
        let mass: f64 = r.integrate(|_| 1.0);
        assert!((mass - SQRT_PI).abs() <= 1e-13 * SQRT_PI, "{mass}");
        // far-tail weights may underflow to zero, but none are negative
        assert!(r.weights.iter().all(|&w| w >= 0.0));
        assert!(r.nodes.windows(2).all(|w| w[0] < w[1]));
    }
}
