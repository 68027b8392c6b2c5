//! Integrals of products of four Hermite functions.
//!
//! The crate computes W_{jpqk} = ∫ h_j h_p h_q h_k dx three ways and keeps
//! them honest against each other:
//!
//! * [`exact`] — arbitrary-precision rational radicals via generating-function
//!   linearization; the ground truth.
//! * [`quadrature`] — Gauss–Hermite quadrature, an independent oracle that
//!   never touches the linearization formulas.
//! * [`asymptotics`] — Stirling asymptotics, the Gaussian decay bound on
//!   the two-index family and the three-tier bound with fitted constants.
//!
//! [`matrix`] builds truncated operator matrices from the exact values and
//! compares their Schur bound against the spectral norm. The floating-point
//! kernels in [`hermite`] and [`quadrature`] are generic over the scalar
//! (f32/f64) via [`real::Real`]; `f64` is the intended precision and the
//! alias [`Scalar`] names it.

pub mod asymptotics;
pub mod error;
pub mod exact;
pub mod hermite;
pub mod matrix;
pub mod quadrature;
pub mod real;

pub use asymptotics::{
    cpq_fit, cpq_fit_pair, f1_bound, f1_exact, log_factorial, phi, theorem_bound, w2_asymptotic,
    w2_bound, BoundReport, CpqEntry, CpqFit, JKCoords,
};
pub use error::{Error, Result};
pub use exact::{
    a_coeff, c_integral, f2_sum, i_factor, linearize, w2_00, w4_exact, w4_f64, w4_ln_abs,
    w4_via_consolidated, w4_via_ifactors, ExactRadical, F2Form, Index4, LinearizationExpansion,
};
pub use hermite::{hermite_fn, hermite_poly, Convention, DEFAULT_MAX_DEGREE};
pub use matrix::{build_wmatrix, operator_norm, schur_norm, NormReport, WMatrix};
pub use quadrature::{auto_npoints, gauss_hermite_rule, w4_quadrature, QuadratureRule};
pub use real::Real;

/// The working precision of the crate.
pub type Scalar = f64;
/// Low-precision variant for quick sweeps.
pub type Scalar32 = f32;
/// Gauss–Hermite rule at working precision.
pub type Rule = QuadratureRule<Scalar>;
