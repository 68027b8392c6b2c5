//! Exact arbitrary-precision path: linearization coefficients, radical
//! values and the 4-product integrals. This is the ground truth every other
//! module is checked against.

pub mod factorial;
pub mod linearize;
pub mod radical;
pub mod w4;

pub use linearize::{a_coeff, f2_sum, linearize, F2Form, LinearizationExpansion};
pub use radical::ExactRadical;
pub use w4::{
    c_integral, i_factor, w2_00, w4_abs_f64, w4_exact, w4_f64, w4_ln_abs, w4_via_consolidated,
    w4_via_ifactors, Index4,
};
