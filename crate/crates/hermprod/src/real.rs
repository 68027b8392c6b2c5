//! Scalar bound for the floating-point evaluation kernels.
//!
//! The Hermite recurrences and the quadrature rules are written once, generic
//! over any IEEE-like scalar. `f64` is the workhorse (see the aliases at the
//! crate root); `f32` works for quick low-precision sweeps.

/// Floating-point scalar: f32 or f64.
pub trait Real:
    num_traits::Float + num_traits::FromPrimitive + num_traits::ToPrimitive + std::fmt::Debug + Send + Sync + 'static
{
    /// Scale by an integer power of two, exactly.
    fn scale_exp2(self, e: i64) -> Self;
}

impl Real for f64 {
    #[inline]
    fn scale_exp2(self, e: i64) -> Self {
        // Split so intermediate powers stay representable.
        if e.abs() <= 1000 {
            self * (e as f64).exp2()
        } else {
            let half = e / 2;
            self * (half as f64).exp2() * ((e - half) as f64).exp2()
        }
    }
}

impl Real for f32 {
    #[inline]
    fn scale_exp2(self, e: i64) -> Self {
        if e.abs() <= 120 {
            self * (e as f32).exp2()
        } else {
            let half = e / 2;
            self * (half as f32).exp2() * ((e - half) as f32).exp2()
        }
    }
}

/// Convert from f64, rounding once.
#[inline]
pub(crate) fn from_f64<R: Real>(x: f64) -> R {
    R::from_f64(x).expect("f64 conversion")
}
