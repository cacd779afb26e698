//! Scalar abstraction for the geometry kernel.
//!
//! Everything geometric is generic over [`Real`]; `f64` aliases are exported
//! from the crate root and are what the CLI and file formats use.

use num_traits::{Float, FromPrimitive, ToPrimitive};
use std::fmt::{Debug, Display};

/// Floating-point scalar the kernel works over (`f32` or `f64`).
pub trait Real:
    Float + FromPrimitive + ToPrimitive + Debug + Display + Send + Sync + 'static
{
    /// Convert an `f64` constant into the scalar type.
    #[inline]
    fn of(x: f64) -> Self {
        Self::from_f64(x).expect("finite f64 constant")
    }

    /// Lossy view as `f64`, for error messages and reports.
    #[inline]
    fn as_f64(self) -> f64 {
        self.to_f64().unwrap_or(f64::NAN)
    }
}

impl Real for f32 {}
impl Real for f64 {}

/// arccosh in a form that keeps relative precision near argument 1.
///
/// The naive `ln(x + sqrt(x*x - 1))` loses every significant digit as x -> 1,
/// which is exactly the regime pinch experiments drive lengths into.
#[inline]
pub fn acosh_stable<R: Real>(x: R) -> R {
    let one = R::one();
    if x <= one {
        return R::zero();
    }
    let u = x - one;
    (u + (u * (u + R::of(2.0))).sqrt()).ln_1p()
}

/// ln(cosh(x)) without overflow for large |x|.
#[inline]
pub fn ln_cosh<R: Real>(x: R) -> R {
    let ax = x.abs();
    ax + (-(ax + ax)).exp().ln_1p() - R::of(core::f64::consts::LN_2)
}

/// Scale-aware tolerance: spec tolerances are stated for `f64`; wider scalar
/// types keep the stated value, narrower ones degrade with machine epsilon.
#[inline]
pub fn scaled_tol<R: Real>(f64_tol: f64) -> R {
    R::of(f64_tol).max(R::epsilon() * R::of(200.0))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn acosh_agrees_with_naive_form_away_from_one() {
        for &x in &[1.1f64, 1.5, 2.0, 10.0, 1e4] {
            let naive = (x + (x * x - 1.0).sqrt()).ln();
            assert!((acosh_stable(x) - naive).abs() < 1e-13 * naive.max(1.0));
        }
    }

    #[test]
    fn acosh_near_one_matches_series() {
        // acosh(1+u) = sqrt(2u) * (1 - u/12 + O(u^2))
        for &u in &[1e-10f64, 1e-12, 1e-14] {
            let expect = (2.0 * u).sqrt() * (1.0 - u / 12.0);
            let got = acosh_stable(1.0 + u);
            assert!((got - expect).abs() < 1e-12 * expect, "u={u}");
        }
    }

    #[test]
    fn ln_cosh_large_argument() {
        let x = 500.0f64;
        assert!((ln_cosh(x) - (x - core::f64::consts::LN_2)).abs() < 1e-12);
        assert!((ln_cosh(0.5f64) - 0.5f64.cosh().ln()).abs() < 1e-14);
    }
}
