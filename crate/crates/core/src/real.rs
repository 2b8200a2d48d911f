//! Scalar abstraction shared by every numerical routine in the crate.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point scalar: `f32` or `f64`.
///
/// Besides the arithmetic bounds, each scalar carries the validation
/// tolerances appropriate to its precision. The `f64` values are the ones
/// the invariants are stated in; `f32` gets proportionally looser bounds.
pub trait Real:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Debug
    + Display
    + LowerExp
    + Default
    + Send
    + Sync
    + 'static
{
    /// Bound for identities that are exact up to rounding (Hermiticity,
    /// trace, unitarity, round trips).
    fn exact_tol() -> Self;

    /// Bound for quantities that pass through an eigensolver.
    fn eigen_tol() -> Self;

    /// Lossy conversion from an `f64` literal.
    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("f64 literal representable in scalar type")
    }
}

impl Real for f64 {
    fn exact_tol() -> Self {
        1e-12
    }

    fn eigen_tol() -> Self {
        1e-10
    }
}

impl Real for f32 {
    fn exact_tol() -> Self {
        1e-5
    }

    fn eigen_tol() -> Self {
        1e-4
    }
}
