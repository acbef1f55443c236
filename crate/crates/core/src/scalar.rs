use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_traits::{Float, FloatConst, FromPrimitive, NumAssignOps};

/// Floating-point scalar underlying all state and channel arithmetic.
///
/// Implemented for `f32` and `f64`.  Validation tolerances scale with
/// the width of the type; the `f64` values are the ones quoted in the
/// documentation of the individual operations.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssignOps
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
    /// Lossless conversion of an `f64` constant.
    fn real(x: f64) -> Self {
        Self::from_f64(x).expect("constant must be representable")
    }

    /// Tolerance for state and channel invariants: hermiticity and
    /// unit-trace residuals, Kraus completeness, and the PSD floor
    /// below which eigenvalues are treated as invalid rather than
    /// clamped to zero.
    fn validity_tol() -> Self;

    /// Largest hermiticity residual the eigensolver accepts.
    fn hermiticity_tol() -> Self;
}

impl Scalar for f64 {
    fn validity_tol() -> Self {
        1e-10
    }
    fn hermiticity_tol() -> Self {
        1e-8
    }
}

impl Scalar for f32 {
    fn validity_tol() -> Self {
        1e-4
    }
    fn hermiticity_tol() -> Self {
        1e-3
    }
}
