//! Floating-point scalar abstraction.
//!
//! All matrix and state code is written against [`Real`], so the same
//! routines run in `f32` and `f64`. The tolerances below are the ones the
//! validity checks use; they scale with the precision of the type.

use std::fmt::{Debug, Display, LowerExp};

use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

/// Real floating-point type usable as the component type of [`num_complex::Complex`].
pub trait Real:
    Float + FloatConst + FromPrimitive + NumAssign + Debug + Display + LowerExp + Default + Send + Sync + 'static
{
    /// Allowed deviation from Hermiticity, entrywise.
    const HERMITIAN_TOL: Self;
    /// Allowed deviation of a state from Hermiticity, unit trace or a unit probability sum.
    const STATE_TOL: Self;
    /// Most negative eigenvalue still accepted as positive semidefinite.
    const PSD_SLACK: Self;
    /// Jacobi stops once the largest off-diagonal modulus falls below this
    /// fraction of the Frobenius norm.
    const JACOBI_REL_TOL: Self;
    /// Eigenvalues smaller than this in magnitude count as zero.
    const ZERO_EIGENVALUE: Self;

    fn lit(x: f64) -> Self {
        Self::from_f64(x).expect("literal representable in scalar type")
    }
}

impl Real for f64 {
    const HERMITIAN_TOL: Self = 1e-10;
    const STATE_TOL: Self = 1e-12;
    const PSD_SLACK: Self = 1e-10;
    const JACOBI_REL_TOL: Self = 1e-13;
    const ZERO_EIGENVALUE: Self = 1e-12;
}

impl Real for f32 {
    const HERMITIAN_TOL: Self = 1e-5;
    const STATE_TOL: Self = 1e-5;
    const PSD_SLACK: Self = 1e-5;
    const JACOBI_REL_TOL: Self = 1e-6;
    const ZERO_EIGENVALUE: Self = 1e-6;
}
