//! Negativity, linear entropy and the closed forms they take on the
//! Bell-diagonal families, including the two curves bounding the simplex in
//! the entropy-negativity plane.

use thiserror::Error;

use crate::linalg::{hermitian_eigenvalues, DensityMatrix, LinalgError, DIM};
use crate::scalar::Real;
use crate::weyl::{bell_projector, ModIndex, StateError};

/// Negativities below this are reported as exactly zero.
pub const NEGATIVITY_CLAMP: f64 = 1e-9;
/// Right end of the lower boundary curve.
pub const LINES_CURVE_MAX_ENTROPY: f64 = 0.75;
/// Right end of the Werner curve: entropy of the Werner state at `p = 1/4`.
pub const WERNER_CURVE_MAX_ENTROPY: f64 = 15.0 / 16.0;
/// Linear entropy at or above which a two-qutrit state is guaranteed PPT.
pub const PPT_ENTROPY_BOUND: f64 = 63.0 / 64.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum MeasureError {
    #[error("{what} = {value} is outside its domain {domain}")]
    Domain { what: &'static str, value: f64, domain: &'static str },
    #[error(transparent)]
    Linalg(#[from] LinalgError),
    #[error(transparent)]
    State(#[from] StateError),
}

fn domain_err<T: Real>(what: &'static str, value: T, domain: &'static str) -> MeasureError {
    MeasureError::Domain { what, value: value.to_f64().unwrap_or(f64::NAN), domain }
}

fn in_range<T: Real>(x: T, lo: f64, hi: f64) -> bool {
    x >= T::lit(lo) && x <= T::lit(hi)
}

/// Coordinates of a state in the entropy-negativity plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyNegativityPoint<T> {
    pub s: T,
    pub n: T,
}

impl<T: Real> EntropyNegativityPoint<T> {
    pub fn of(rho: &DensityMatrix<T>) -> Result<Self, LinalgError> {
        Ok(Self { s: linear_entropy(rho), n: negativity(rho)? })
    }

    /// Height above the Werner curve (negative when below).
    pub fn werner_margin(&self) -> T {
        self.n - werner_ceiling(self.s)
    }
}

/// Absolute sum of the negative eigenvalues of the partial transpose,
/// i.e. `(‖ρ^PT‖₁ - 1) / 2`.
pub fn negativity<T: Real>(rho: &DensityMatrix<T>) -> Result<T, LinalgError> {
    let eig = hermitian_eigenvalues(&rho.partial_transpose())?;
    let neg = eig
        .into_iter()
        .filter(|&x| x < -T::ZERO_EIGENVALUE)
        .fold(T::zero(), |acc, x| acc - x);
    Ok(if neg < T::lit(NEGATIVITY_CLAMP) { T::zero() } else { neg })
}

/// `tr ρ²`.
pub fn purity<T: Real>(rho: &DensityMatrix<T>) -> T {
    rho.purity()
}

/// `(9/8) tr(ρ - ρ²)`: zero on pure states, one on `1/9`.
pub fn linear_entropy<T: Real>(rho: &DensityMatrix<T>) -> T {
    let d = T::lit(DIM as f64);
    d / (d - T::one()) * (rho.matrix().trace().re - rho.purity())
}

/// `√(1 - 3p(1-p))` for the two-point mixture with weights `p`, `1 - p`.
pub fn negativity_pair_formula<T: Real>(p: T) -> Result<T, MeasureError> {
    if !in_range(p, 0.0, 1.0) {
        return Err(domain_err("p", p, "[0, 1]"));
    }
    Ok((T::one() - T::lit(3.0) * p * (T::one() - p)).max(T::zero()).sqrt())
}

/// `√(½ Σ_{pairs} (p_α - p_β)²)` over the three unordered pairs of a line mixture.
pub fn negativity_line_formula<T: Real>(p: [T; 3]) -> Result<T, MeasureError> {
    let sum = p[0] + p[1] + p[2];
    if p.iter().any(|&x| !in_range(x, 0.0, 1.0)) || (sum - T::one()).abs() > T::STATE_TOL {
        return Err(domain_err("sum of line probabilities", sum, "three entries in [0, 1] summing to 1"));
    }
    let sq = |x: T| x * x;
    let half = T::lit(0.5);
    Ok((half * (sq(p[0] - p[1]) + sq(p[0] - p[2]) + sq(p[1] - p[2]))).sqrt())
}

/// `(1 - p) 1/9 + p P_α`.
pub fn werner_state<T: Real>(p: T, alpha: ModIndex) -> Result<DensityMatrix<T>, MeasureError> {
    if !in_range(p, 0.0, 1.0) {
        return Err(domain_err("p", p, "[0, 1]"));
    }
    Ok(DensityMatrix::maximally_mixed().mix(&bell_projector(alpha), p))
}

/// `max(0, (4p - 1) / 3)`.
pub fn werner_negativity<T: Real>(p: T) -> T {
    ((T::lit(4.0) * p - T::one()) / T::lit(3.0)).max(T::zero())
}

/// `1 - p²`.
pub fn werner_entropy<T: Real>(p: T) -> T {
    T::one() - p * p
}

/// Lower boundary: `√(1 - 4s/3)` on `[0, 3/4]`, traced out by the line mixtures.
pub fn curve_lines<T: Real>(s: T) -> Result<T, MeasureError> {
    if !in_range(s, 0.0, LINES_CURVE_MAX_ENTROPY) {
        return Err(domain_err("s", s, "[0, 3/4]"));
    }
    Ok((T::one() - T::lit(4.0) * s / T::lit(3.0)).max(T::zero()).sqrt())
}

/// Upper boundary: `(4√(1-s) - 1) / 3` on `[0, 15/16]`, traced out by Werner states.
pub fn curve_werner<T: Real>(s: T) -> Result<T, MeasureError> {
    if !in_range(s, 0.0, WERNER_CURVE_MAX_ENTROPY) {
        return Err(domain_err("s", s, "[0, 15/16]"));
    }
    Ok(((T::lit(4.0) * (T::one() - s).sqrt() - T::one()) / T::lit(3.0)).max(T::zero()))
}

/// [`curve_werner`] continued by zero past `15/16`, where Werner states are
/// separable. Entropies are clamped into `[0, 1]`.
pub fn werner_ceiling<T: Real>(s: T) -> T {
    let s = s.max(T::zero()).min(T::one());
    if s > T::lit(WERNER_CURVE_MAX_ENTROPY) {
        T::zero()
    } else {
        curve_werner(s).unwrap_or(T::zero())
    }
}

/// Sufficient PPT test: `tr ρ² ≤ 1/(N²-1) = 1/8`. `false` says nothing.
pub fn ppt_by_purity<T: Real>(rho: &DensityMatrix<T>) -> bool {
    rho.purity() <= T::one() / T::lit(8.0)
}
