//! Entanglement of Bell-diagonal two-qutrit states.
//!
//! The nine Bell-like vectors `Ψ_α = (W_α ⊗ 1) Ψ_(0,0)`, generated by the
//! qutrit Weyl operators, span the simplex of Bell-diagonal states
//! `Σ p_α |Ψ_α⟩⟨Ψ_α|`. This crate builds those states, classifies their
//! supports under the affine symmetries of the index grid, evaluates
//! negativity and linear entropy, and explores the entropy-negativity plane
//! by Monte Carlo.
//!
//! Matrix and state code is generic over the floating-point type through
//! [`Real`]; the aliases below fix it to `f64`, which is what the sampling
//! and search layers use.

pub mod cli;
pub mod figures;
pub mod frontier;
pub mod linalg;
pub mod measures;
pub mod output;
pub mod scalar;
pub mod symmetry;
pub mod weyl;

pub use linalg::{hermitian_eigenvalues, kron, trace_norm_hermitian, LinalgError};
pub use measures::{
    curve_lines, curve_werner, linear_entropy, negativity, negativity_line_formula, negativity_pair_formula,
    ppt_by_purity, purity, werner_ceiling, werner_entropy, werner_negativity, werner_state,
};
pub use scalar::Real;
pub use symmetry::{
    apply_map, canonical_representative, classify_subset, enumerate_group, is_line, orbit, AffineMap, PointSet,
    SubsetClass,
};
pub use weyl::{
    bell_coefficients, bell_projector, bell_vector, named_family, named_family_on, simplex_state, weyl_operator,
    Family, ModIndex,
};

pub type Complex = num_complex::Complex<f64>;
pub type ComplexMatrix = linalg::ComplexMatrix<f64>;
pub type DensityMatrix = linalg::DensityMatrix<f64>;
pub type ProbabilityVector9 = weyl::ProbabilityVector9<f64>;
pub type EntropyNegativityPoint = measures::EntropyNegativityPoint<f64>;

/// Single-precision variants.
pub mod f32 {
    pub type ComplexMatrix = crate::linalg::ComplexMatrix<f32>;
    pub type DensityMatrix = crate::linalg::DensityMatrix<f32>;
    pub type ProbabilityVector9 = crate::weyl::ProbabilityVector9<f32>;
    pub type EntropyNegativityPoint = crate::measures::EntropyNegativityPoint<f32>;
}
