//! Dense complex matrices sized for one- and two-qutrit problems.
//!
//! Only what the rest of the crate needs lives here: products, Kronecker
//! products, the partial transpose on `C^3 ⊗ C^3` and a cyclic Jacobi
//! eigensolver for Hermitian matrices. Basis vector `|k⟩⊗|l⟩` sits at
//! position `3k + l`.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex;
use thiserror::Error;

use crate::scalar::Real;

/// Local dimension of one qutrit.
pub const QUTRIT: usize = 3;
/// Dimension of the two-qutrit space.
pub const DIM: usize = QUTRIT * QUTRIT;
/// Jacobi sweep cap.
pub const MAX_SWEEPS: usize = 100;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("entry count {got} does not match {rows}x{cols}")]
    BadShape { rows: usize, cols: usize, got: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix is {rows}x{cols}, expected square")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not Hermitian (max |H - H†| = {deviation:e})")]
    NotHermitian { deviation: f64 },
    #[error("Jacobi iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },
    #[error("not a density matrix: {0}")]
    InvalidState(String),
}

/// Dense complex matrix stored row-major.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<Complex<T>>,
}

impl<T: Real> ComplexMatrix<T> {
    pub fn new(rows: usize, cols: usize, data: Vec<Complex<T>>) -> Result<Self, LinalgError> {
        if rows == 0 || cols == 0 || data.len() != rows * cols {
            return Err(LinalgError::BadShape { rows, cols, got: data.len() });
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![Complex::new(T::zero(), T::zero()); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        Self::from_fn(n, n, |i, j| if i == j { Complex::new(T::one(), T::zero()) } else { Complex::new(T::zero(), T::zero()) })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex<T>) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Self { rows, cols, data }
    }

    /// Real diagonal matrix.
    pub fn diag(values: &[T]) -> Self {
        let n = values.len();
        Self::from_fn(n, n, |i, j| if i == j { Complex::new(values[i], T::zero()) } else { Complex::new(T::zero(), T::zero()) })
    }

    /// Outer product `|u⟩⟨v|`.
    pub fn outer(u: &[Complex<T>], v: &[Complex<T>]) -> Self {
        Self::from_fn(u.len(), v.len(), |i, j| u[i] * v[j].conj())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn as_slice(&self) -> &[Complex<T>] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<Complex<T>> {
        self.data
    }

    pub fn adjoint(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)])
    }

    pub fn scale(&self, factor: Complex<T>) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    pub fn scale_real(&self, factor: T) -> Self {
        Self { rows: self.rows, cols: self.cols, data: self.data.iter().map(|&z| z * factor).collect() }
    }

    pub fn try_mul(&self, rhs: &Self) -> Result<Self, LinalgError> {
        if self.cols != rhs.rows {
            return Err(LinalgError::DimensionMismatch(format!(
                "{}x{} times {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut out = Self::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.data[i * self.cols + k];
                if a.re == T::zero() && a.im == T::zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    out.data[i * rhs.cols + j] += a * rhs.data[k * rhs.cols + j];
                }
            }
        }
        Ok(out)
    }

    /// Matrix-vector product.
    pub fn apply(&self, v: &[Complex<T>]) -> Vec<Complex<T>> {
        assert_eq!(v.len(), self.cols, "vector length must equal column count");
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + a * b)
            })
            .collect()
    }

    /// `⟨v| A |v⟩`.
    pub fn expectation(&self, v: &[Complex<T>]) -> Complex<T> {
        self.apply(v).iter().zip(v).fold(Complex::new(T::zero(), T::zero()), |acc, (&a, &b)| acc + b.conj() * a)
    }

    pub fn trace(&self) -> Complex<T> {
        (0..self.rows.min(self.cols)).fold(Complex::new(T::zero(), T::zero()), |acc, i| acc + self[(i, i)])
    }

    pub fn frobenius_norm(&self) -> T {
        self.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr()).sqrt()
    }

    /// Largest entrywise modulus of `self - other`; infinite if shapes differ.
    pub fn max_abs_diff(&self, other: &Self) -> T {
        if self.rows != other.rows || self.cols != other.cols {
            return T::infinity();
        }
        self.data.iter().zip(&other.data).fold(T::zero(), |acc, (a, b)| acc.max((*a - *b).norm()))
    }

    pub fn approx_eq(&self, other: &Self, tol: T) -> bool {
        self.max_abs_diff(other) <= tol
    }

    /// Largest entrywise modulus of `self - self†`.
    pub fn hermitian_deviation(&self) -> T {
        if !self.is_square() {
            return T::infinity();
        }
        let n = self.rows;
        let mut dev = T::zero();
        for i in 0..n {
            for j in i..n {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    pub fn is_hermitian(&self, tol: T) -> bool {
        self.hermitian_deviation() <= tol
    }

    /// Partial transpose on the second qutrit of a 9x9 matrix:
    /// `out[(i,l),(k,j)] = self[(i,j),(k,l)]`.
    pub fn partial_transpose(&self) -> Result<Self, LinalgError> {
        if self.rows != DIM || self.cols != DIM {
            return Err(LinalgError::DimensionMismatch(format!(
                "partial transpose needs {DIM}x{DIM}, got {}x{}",
                self.rows, self.cols
            )));
        }
        let mut out = Self::zeros(DIM, DIM);
        for i in 0..QUTRIT {
            for j in 0..QUTRIT {
                for k in 0..QUTRIT {
                    for l in 0..QUTRIT {
                        out.data[(i * QUTRIT + l) * DIM + k * QUTRIT + j] =
                            self.data[(i * QUTRIT + j) * DIM + k * QUTRIT + l];
                    }
                }
            }
        }
        Ok(out)
    }
}

impl<T> Index<(usize, usize)> for ComplexMatrix<T> {
    type Output = Complex<T>;

    fn index(&self, (i, j): (usize, usize)) -> &Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for ComplexMatrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex<T> {
        assert!(i < self.rows && j < self.cols, "index ({i}, {j}) out of bounds");
        &mut self.data[i * self.cols + j]
    }
}

impl<T: Real> Mul for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn mul(self, rhs: Self) -> ComplexMatrix<T> {
        self.try_mul(rhs).expect("matrix product dimensions")
    }
}

impl<T: Real> Add for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn add(self, rhs: Self) -> ComplexMatrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix sum dimensions");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a + b).collect(),
        }
    }
}

impl<T: Real> Sub for &ComplexMatrix<T> {
    type Output = ComplexMatrix<T>;

    fn sub(self, rhs: Self) -> ComplexMatrix<T> {
        assert!(self.rows == rhs.rows && self.cols == rhs.cols, "matrix difference dimensions");
        ComplexMatrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(&a, &b)| a - b).collect(),
        }
    }
}

impl<T: Real> fmt::Debug for ComplexMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            write!(f, "  ")?;
            for j in 0..self.cols {
                let z = self[(i, j)];
                write!(f, "{:+.4}{:+.4}i ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

/// Kronecker product: block `(i, j)` of the result is `a[i, j] * b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let (ra, ca, rb, cb) = (a.rows, a.cols, b.rows, b.cols);
    ComplexMatrix::from_fn(ra * rb, ca * cb, |i, j| a[(i / rb, j / cb)] * b[(i % rb, j % cb)])
}

/// Kronecker product of two vectors.
pub fn kron_vec<T: Real>(u: &[Complex<T>], v: &[Complex<T>]) -> Vec<Complex<T>> {
    u.iter().flat_map(|&a| v.iter().map(move |&b| a * b)).collect()
}

/// Eigenvalues of a Hermitian matrix in ascending order.
///
/// Cyclic Jacobi: each rotation first removes the phase of the pivot and then
/// applies the real symmetric rotation that annihilates it. Iteration stops
/// when the largest off-diagonal modulus is at most
/// [`Real::JACOBI_REL_TOL`] times the Frobenius norm.
pub fn hermitian_eigenvalues<T: Real>(h: &ComplexMatrix<T>) -> Result<Vec<T>, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare { rows: h.rows, cols: h.cols });
    }
    let deviation = h.hermitian_deviation();
    if !(deviation <= T::HERMITIAN_TOL) {
        return Err(LinalgError::NotHermitian { deviation: deviation.to_f64().unwrap_or(f64::NAN) });
    }
    let n = h.rows;
    let two = T::lit(2.0);
    // work on the exactly Hermitian part
    let mut a: Vec<Complex<T>> = (0..n * n)
        .map(|idx| {
            let (i, j) = (idx / n, idx % n);
            (h.data[i * n + j] + h.data[j * n + i].conj()) / two
        })
        .collect();
    let threshold = T::JACOBI_REL_TOL * h.frobenius_norm();

    for _sweep in 0..MAX_SWEEPS {
        let mut off = T::zero();
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(a[p * n + q].norm());
            }
        }
        if off <= threshold {
            let mut eig: Vec<T> = (0..n).map(|i| a[i * n + i].re).collect();
            eig.sort_by(|x, y| x.partial_cmp(y).expect("finite eigenvalues"));
            return Ok(eig);
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                let mag = apq.norm();
                if mag == T::zero() {
                    continue;
                }
                let phase = apq / mag;
                let phase_c = phase.conj();
                let theta = (a[q * n + q].re - a[p * n + p].re) / (two * mag);
                let t = if theta >= T::zero() {
                    T::one() / (theta + theta.hypot(T::one()))
                } else {
                    -T::one() / (-theta + theta.hypot(T::one()))
                };
                let c = T::one() / t.hypot(T::one());
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = akp * c - akq * phase_c * s;
                    a[k * n + q] = akp * s + akq * phase_c * c;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = apk * c - aqk * phase * s;
                    a[q * n + k] = apk * s + aqk * phase * c;
                }
                let zero = Complex::new(T::zero(), T::zero());
                a[p * n + q] = zero;
                a[q * n + p] = zero;
                a[p * n + p].im = T::zero();
                a[q * n + q].im = T::zero();
            }
        }
    }
    Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS })
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn trace_norm_hermitian<T: Real>(h: &ComplexMatrix<T>) -> Result<T, LinalgError> {
    Ok(hermitian_eigenvalues(h)?.into_iter().fold(T::zero(), |acc, x| acc + x.abs()))
}

/// A 9x9 two-qutrit density matrix: Hermitian, unit trace, positive semidefinite.
#[derive(Clone, PartialEq)]
pub struct DensityMatrix<T> {
    mat: ComplexMatrix<T>,
}

impl<T: Real> DensityMatrix<T> {
    /// Validates every invariant, including positivity through the eigensolver.
    pub fn new(mat: ComplexMatrix<T>) -> Result<Self, LinalgError> {
        Self::check(&mat)?;
        Ok(Self { mat })
    }

    /// Wraps a matrix that is valid by construction. Only the shape is checked.
    pub(crate) fn from_trusted(mat: ComplexMatrix<T>) -> Self {
        debug_assert!(mat.rows == DIM && mat.cols == DIM);
        Self { mat }
    }

    /// `G G† / tr(G G†)` for any `9 x r` factor `G` with nonzero norm.
    pub fn from_factor(g: &ComplexMatrix<T>) -> Result<Self, LinalgError> {
        if g.rows != DIM {
            return Err(LinalgError::DimensionMismatch(format!("factor must have {DIM} rows, got {}", g.rows)));
        }
        let r = g.cols;
        let mut out = ComplexMatrix::zeros(DIM, DIM);
        let mut tr = T::zero();
        for i in 0..DIM {
            for j in i..DIM {
                let mut acc = Complex::new(T::zero(), T::zero());
                for k in 0..r {
                    acc += g.data[i * r + k] * g.data[j * r + k].conj();
                }
                if i == j {
                    acc.im = T::zero();
                    tr += acc.re;
                }
                out.data[i * DIM + j] = acc;
                out.data[j * DIM + i] = acc.conj();
            }
        }
        if !(tr > T::zero()) {
            return Err(LinalgError::InvalidState("factor has zero norm".into()));
        }
        Ok(Self { mat: out.scale_real(T::one() / tr) })
    }

    pub fn maximally_mixed() -> Self {
        Self { mat: ComplexMatrix::identity(DIM).scale_real(T::one() / T::lit(DIM as f64)) }
    }

    fn check(mat: &ComplexMatrix<T>) -> Result<(), LinalgError> {
        if mat.rows != DIM || mat.cols != DIM {
            return Err(LinalgError::InvalidState(format!("expected {DIM}x{DIM}, got {}x{}", mat.rows, mat.cols)));
        }
        let dev = mat.hermitian_deviation();
        if !(dev <= T::STATE_TOL) {
            return Err(LinalgError::InvalidState(format!("Hermiticity violated by {dev:e}")));
        }
        let tr = mat.trace();
        if !((tr.re - T::one()).abs() <= T::STATE_TOL && tr.im.abs() <= T::STATE_TOL) {
            return Err(LinalgError::InvalidState(format!("trace is {}{:+}i", tr.re, tr.im)));
        }
        let min = hermitian_eigenvalues(mat)?[0];
        if min < -T::PSD_SLACK {
            return Err(LinalgError::InvalidState(format!("negative eigenvalue {min:e}")));
        }
        Ok(())
    }

    /// Re-checks all invariants.
    pub fn validate(&self) -> Result<(), LinalgError> {
        Self::check(&self.mat)
    }

    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.mat
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.mat
    }

    pub fn partial_transpose(&self) -> ComplexMatrix<T> {
        self.mat.partial_transpose().expect("density matrices are 9x9")
    }

    /// `tr ρ²`, computed as the squared Frobenius norm.
    pub fn purity(&self) -> T {
        self.mat.data.iter().fold(T::zero(), |acc, z| acc + z.norm_sqr())
    }

    pub fn eigenvalues(&self) -> Result<Vec<T>, LinalgError> {
        hermitian_eigenvalues(&self.mat)
    }

    /// Convex combination `(1 - weight) * self + weight * other`.
    pub fn mix(&self, other: &Self, weight: T) -> Self {
        let keep = T::one() - weight;
        Self { mat: &self.mat.scale_real(keep) + &other.mat.scale_real(weight) }
    }
}

impl<T: Real> fmt::Debug for DensityMatrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DensityMatrix({:?})", self.mat)
    }
}
