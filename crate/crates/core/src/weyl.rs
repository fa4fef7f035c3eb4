//! Weyl operators on one qutrit, the nine Bell-like two-qutrit vectors they
//! generate, and the Bell-diagonal states built from them.

use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use num_complex::Complex;
use thiserror::Error;

use crate::linalg::{ComplexMatrix, DensityMatrix, DIM, QUTRIT};
use crate::scalar::Real;
use crate::symmetry::{classify_subset, PointSet, SubsetClass};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StateError {
    #[error("expected {expected} probabilities, got {got}")]
    CountMismatch { expected: usize, got: usize },
    #[error("probability #{index} is negative ({value})")]
    Negative { index: usize, value: f64 },
    #[error("probability #{index} is not finite")]
    NotFinite { index: usize },
    #[error("probabilities sum to {sum}, not 1")]
    NotNormalized { sum: f64 },
    #[error("support {support} is a {found}, not a {expected}")]
    WrongSupport { support: String, found: SubsetClass, expected: SubsetClass },
    #[error("support points must be distinct")]
    RepeatedPoint,
    #[error("parameter {value} outside [0, 1]")]
    OutOfRange { value: f64 },
}

/// A point `(m, n)` of the grid `Z_3 x Z_3`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ModIndex {
    m: u8,
    n: u8,
}

impl ModIndex {
    /// The nine points in lexicographic order, `m` major.
    pub const ALL: [ModIndex; 9] = {
        let mut all = [ModIndex { m: 0, n: 0 }; 9];
        let mut i = 0;
        while i < 9 {
            all[i] = ModIndex { m: (i / 3) as u8, n: (i % 3) as u8 };
            i += 1;
        }
        all
    };

    pub const ORIGIN: ModIndex = ModIndex { m: 0, n: 0 };

    /// Reduces both components mod 3.
    pub fn new(m: i64, n: i64) -> Self {
        Self { m: m.rem_euclid(3) as u8, n: n.rem_euclid(3) as u8 }
    }

    pub fn m(self) -> u8 {
        self.m
    }

    pub fn n(self) -> u8 {
        self.n
    }

    /// Position in the lexicographic enumeration, `3m + n`.
    pub fn index(self) -> usize {
        3 * self.m as usize + self.n as usize
    }

    pub fn from_index(i: usize) -> Self {
        assert!(i < 9, "grid index {i} out of range");
        Self::ALL[i]
    }
}

impl Add for ModIndex {
    type Output = ModIndex;

    fn add(self, rhs: Self) -> Self {
        Self::new(i64::from(self.m + rhs.m), i64::from(self.n + rhs.n))
    }
}

impl Sub for ModIndex {
    type Output = ModIndex;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Neg for ModIndex {
    type Output = ModIndex;

    fn neg(self) -> Self {
        Self::new(-i64::from(self.m), -i64::from(self.n))
    }
}

impl fmt::Display for ModIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.m, self.n)
    }
}

impl FromStr for ModIndex {
    type Err = String;

    /// Parses `m,n` (optionally parenthesised).
    fn from_str(s: &str) -> Result<Self, String> {
        let t = s.trim().trim_start_matches('(').trim_end_matches(')');
        let mut parts = t.split(',');
        let (Some(a), Some(b), None) = (parts.next(), parts.next(), parts.next()) else {
            return Err(format!("expected `m,n`, got `{s}`"));
        };
        let m: i64 = a.trim().parse().map_err(|_| format!("bad component `{a}` in `{s}`"))?;
        let n: i64 = b.trim().parse().map_err(|_| format!("bad component `{b}` in `{s}`"))?;
        Ok(Self::new(m, n))
    }
}

/// Nine nonnegative weights summing to one, indexed by [`ModIndex`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProbabilityVector9<T> {
    p: [T; 9],
}

impl<T: Real> ProbabilityVector9<T> {
    pub fn new(p: [T; 9]) -> Result<Self, StateError> {
        check_probabilities(&p)?;
        Ok(Self { p })
    }

    /// Divides by the sum. Entries must be nonnegative with a positive total.
    pub fn normalized(mut p: [T; 9]) -> Result<Self, StateError> {
        for (index, x) in p.iter().enumerate() {
            if !x.is_finite() {
                return Err(StateError::NotFinite { index });
            }
            if *x < T::zero() {
                return Err(StateError::Negative { index, value: x.to_f64().unwrap_or(f64::NAN) });
            }
        }
        let sum = p.iter().fold(T::zero(), |a, &b| a + b);
        if !(sum > T::zero()) {
            return Err(StateError::NotNormalized { sum: 0.0 });
        }
        p.iter_mut().for_each(|x| *x /= sum);
        Ok(Self { p })
    }

    pub fn uniform() -> Self {
        Self { p: [T::one() / T::lit(9.0); 9] }
    }

    pub fn indicator(alpha: ModIndex) -> Self {
        let mut p = [T::zero(); 9];
        p[alpha.index()] = T::one();
        Self { p }
    }

    /// Weights on the listed points, zero elsewhere.
    pub fn from_support(support: &[ModIndex], probs: &[T]) -> Result<Self, StateError> {
        if support.len() != probs.len() {
            return Err(StateError::CountMismatch { expected: support.len(), got: probs.len() });
        }
        check_probabilities(probs)?;
        let mut p = [T::zero(); 9];
        for (alpha, &x) in support.iter().zip(probs) {
            if p[alpha.index()] != T::zero() {
                return Err(StateError::RepeatedPoint);
            }
            p[alpha.index()] = x;
        }
        Ok(Self { p })
    }

    pub fn get(&self, alpha: ModIndex) -> T {
        self.p[alpha.index()]
    }

    pub fn as_array(&self) -> &[T; 9] {
        &self.p
    }

    /// `Σ p_α²`.
    pub fn sum_of_squares(&self) -> T {
        self.p.iter().fold(T::zero(), |a, &x| a + x * x)
    }
}

fn check_probabilities<T: Real>(p: &[T]) -> Result<(), StateError> {
    let mut sum = T::zero();
    for (index, &x) in p.iter().enumerate() {
        if !x.is_finite() {
            return Err(StateError::NotFinite { index });
        }
        if x < T::zero() {
            return Err(StateError::Negative { index, value: x.to_f64().unwrap_or(f64::NAN) });
        }
        sum += x;
    }
    if (sum - T::one()).abs() > T::STATE_TOL {
        return Err(StateError::NotNormalized { sum: sum.to_f64().unwrap_or(f64::NAN) });
    }
    Ok(())
}

/// `ω^k` for `ω = e^{2πi/3}`, taken from exact table values.
pub fn omega_pow<T: Real>(k: i64) -> Complex<T> {
    let half = T::lit(0.5);
    let s = T::lit(3.0).sqrt() * half;
    match k.rem_euclid(3) {
        0 => Complex::new(T::one(), T::zero()),
        1 => Complex::new(-half, s),
        _ => Complex::new(-half, -s),
    }
}

/// `W_(m,n) = Σ_k ω^{kn} |k+m⟩⟨k|`.
///
/// With this shift direction the operators satisfy
/// `W_(m,n) W_(k,l) = ω^{nk} W_(m+k,n+l)` and
/// `W_(m,n)† = ω^{nm} W_(-m,-n)`.
pub fn weyl_operator<T: Real>(alpha: ModIndex) -> ComplexMatrix<T> {
    let (m, n) = (alpha.m as usize, alpha.n as i64);
    let mut w = ComplexMatrix::zeros(QUTRIT, QUTRIT);
    for k in 0..QUTRIT {
        w[((k + m) % QUTRIT, k)] = omega_pow(k as i64 * n);
    }
    w
}

/// `Ψ_(0,0) = (1/√3) Σ_k |k⟩⊗|k⟩`.
pub fn bell_vector_origin<T: Real>() -> Vec<Complex<T>> {
    let amp = T::one() / T::lit(3.0).sqrt();
    (0..DIM)
        .map(|i| if i / QUTRIT == i % QUTRIT { Complex::new(amp, T::zero()) } else { Complex::new(T::zero(), T::zero()) })
        .collect()
}

/// `Ψ_α = (W_α ⊗ 1) Ψ_(0,0)`. Component `3(k+m) + k` carries `ω^{kn}/√3`.
pub fn bell_vector<T: Real>(alpha: ModIndex) -> Vec<Complex<T>> {
    let amp = T::one() / T::lit(3.0).sqrt();
    let mut v = vec![Complex::new(T::zero(), T::zero()); DIM];
    for (k, pos) in bell_support(alpha).into_iter().enumerate() {
        v[pos] = omega_pow::<T>(k as i64 * alpha.n as i64) * amp;
    }
    v
}

/// Positions of the three nonzero components of `Ψ_α`, ordered by `k`.
fn bell_support(alpha: ModIndex) -> [usize; 3] {
    let m = alpha.m as usize;
    [0, 1, 2].map(|k| ((k + m) % QUTRIT) * QUTRIT + k)
}

/// `P_α = |Ψ_α⟩⟨Ψ_α|`.
pub fn bell_projector<T: Real>(alpha: ModIndex) -> DensityMatrix<T> {
    let v = bell_vector::<T>(alpha);
    DensityMatrix::from_trusted(ComplexMatrix::outer(&v, &v))
}

/// `Σ_α p_α P_α`.
pub fn simplex_state<T: Real>(p: &ProbabilityVector9<T>) -> DensityMatrix<T> {
    let third = T::one() / T::lit(3.0);
    let mut rho = ComplexMatrix::zeros(DIM, DIM);
    for alpha in ModIndex::ALL {
        let weight = p.get(alpha);
        if weight == T::zero() {
            continue;
        }
        let support = bell_support(alpha);
        let n = alpha.n as i64;
        for (a, &ra) in support.iter().enumerate() {
            for (b, &rb) in support.iter().enumerate() {
                // ω^{an} conj(ω^{bn}) / 3
                rho[(ra, rb)] += omega_pow::<T>((a as i64 - b as i64) * n) * (weight * third);
            }
        }
    }
    DensityMatrix::from_trusted(rho)
}

/// `q_α = ⟨Ψ_α|ρ|Ψ_α⟩`, the Bell-diagonal part of any state.
pub fn bell_coefficients<T: Real>(rho: &DensityMatrix<T>) -> ProbabilityVector9<T> {
    let mat = rho.matrix();
    let third = T::one() / T::lit(3.0);
    let mut q = [T::zero(); 9];
    for alpha in ModIndex::ALL {
        let support = bell_support(alpha);
        let n = alpha.n as i64;
        let mut acc = T::zero();
        for (a, &ra) in support.iter().enumerate() {
            for (b, &rb) in support.iter().enumerate() {
                acc += (omega_pow::<T>((b as i64 - a as i64) * n) * mat[(ra, rb)]).re;
            }
        }
        q[alpha.index()] = (acc * third).max(T::zero());
    }
    ProbabilityVector9::normalized(q).unwrap_or_else(|_| ProbabilityVector9::uniform())
}

/// Projection of a state onto the Bell-diagonal simplex.
pub fn bell_diagonal_part<T: Real>(rho: &DensityMatrix<T>) -> DensityMatrix<T> {
    simplex_state(&bell_coefficients(rho))
}

/// The mixtures singled out by the local-equivalence classification.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Family {
    Pair,
    Triangle,
    Line,
    Rectangle,
    Gamma,
}

impl Family {
    pub const ALL: [Family; 5] = [Family::Pair, Family::Triangle, Family::Line, Family::Rectangle, Family::Gamma];

    pub fn support_size(self) -> usize {
        match self {
            Family::Pair => 2,
            Family::Triangle | Family::Line => 3,
            Family::Rectangle | Family::Gamma => 4,
        }
    }

    pub fn class(self) -> SubsetClass {
        match self {
            Family::Pair => SubsetClass::Pair,
            Family::Triangle => SubsetClass::Triangle,
            Family::Line => SubsetClass::Line,
            Family::Rectangle => SubsetClass::Cap,
            Family::Gamma => SubsetClass::LinePlusPoint,
        }
    }

    /// Concrete supports: `Q = {(0,0),(1,0),(1,1),(0,1)}`,
    /// `Γ = {(0,0),(1,0),(2,0),(2,1)}`, the line `{(0,0),(1,0),(2,0)}`.
    pub fn default_support(self) -> Vec<ModIndex> {
        let pts: &[(i64, i64)] = match self {
            Family::Pair => &[(0, 0), (1, 0)],
            Family::Triangle => &[(0, 0), (1, 0), (1, 1)],
            Family::Line => &[(0, 0), (1, 0), (2, 0)],
            Family::Rectangle => &[(0, 0), (1, 0), (1, 1), (0, 1)],
            Family::Gamma => &[(0, 0), (1, 0), (2, 0), (2, 1)],
        };
        pts.iter().map(|&(m, n)| ModIndex::new(m, n)).collect()
    }

    pub fn name(self) -> &'static str {
        match self {
            Family::Pair => "pair",
            Family::Triangle => "triangle",
            Family::Line => "line",
            Family::Rectangle => "rectangle",
            Family::Gamma => "gamma",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// State of the given family on its default support.
pub fn named_family<T: Real>(kind: Family, probs: &[T]) -> Result<DensityMatrix<T>, StateError> {
    named_family_on(kind, &kind.default_support(), probs)
}

/// State of the given family on an explicit support, which must belong to
/// the family's equivalence class. Probabilities pair up with `support` in order.
pub fn named_family_on<T: Real>(
    kind: Family,
    support: &[ModIndex],
    probs: &[T],
) -> Result<DensityMatrix<T>, StateError> {
    if probs.len() != kind.support_size() {
        return Err(StateError::CountMismatch { expected: kind.support_size(), got: probs.len() });
    }
    if support.len() != kind.support_size() {
        return Err(StateError::CountMismatch { expected: kind.support_size(), got: support.len() });
    }
    let set = PointSet::from_points(support);
    if set.len() != support.len() {
        return Err(StateError::RepeatedPoint);
    }
    let found = classify_subset(set).expect("support size is within 1..=4");
    if found != kind.class() {
        return Err(StateError::WrongSupport { support: set.to_string(), found, expected: kind.class() });
    }
    let p = ProbabilityVector9::from_support(support, probs)?;
    Ok(simplex_state(&p))
}
