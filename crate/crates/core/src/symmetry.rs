//! Affine symmetries of the index grid `Z_3 x Z_3` and the equivalence
//! classes of small point sets under them.
//!
//! Everything here is exact integer arithmetic mod 3 and exhaustive: the
//! group has 432 elements and no orbit has more than 126 members.

use std::collections::BTreeSet;
use std::cmp::Ordering;
use std::fmt;
use std::sync::OnceLock;

use thiserror::Error;

use crate::weyl::ModIndex;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SymmetryError {
    #[error("expected {expected} points, got {got}")]
    WrongSize { expected: &'static str, got: usize },
    #[error("matrix [[{a},{b}],[{c},{d}]] is singular mod 3")]
    Singular { a: u8, b: u8, c: u8, d: u8 },
}

/// `x ↦ M x + t` on `Z_3²` with `det M ≠ 0 (mod 3)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AffineMap {
    a: u8,
    b: u8,
    c: u8,
    d: u8,
    j: u8,
    r: u8,
}

impl AffineMap {
    pub const IDENTITY: AffineMap = AffineMap { a: 1, b: 0, c: 0, d: 1, j: 0, r: 0 };

    /// Matrix `[[a, b], [c, d]]` and translation `(j, r)`; entries reduced mod 3.
    pub fn new(matrix: [[i64; 2]; 2], translation: [i64; 2]) -> Result<Self, SymmetryError> {
        let red = |x: i64| x.rem_euclid(3) as u8;
        let f = AffineMap {
            a: red(matrix[0][0]),
            b: red(matrix[0][1]),
            c: red(matrix[1][0]),
            d: red(matrix[1][1]),
            j: red(translation[0]),
            r: red(translation[1]),
        };
        if f.determinant() == 0 {
            return Err(SymmetryError::Singular { a: f.a, b: f.b, c: f.c, d: f.d });
        }
        Ok(f)
    }

    pub fn translation(by: ModIndex) -> Self {
        AffineMap { j: by.m(), r: by.n(), ..Self::IDENTITY }
    }

    /// `ad - bc mod 3`.
    pub fn determinant(&self) -> u8 {
        (i64::from(self.a * self.d) - i64::from(self.b * self.c)).rem_euclid(3) as u8
    }

    pub fn apply(&self, x: ModIndex) -> ModIndex {
        let (k, l) = (i64::from(x.m()), i64::from(x.n()));
        ModIndex::new(
            i64::from(self.a) * k + i64::from(self.b) * l + i64::from(self.j),
            i64::from(self.c) * k + i64::from(self.d) * l + i64::from(self.r),
        )
    }

    /// `self ∘ other`: apply `other` first.
    pub fn compose(&self, other: &AffineMap) -> AffineMap {
        let m = |x: u32| (x % 3) as u8;
        let (a1, b1, c1, d1) = (u32::from(self.a), u32::from(self.b), u32::from(self.c), u32::from(self.d));
        let (a2, b2, c2, d2) = (u32::from(other.a), u32::from(other.b), u32::from(other.c), u32::from(other.d));
        let t = self.apply(ModIndex::new(i64::from(other.j), i64::from(other.r)));
        AffineMap {
            a: m(a1 * a2 + b1 * c2),
            b: m(a1 * b2 + b1 * d2),
            c: m(c1 * a2 + d1 * c2),
            d: m(c1 * b2 + d1 * d2),
            j: t.m(),
            r: t.n(),
        }
    }

    pub fn apply_set(&self, s: PointSet) -> PointSet {
        s.iter().map(|x| self.apply(x)).collect()
    }
}

impl fmt::Display for AffineMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{},{}],[{},{}]]+({},{})", self.a, self.b, self.c, self.d, self.j, self.r)
    }
}

/// Free-function form of [`AffineMap::apply`].
pub fn apply_map(f: &AffineMap, x: ModIndex) -> ModIndex {
    f.apply(x)
}

/// All 432 invertible affine maps of `Z_3²`, generated by brute force.
pub fn enumerate_group() -> Vec<AffineMap> {
    let mut out = Vec::with_capacity(432);
    for a in 0..3u8 {
        for b in 0..3u8 {
            for c in 0..3u8 {
                for d in 0..3u8 {
                    for j in 0..3u8 {
                        for r in 0..3u8 {
                            let f = AffineMap { a, b, c, d, j, r };
                            if f.determinant() != 0 {
                                out.push(f);
                            }
                        }
                    }
                }
            }
        }
    }
    out
}

fn group() -> &'static [AffineMap] {
    static GROUP: OnceLock<Vec<AffineMap>> = OnceLock::new();
    GROUP.get_or_init(enumerate_group)
}

/// A subset of the nine grid points.
///
/// Ordering is lexicographic on the sorted point sequences, so the minimum of
/// a collection is its lexicographically smallest member.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct PointSet(u16);

impl PointSet {
    pub const EMPTY: PointSet = PointSet(0);

    pub fn from_points(points: &[ModIndex]) -> Self {
        points.iter().copied().collect()
    }

    pub fn from_bits(bits: u16) -> Self {
        PointSet(bits & 0x1ff)
    }

    pub fn bits(self) -> u16 {
        self.0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn contains(self, x: ModIndex) -> bool {
        self.0 & (1 << x.index()) != 0
    }

    pub fn insert(&mut self, x: ModIndex) {
        self.0 |= 1 << x.index();
    }

    /// Points in lexicographic order.
    pub fn iter(self) -> impl Iterator<Item = ModIndex> {
        ModIndex::ALL.into_iter().filter(move |x| self.contains(*x))
    }

    pub fn points(self) -> Vec<ModIndex> {
        self.iter().collect()
    }

    /// Every subset of the grid with exactly `k` points.
    pub fn all_of_size(k: usize) -> impl Iterator<Item = PointSet> {
        (0u16..512).map(PointSet).filter(move |s| s.len() == k)
    }
}

impl FromIterator<ModIndex> for PointSet {
    fn from_iter<I: IntoIterator<Item = ModIndex>>(iter: I) -> Self {
        let mut s = PointSet::EMPTY;
        for x in iter {
            s.insert(x);
        }
        s
    }
}

impl Ord for PointSet {
    fn cmp(&self, other: &Self) -> Ordering {
        self.iter().cmp(other.iter())
    }
}

impl PartialOrd for PointSet {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, x) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{x}")?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for PointSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// Local-equivalence class of a set of one to four grid points.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SubsetClass {
    Singleton,
    Pair,
    Line,
    Triangle,
    LinePlusPoint,
    /// Four points, no three collinear; the orbit of the grid rectangles.
    Cap,
}

impl SubsetClass {
    pub fn label(self) -> &'static str {
        match self {
            SubsetClass::Singleton => "singleton",
            SubsetClass::Pair => "pair",
            SubsetClass::Line => "line",
            SubsetClass::Triangle => "triangle",
            SubsetClass::LinePlusPoint => "line_plus_point",
            SubsetClass::Cap => "cap",
        }
    }
}

impl fmt::Display for SubsetClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Whether a 3-point set has the form `{x, x + v, x + 2v}` with `v ≠ 0`.
pub fn is_line(s: PointSet) -> Result<bool, SymmetryError> {
    if s.len() != 3 {
        return Err(SymmetryError::WrongSize { expected: "3", got: s.len() });
    }
    Ok(s.iter().any(|x| {
        ModIndex::ALL[1..].iter().any(|&v| {
            let line: PointSet = [x, x + v, x + v + v].into_iter().collect();
            line == s
        })
    }))
}

pub fn classify_subset(s: PointSet) -> Result<SubsetClass, SymmetryError> {
    match s.len() {
        1 => Ok(SubsetClass::Singleton),
        2 => Ok(SubsetClass::Pair),
        3 => Ok(if is_line(s)? { SubsetClass::Line } else { SubsetClass::Triangle }),
        4 => {
            let pts = s.points();
            let has_line = (0..4).any(|skip| {
                let triple: PointSet =
                    pts.iter().enumerate().filter(|(i, _)| *i != skip).map(|(_, &x)| x).collect();
                is_line(triple).unwrap_or(false)
            });
            Ok(if has_line { SubsetClass::LinePlusPoint } else { SubsetClass::Cap })
        }
        got => Err(SymmetryError::WrongSize { expected: "1 to 4", got }),
    }
}

/// All images of `s` under the affine group.
pub fn orbit(s: PointSet) -> BTreeSet<PointSet> {
    group().iter().map(|f| f.apply_set(s)).collect()
}

/// Lexicographically smallest member of the orbit of `s`.
pub fn canonical_representative(s: PointSet) -> PointSet {
    orbit(s).into_iter().next().unwrap_or(s)
}

/// Partition of all `k`-point subsets into orbits, ordered by canonical representative.
pub fn orbits_of_size(k: usize) -> Vec<BTreeSet<PointSet>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    let mut all: Vec<PointSet> = PointSet::all_of_size(k).collect();
    all.sort();
    for s in all {
        if seen.contains(&s) {
            continue;
        }
        let o = orbit(s);
        seen.extend(o.iter().copied());
        out.push(o);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(points: &[(i64, i64)]) -> PointSet {
        points.iter().map(|&(m, n)| ModIndex::new(m, n)).collect()
    }

    #[test]
    fn group_has_432_elements_and_identity() {
        let g = enumerate_group();
        assert_eq!(g.len(), 432);
        assert!(g.contains(&AffineMap::IDENTITY));
        let matrices: BTreeSet<_> = g.iter().map(|f| (f.a, f.b, f.c, f.d)).collect();
        assert_eq!(matrices.len(), 48);
    }

    #[test]
    fn group_is_closed() {
        let g = enumerate_group();
        let members: BTreeSet<_> = g.iter().copied().collect();
        for f in &g {
            for h in &g {
                assert!(members.contains(&f.compose(h)));
            }
        }
    }

    #[test]
    fn composition_agrees_with_sequential_application() {
        let g = enumerate_group();
        for (i, f) in g.iter().enumerate().step_by(7) {
            let h = &g[(i * 31 + 5) % g.len()];
            for x in ModIndex::ALL {
                assert_eq!(f.compose(h).apply(x), f.apply(h.apply(x)));
            }
        }
    }

    #[test]
    fn apply_examples() {
        let x = ModIndex::new(1, 2);
        assert_eq!(apply_map(&AffineMap::IDENTITY, x), x);
        let shift = AffineMap::translation(ModIndex::new(1, 0));
        assert_eq!(shift.apply(ModIndex::new(2, 2)), ModIndex::new(0, 2));
        let scale = AffineMap::new([[1, 0], [0, 2]], [0, 0]).unwrap();
        assert_eq!(scale.apply(ModIndex::new(0, 1)), ModIndex::new(0, 2));
    }

    #[test]
    fn singular_matrix_rejected() {
        assert!(AffineMap::new([[1, 1], [2, 2]], [0, 0]).is_err());
        assert!(AffineMap::new([[0, 0], [0, 0]], [1, 1]).is_err());
    }

    #[test]
    fn every_map_is_a_bijection() {
        for f in enumerate_group() {
            let image: PointSet = ModIndex::ALL.iter().map(|&x| f.apply(x)).collect();
            assert_eq!(image.len(), 9);
        }
    }

    #[test]
    fn line_examples() {
        assert!(is_line(set(&[(0, 0), (0, 1), (0, 2)])).unwrap());
        assert!(is_line(set(&[(0, 0), (1, 1), (2, 2)])).unwrap());
        assert!(!is_line(set(&[(0, 0), (1, 0), (1, 1)])).unwrap());
        assert!(is_line(set(&[(0, 0), (1, 0)])).is_err());
    }

    #[test]
    fn line_test_matches_zero_sum_criterion() {
        // three distinct points of AG(2,3) are collinear iff they sum to zero
        let mut lines = 0;
        for s in PointSet::all_of_size(3) {
            let sum = s.iter().fold(ModIndex::ORIGIN, |a, b| a + b);
            assert_eq!(is_line(s).unwrap(), sum == ModIndex::ORIGIN, "{s}");
            lines += usize::from(sum == ModIndex::ORIGIN);
        }
        assert_eq!(lines, 12);
    }

    #[test]
    fn classification_examples() {
        assert_eq!(classify_subset(set(&[(0, 0), (1, 0), (2, 0), (2, 1)])).unwrap(), SubsetClass::LinePlusPoint);
        assert_eq!(classify_subset(set(&[(0, 0), (1, 0), (1, 1), (0, 1)])).unwrap(), SubsetClass::Cap);
        assert_eq!(classify_subset(set(&[(0, 0)])).unwrap(), SubsetClass::Singleton);
        assert!(classify_subset(PointSet::EMPTY).is_err());
        assert!(classify_subset(set(&[(0, 0), (0, 1), (0, 2), (1, 0), (1, 1)])).is_err());
    }

    #[test]
    fn orbit_sizes() {
        assert_eq!(orbit(set(&[(2, 2)])).len(), 9);
        assert_eq!(orbit(set(&[(0, 0), (1, 1), (2, 2)])).len(), 12);
        assert_eq!(orbit(set(&[(0, 0), (1, 0), (1, 1)])).len(), 72);
        assert_eq!(orbit(set(&[(0, 0), (1, 0), (2, 0), (2, 1)])).len(), 72);
        assert_eq!(orbit(set(&[(0, 0), (1, 0), (1, 1), (0, 1)])).len(), 54);
    }

    #[test]
    fn orbit_counts_by_size() {
        let sizes = |k| {
            let mut v: Vec<usize> = orbits_of_size(k).iter().map(|o| o.len()).collect();
            v.sort();
            v
        };
        assert_eq!(sizes(1), vec![9]);
        assert_eq!(sizes(2), vec![36]);
        assert_eq!(sizes(3), vec![12, 72]);
        assert_eq!(sizes(4), vec![54, 72]);
    }

    #[test]
    fn classification_is_constant_on_orbits() {
        for k in 1..=4 {
            for o in orbits_of_size(k) {
                let first = classify_subset(*o.iter().next().unwrap()).unwrap();
                assert!(o.iter().all(|s| classify_subset(*s).unwrap() == first));
            }
        }
    }

    #[test]
    fn grid_rectangles_are_caps_in_one_orbit() {
        let reference = orbit(set(&[(0, 0), (1, 0), (1, 1), (0, 1)]));
        for j in 0..3 {
            for k in 0..3 {
                for n in 1..3 {
                    for m in 1..3 {
                        let q = set(&[(j, k), (j + n, k), (j + n, k + m), (j, k + m)]);
                        assert_eq!(classify_subset(q).unwrap(), SubsetClass::Cap);
                        assert!(reference.contains(&q));
                    }
                }
            }
        }
    }

    #[test]
    fn lines_map_to_lines() {
        let lines: Vec<_> = PointSet::all_of_size(3).filter(|s| is_line(*s).unwrap()).collect();
        for f in enumerate_group() {
            for l in &lines {
                assert!(is_line(f.apply_set(*l)).unwrap());
            }
        }
    }

    #[test]
    fn canonical_representatives() {
        for l in PointSet::all_of_size(3).filter(|s| is_line(*s).unwrap()) {
            assert_eq!(canonical_representative(l), set(&[(0, 0), (0, 1), (0, 2)]));
        }
        assert_eq!(canonical_representative(set(&[(2, 2)])), set(&[(0, 0)]));
        let caps: Vec<_> =
            PointSet::all_of_size(4).filter(|s| classify_subset(*s).unwrap() == SubsetClass::Cap).collect();
        assert_eq!(caps.len(), 54);
        let min = *caps.iter().min().unwrap();
        assert_eq!(min, set(&[(0, 0), (0, 1), (1, 0), (1, 1)]));
        for c in caps {
            assert_eq!(canonical_representative(c), min);
        }
    }

    #[test]
    fn point_set_order_is_lexicographic() {
        let a = set(&[(0, 0), (0, 2)]);
        let b = set(&[(0, 0), (1, 0)]);
        let c = set(&[(0, 1)]);
        assert!(a < b && b < c);
        assert_eq!(set(&[(1, 0), (0, 1)]).to_string(), "{(0,1),(1,0)}");
    }
}
