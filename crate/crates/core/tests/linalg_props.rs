use magic_simplex::linalg::{hermitian_eigenvalues, kron, DIM};
use magic_simplex::weyl::{weyl_operator, ModIndex};
use magic_simplex::{Complex, ComplexMatrix, DensityMatrix};
use proptest::prelude::*;

/// Number of eigenvalues of `h` below `x`, from the signs of the pivots of
/// an unpivoted LDL† factorization of `h - x I` (Sylvester's law of inertia).
fn count_below(h: &ComplexMatrix, x: f64) -> usize {
    let n = h.rows();
    let mut a: Vec<Vec<Complex>> = (0..n).map(|i| (0..n).map(|j| h[(i, j)]).collect()).collect();
    for (i, row) in a.iter_mut().enumerate() {
        row[i] -= x;
    }
    let mut negative = 0;
    for k in 0..n {
        let mut pivot = a[k][k].re;
        if pivot == 0.0 {
            pivot = -1e-300;
        }
        if pivot < 0.0 {
            negative += 1;
        }
        let (upper, lower) = a.split_at_mut(k + 1);
        let pivot_row = &upper[k];
        for row in lower {
            let f = row[k] / pivot;
            for (x, &y) in row[k + 1..].iter_mut().zip(&pivot_row[k + 1..]) {
                *x -= f * y;
            }
        }
    }
    negative
}

fn bisection_eigenvalues(h: &ComplexMatrix) -> Vec<f64> {
    let bound = h.frobenius_norm() + 1.0;
    (0..h.rows())
        .map(|k| {
            let (mut lo, mut hi) = (-bound, bound);
            for _ in 0..200 {
                let mid = 0.5 * (lo + hi);
                if count_below(h, mid) > k {
                    hi = mid;
                } else {
                    lo = mid;
                }
            }
            0.5 * (lo + hi)
        })
        .collect()
}

fn hermitian_from(entries: &[(f64, f64)]) -> ComplexMatrix {
    let m = ComplexMatrix::from_fn(DIM, DIM, |i, j| Complex::new(entries[i * DIM + j].0, entries[i * DIM + j].1));
    (&m + &m.adjoint()).scale_real(0.5)
}

fn entries() -> impl Strategy<Value = Vec<(f64, f64)>> {
    prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), DIM * DIM)
}

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn jacobi_matches_bisection(e in entries()) {
        let h = hermitian_from(&e);
        let jacobi = sorted(hermitian_eigenvalues(&h).unwrap());
        let oracle = bisection_eigenvalues(&h);
        for (a, b) in jacobi.iter().zip(&oracle) {
            prop_assert!((a - b).abs() < 1e-8, "{jacobi:?} vs {oracle:?}");
        }
    }

    #[test]
    fn eigenvalues_are_unitarily_invariant(e in entries(), a in 0usize..9, b in 0usize..9, phases in prop::collection::vec(0.0..6.3f64, DIM)) {
        let h = hermitian_from(&e);
        let local = kron(&weyl_operator::<f64>(ModIndex::from_index(a)), &weyl_operator(ModIndex::from_index(b)));
        let diag = ComplexMatrix::from_fn(DIM, DIM, |i, j| if i == j { Complex::from_polar(1.0, phases[i]) } else { Complex::new(0.0, 0.0) });
        let u = &diag * &local;
        let rotated = &(&u * &h) * &u.adjoint();
        let before = sorted(hermitian_eigenvalues(&h).unwrap());
        let after = sorted(hermitian_eigenvalues(&rotated).unwrap());
        for (x, y) in before.iter().zip(&after) {
            prop_assert!((x - y).abs() < 1e-10);
        }
    }

    #[test]
    fn kron_trace_factorizes(e in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 18)) {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(e[3 * i + j].0, e[3 * i + j].1));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(e[9 + 3 * i + j].0, e[9 + 3 * i + j].1));
        let k = kron(&a, &b);
        prop_assert!((k.trace() - a.trace() * b.trace()).norm() < 1e-12);
    }

    #[test]
    fn partial_transpose_is_an_involution(e in entries()) {
        let h = hermitian_from(&e);
        let twice = h.partial_transpose().unwrap().partial_transpose().unwrap();
        prop_assert_eq!(twice, h.clone());
        let pt = h.partial_transpose().unwrap();
        prop_assert!((pt.trace() - h.trace()).norm() < 1e-12);
        prop_assert!(pt.is_hermitian(1e-12));
    }

    #[test]
    fn partial_transpose_of_product_state_transposes_second_factor(e in prop::collection::vec((-1.0..1.0f64, -1.0..1.0f64), 18)) {
        let a = ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(e[3 * i + j].0, e[3 * i + j].1));
        let b = ComplexMatrix::from_fn(3, 3, |i, j| Complex::new(e[9 + 3 * i + j].0, e[9 + 3 * i + j].1));
        prop_assert!(kron(&a, &b).partial_transpose().unwrap().approx_eq(&kron(&a, &b.transpose()), 1e-15));
    }
}

#[test]
fn maximally_mixed_state_has_flat_spectrum() {
    let ev = DensityMatrix::maximally_mixed().eigenvalues().unwrap();
    assert!(ev.iter().all(|x| (x - 1.0 / 9.0).abs() < 1e-15));
}

#[test]
fn degenerate_spectrum_matches_oracle() {
    let h = ComplexMatrix::diag(&[1.0, 1.0, 1.0, -0.5, -0.5, 2.0, 0.0, 0.0, 0.0]);
    let local = kron(&weyl_operator::<f64>(ModIndex::new(1, 2)), &weyl_operator(ModIndex::new(2, 2)));
    let rotated = &(&local * &h) * &local.adjoint();
    let jacobi = sorted(hermitian_eigenvalues(&rotated).unwrap());
    let oracle = bisection_eigenvalues(&rotated);
    for (a, b) in jacobi.iter().zip(&oracle) {
        assert!((a - b).abs() < 1e-8);
    }
}
