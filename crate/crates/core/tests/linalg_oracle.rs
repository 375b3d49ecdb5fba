mod common;

use common::{any_matrix, low_rank, max_abs_diff, symmetric, to_na};
use frameweave::linalg::{
    numerical_rank, operator_norm, projection, pseudo_inverse, singular_values, svd,
    symmetric_eigen, Subspace,
};
use frameweave::{Matrix, Tolerance};
use proptest::prelude::*;

fn sorted(mut v: Vec<f64>) -> Vec<f64> {
    v.sort_by(f64::total_cmp);
    v
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn eigenvalues_match_nalgebra(a in symmetric(8)) {
        let ours = symmetric_eigen(&a).unwrap();
        let theirs = sorted(to_na(&a).symmetric_eigen().eigenvalues.iter().copied().collect());
        let scale = a.frobenius_norm().max(1.0);
        for (x, y) in ours.values.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-11 * scale, "{x} vs {y}");
        }
        // A V = V diag(lambda)
        let av = &a * &ours.vectors;
        for j in 0..a.rows() {
            for i in 0..a.rows() {
                let r = av[(i, j)] - ours.vectors[(i, j)] * ours.values[j];
                prop_assert!(r.abs() <= 1e-10 * scale);
            }
        }
    }

    #[test]
    fn rayleigh_quotient_is_bracketed(a in symmetric(8), seed in prop::collection::vec(-1.0f64..1.0, 8)) {
        let n = a.rows();
        let x = &seed[..n];
        let xx: f64 = x.iter().map(|v| v * v).sum();
        prop_assume!(xx > 1e-6);
        let ax = a.mul_vec(x);
        let q = x.iter().zip(&ax).map(|(p, q)| p * q).sum::<f64>() / xx;
        let e = symmetric_eigen(&a).unwrap();
        let slack = 1e-12 * a.frobenius_norm().max(1.0);
        prop_assert!(e.values[0] - slack <= q && q <= e.values[n - 1] + slack);
    }

    #[test]
    fn singular_values_match_nalgebra(a in any_matrix(8)) {
        let ours = singular_values(&a).unwrap();
        let mut theirs: Vec<f64> = to_na(&a).svd(false, false).singular_values.iter().copied().collect();
        theirs.sort_by(|x, y| y.total_cmp(x));
        let scale = a.frobenius_norm().max(1.0);
        prop_assert_eq!(ours.len(), theirs.len());
        for (x, y) in ours.iter().zip(&theirs) {
            prop_assert!((x - y).abs() <= 1e-11 * scale, "{x} vs {y}");
        }
        prop_assert!((operator_norm(&a).unwrap() - theirs[0]).abs() <= 1e-11 * scale);
    }

    #[test]
    fn svd_reconstructs(a in any_matrix(8)) {
        let d = svd(&a).unwrap();
        let k = d.singular_values.len();
        let mut sigma = Matrix::zeros(k, k);
        for i in 0..k {
            sigma[(i, i)] = d.singular_values[i];
        }
        let back = &(&d.u * &sigma) * &d.v.transpose();
        prop_assert!(max_abs_diff(&back, &a) <= 1e-11 * a.frobenius_norm().max(1.0));
    }

    #[test]
    fn rank_of_products_is_bounded_and_transpose_invariant((a, k) in low_rank(8)) {
        let t = Tolerance::default();
        let r = numerical_rank(&a, &t).unwrap();
        prop_assert!(r <= k);
        prop_assert_eq!(r, numerical_rank(&a.transpose(), &t).unwrap());
        prop_assert_eq!(r, numerical_rank(&a.scale(1e6), &t).unwrap());
    }

    #[test]
    fn penrose_identities((a, _) in low_rank(8)) {
        let t = Tolerance::default();
        let p = pseudo_inverse(&a, &t).unwrap();
        let scale = a.frobenius_norm().max(1.0);
        let pscale = p.frobenius_norm().max(1.0);
        let ap = &a * &p;
        let pa = &p * &a;
        let tol = 1e-9 * scale * pscale;
        prop_assert!(max_abs_diff(&(&ap * &a), &a) <= tol * scale);
        prop_assert!(max_abs_diff(&(&pa * &p), &p) <= tol * pscale);
        prop_assert!(max_abs_diff(&ap, &ap.transpose()) <= tol);
        prop_assert!(max_abs_diff(&pa, &pa.transpose()) <= tol);
    }

    #[test]
    fn pseudo_inverse_matches_nalgebra(a in any_matrix(6)) {
        let t = Tolerance::default();
        let na = to_na(&a);
        let s = na.clone().svd(false, false).singular_values;
        let smax = s.max();
        let smin_kept = s.iter().copied().filter(|&x| x > 1e-6 * smax).fold(f64::INFINITY, f64::min);
        // well-separated spectrum only: either clearly kept or absent
        prop_assume!(s.iter().all(|&x| x > 1e-6 * smax || x == 0.0) && smin_kept.is_finite());
        let ours = pseudo_inverse(&a, &t).unwrap();
        let theirs = na.pseudo_inverse(1e-10 * smax).unwrap();
        let theirs = Matrix::from_row_slice(theirs.nrows(), theirs.ncols(), theirs.transpose().as_slice());
        prop_assert!(max_abs_diff(&ours, &theirs) <= 1e-8 * (1.0 + theirs.max_abs()));
    }

    #[test]
    fn projections_are_idempotent_and_symmetric(a in any_matrix(6)) {
        let t = Tolerance::default();
        let s = Subspace::span(&a, &t).unwrap();
        let p = projection(&s);
        prop_assert!(max_abs_diff(&(&p * &p), &p) <= 1e-12);
        prop_assert!(max_abs_diff(&p, &p.transpose()) <= 1e-14);
        prop_assert_eq!(s.dim(), numerical_rank(&a, &t).unwrap());
        // P a = a for every column
        prop_assert!(max_abs_diff(&(&p * &a), &a) <= 1e-11 * a.frobenius_norm().max(1.0));
    }
}

#[test]
fn rank_deficient_singular_values_are_tiny() {
    // third column is the sum of the first two
    let a = Matrix::from_rows(&[[1.0, 2.0, 3.0], [4.0, 5.0, 9.0], [7.0, 8.0, 15.0], [1.0, 0.0, 1.0]]);
    let s = singular_values(&a).unwrap();
    assert!(s[2] <= 1e-14 * s[0], "{s:?}");
    assert_eq!(numerical_rank(&a, &Tolerance::default()).unwrap(), 2);
}
