//! Gap and angle cosines between subspaces of `R^n`.
//!
//! The supremum definitions are evaluated through their projection forms:
//! the directed gap is `||(I - P_N) P_M||` and the minimal-angle cosine is
//! `||P_M P_N||`. Both reduce to spectral norms of small basis products.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{self, Matrix, Tolerance};
use crate::weaving::{weaving_family, IndexSubset};

pub use crate::linalg::{subspace_intersection, Subspace};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GapAngleReport {
    pub dim_m: usize,
    pub dim_n: usize,
    pub directed_gap_mn: f64,
    pub directed_gap_nm: f64,
    pub gap: f64,
    pub min_angle_cos: f64,
    pub angle_cos: f64,
}

fn same_ambient(m: &Subspace, n: &Subspace) -> Result<()> {
    if m.ambient_dim() != n.ambient_dim() {
        return Err(Error::DimensionMismatch {
            expected: m.ambient_dim(),
            found: n.ambient_dim(),
        });
    }
    Ok(())
}

fn spectral_norm(m: &Matrix) -> f64 {
    if m.is_empty() {
        return 0.0;
    }
    // basis products are finite whenever the bases are
    linalg::operator_norm(m).unwrap_or(0.0).clamp(0.0, 1.0)
}

/// `sup_{x in S_M} dist(x, N)`; zero when `M` is trivial.
pub fn directed_gap(m: &Subspace, n: &Subspace) -> Result<f64> {
    same_ambient(m, n)?;
    if m.is_trivial() {
        return Ok(0.0);
    }
    // (I - P_N) B_M
    let coords = &n.basis().transpose() * m.basis();
    let residual = m.basis() - &(n.basis() * &coords);
    Ok(spectral_norm(&residual))
}

/// `max(delta(M, N), delta(N, M))`
pub fn gap(m: &Subspace, n: &Subspace) -> Result<f64> {
    Ok(directed_gap(m, n)?.max(directed_gap(n, m)?))
}

/// `sup |<x, y>|` over the unit balls of `M` and `N`.
pub fn min_angle_cos(m: &Subspace, n: &Subspace) -> Result<f64> {
    same_ambient(m, n)?;
    if m.is_trivial() || n.is_trivial() {
        return Ok(0.0);
    }
    Ok(spectral_norm(&(&m.basis().transpose() * n.basis())))
}

/// Removes the common part `M ∩ N` from both subspaces, then measures the
/// minimal-angle cosine of what is left.
pub fn angle_cos(m: &Subspace, n: &Subspace, tol: &Tolerance) -> Result<f64> {
    same_ambient(m, n)?;
    let common = subspace_intersection(m, n, tol)?;
    if common.is_trivial() {
        return min_angle_cos(m, n);
    }
    let m_rest = remove_component(m, &common)?;
    let n_rest = remove_component(n, &common)?;
    min_angle_cos(&m_rest, &n_rest)
}

// S ∩ C^⊥ for C ⊆ S: B_S^T (I - P_C) B_S has eigenvalues 0 (along C) and 1
fn remove_component(s: &Subspace, c: &Subspace) -> Result<Subspace> {
    let coords = &c.basis().transpose() * s.basis();
    let compressed = &Matrix::identity(s.dim()) - &(&coords.transpose() * &coords);
    let eig = linalg::symmetric_eigen(&compressed)?;
    let keep: Vec<usize> = (0..s.dim()).filter(|&i| eig.values[i] > 0.5).collect();
    Subspace::from_orthonormal(s.basis() * &eig.vectors.select_columns(&keep))
}

pub fn gap_angle_report(m: &Subspace, n: &Subspace, tol: &Tolerance) -> Result<GapAngleReport> {
    let directed_gap_mn = directed_gap(m, n)?;
    let directed_gap_nm = directed_gap(n, m)?;
    Ok(GapAngleReport {
        dim_m: m.dim(),
        dim_n: n.dim(),
        directed_gap_mn,
        directed_gap_nm,
        gap: directed_gap_mn.max(directed_gap_nm),
        min_angle_cos: min_angle_cos(m, n)?,
        angle_cos: angle_cos(m, n, tol)?,
    })
}

/// The two complementary weaving spans for a nontrivial `sigma`:
/// `span(F_sigma ∪ G_sigma^c)` and `span(F_sigma^c ∪ G_sigma)`.
pub fn weaving_spans(
    f: &Frame,
    g: &Frame,
    sigma: IndexSubset,
    tol: &Tolerance,
) -> Result<(Subspace, Subspace)> {
    if sigma.is_trivial() {
        return Err(Error::TrivialSubset);
    }
    let first = weaving_family(f, g, sigma)?;
    let second = weaving_family(g, f, sigma)?;
    Ok((
        Subspace::span(first.synthesis(), tol)?,
        Subspace::span(second.synthesis(), tol)?,
    ))
}

pub fn weaving_span_geometry(
    f: &Frame,
    g: &Frame,
    sigma: IndexSubset,
    tol: &Tolerance,
) -> Result<GapAngleReport> {
    let (m1, m2) = weaving_spans(f, g, sigma, tol)?;
    gap_angle_report(&m1, &m2, tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn span(dim: usize, cols: &[&[f64]]) -> Subspace {
        Subspace::span(&Matrix::from_columns(dim, cols), &tol()).unwrap()
    }

    #[test]
    fn directed_gap_examples() {
        let e1 = span(2, &[&[1.0, 0.0]]);
        let diag = span(2, &[&[1.0, 1.0]]);
        assert_eq!(directed_gap(&e1, &e1).unwrap(), 0.0);
        // e1 - P_N e1 = (1/2, -1/2)
        let hand = (0.25f64 + 0.25).sqrt();
        assert_abs_diff_eq!(directed_gap(&e1, &diag).unwrap(), hand, epsilon = 1e-12);
        assert_abs_diff_eq!(hand, FRAC_1_SQRT_2, epsilon = 1e-15);

        let plane = Subspace::whole(2);
        assert_abs_diff_eq!(directed_gap(&e1, &plane).unwrap(), 0.0, epsilon = 1e-15);
        assert_abs_diff_eq!(directed_gap(&plane, &e1).unwrap(), 1.0, epsilon = 1e-15);
        assert_eq!(directed_gap(&Subspace::trivial(2), &e1).unwrap(), 0.0);
        assert!(matches!(
            directed_gap(&e1, &Subspace::trivial(3)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn gap_examples() {
        let e1 = span(2, &[&[1.0, 0.0]]);
        let e2 = span(2, &[&[0.0, 1.0]]);
        assert_eq!(gap(&e1, &e1).unwrap(), 0.0);
        assert_abs_diff_eq!(gap(&e1, &e2).unwrap(), 1.0, epsilon = 1e-15);
    }

    #[test]
    fn min_angle_cos_examples() {
        let e1 = span(2, &[&[1.0, 0.0]]);
        let e2 = span(2, &[&[0.0, 1.0]]);
        let diag = span(2, &[&[1.0, 1.0]]);
        assert_eq!(min_angle_cos(&e1, &e2).unwrap(), 0.0);
        assert_abs_diff_eq!(min_angle_cos(&e1, &diag).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        assert_abs_diff_eq!(min_angle_cos(&diag, &diag).unwrap(), 1.0, epsilon = 1e-12);
        assert_eq!(min_angle_cos(&Subspace::trivial(2), &e1).unwrap(), 0.0);
    }

    #[test]
    fn angle_cos_examples() {
        let t = tol();
        let diag = span(2, &[&[1.0, 1.0]]);
        let e1 = span(2, &[&[1.0, 0.0]]);
        assert_abs_diff_eq!(angle_cos(&diag, &diag, &t).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(angle_cos(&e1, &diag, &t).unwrap(), FRAC_1_SQRT_2, epsilon = 1e-12);
        let m = span(3, &[&[1.0, 0.0, 0.0], &[0.0, 1.0, 0.0]]);
        let n = span(3, &[&[1.0, 0.0, 0.0], &[0.0, 0.0, 1.0]]);
        assert_abs_diff_eq!(angle_cos(&m, &n, &t).unwrap(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(min_angle_cos(&m, &n).unwrap(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn weaving_geometry_examples() {
        let t = tol();
        let f = Frame::from_vectors(2, &[[1.0, 0.0], [0.0, 1.0]]).unwrap();
        let g = Frame::from_vectors(2, &[[0.0, 1.0], [1.0, 0.0]]).unwrap();
        let sigma = IndexSubset::from_indices(2, &[1]).unwrap();
        let r = weaving_span_geometry(&f, &g, sigma, &t).unwrap();
        assert_eq!((r.dim_m, r.dim_n), (1, 1));
        assert_eq!(r.min_angle_cos, 0.0);
        assert_abs_diff_eq!(r.gap, 1.0, epsilon = 1e-15);

        let same = weaving_span_geometry(&f, &f, sigma, &t).unwrap();
        assert_eq!(same.gap, 0.0);

        for trivial in [IndexSubset::empty(2), IndexSubset::full(2)] {
            assert_eq!(
                weaving_span_geometry(&f, &g, trivial, &t),
                Err(Error::TrivialSubset)
            );
        }
    }
}
