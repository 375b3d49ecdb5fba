//! Finite frames: ordered families of vectors in `R^n`.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::geometry;
use crate::linalg::{self, Matrix, Subspace, Tolerance};

/// Relative residual above which a vector is considered to lie outside a subspace.
const MEMBERSHIP_REL: f64 = 1e-9;

/// An ordered family `f_1, ..., f_m` in `R^n`, stored as its `n x m`
/// synthesis matrix. Order matters: weavings pair vectors index by index.
#[derive(Debug, Clone, PartialEq)]
pub struct Frame {
    synthesis: Matrix,
}

/// Which space the optimal bounds refer to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum RelativeTo {
    /// The whole of `R^n`; only defined for spanning families.
    Ambient,
    /// The span of the family (frame-sequence bounds).
    SpanOfFamily,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub relative_to: RelativeTo,
}

/// How the index after the last vector is filled in by the shifted constructions.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Closure {
    /// `f_{m+1} = 0`
    ZeroTail,
    /// `f_{m+1} = f_1`
    WrapAround,
}

impl Frame {
    pub fn new(dim: usize, vectors: Vec<Vec<f64>>) -> Result<Self> {
        Self::from_vectors(dim, &vectors)
    }

    pub fn from_vectors<V: AsRef<[f64]>>(dim: usize, vectors: &[V]) -> Result<Self> {
        if dim == 0 || vectors.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if let Some(bad) = vectors.iter().find(|v| v.as_ref().len() != dim) {
            return Err(Error::DimensionMismatch {
                expected: dim,
                found: bad.as_ref().len(),
            });
        }
        Self::from_synthesis(Matrix::from_columns(dim, vectors))
    }

    /// Wraps an `n x m` matrix whose columns are the frame vectors.
    pub fn from_synthesis(synthesis: Matrix) -> Result<Self> {
        if synthesis.rows() == 0 || synthesis.cols() == 0 {
            return Err(Error::EmptyFrame);
        }
        synthesis.ensure_finite()?;
        Ok(Self { synthesis })
    }

    /// Ambient dimension `n`.
    pub fn dim(&self) -> usize {
        self.synthesis.rows()
    }

    /// Number of vectors `m`.
    pub fn len(&self) -> usize {
        self.synthesis.cols()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn vector(&self, i: usize) -> Vec<f64> {
        self.synthesis.column(i)
    }

    pub fn vectors(&self) -> Vec<Vec<f64>> {
        self.synthesis.columns().collect()
    }

    /// The synthesis operator: column `j` is `f_j`.
    pub fn synthesis(&self) -> &Matrix {
        &self.synthesis
    }

    /// `S = T T^T`, i.e. `S f = sum_i <f, f_i> f_i`.
    pub fn frame_operator(&self) -> Matrix {
        &self.synthesis * &self.synthesis.transpose()
    }

    /// `{S f_i}` in the original order.
    pub fn apply_frame_operator(&self) -> Frame {
        Frame {
            synthesis: &self.frame_operator() * &self.synthesis,
        }
    }

    /// `sum_i ||f_i||^2`
    pub fn total_energy(&self) -> f64 {
        self.synthesis.as_slice().iter().map(|x| x * x).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.synthesis.as_slice().iter().all(|&x| x == 0.0)
    }

    pub fn rank(&self, tol: &Tolerance) -> usize {
        // entries are finite by construction
        linalg::numerical_rank(&self.synthesis, tol).unwrap_or(0)
    }

    /// True iff the family spans `R^n`.
    pub fn is_frame(&self, tol: &Tolerance) -> bool {
        self.rank(tol) == self.dim()
    }

    fn require_frame(&self, tol: &Tolerance) -> Result<()> {
        let rank = self.rank(tol);
        if rank != self.dim() {
            return Err(Error::NotAFrame {
                rank,
                dim: self.dim(),
            });
        }
        Ok(())
    }

    /// Optimal frame bounds: extreme eigenvalues of `S` on `R^n`, or its
    /// nonzero spectrum when measured on the span of the family.
    pub fn optimal_bounds(&self, relative_to: RelativeTo, tol: &Tolerance) -> Result<FrameBounds> {
        match relative_to {
            RelativeTo::Ambient => {
                self.require_frame(tol)?;
                let (lower, upper) = linalg::sym_extremal_eigs(&self.frame_operator())?;
                Ok(FrameBounds {
                    lower: lower.max(0.0),
                    upper,
                    relative_to,
                })
            }
            RelativeTo::SpanOfFamily => {
                let d = linalg::svd(&self.synthesis)?;
                let r = d.rank(tol);
                let (lower, upper) = if r == 0 {
                    (0.0, 0.0)
                } else {
                    (d.singular_values[r - 1].powi(2), d.max().powi(2))
                };
                Ok(FrameBounds {
                    lower,
                    upper,
                    relative_to,
                })
            }
        }
    }

    /// Optimal upper (Bessel) bound, `||T||^2`; valid for any family.
    pub fn upper_bound(&self) -> f64 {
        linalg::operator_norm(&self.synthesis).unwrap_or(0.0).powi(2)
    }

    /// The canonical dual `{S^{-1} f_i}`.
    pub fn canonical_dual(&self, tol: &Tolerance) -> Result<Frame> {
        self.require_frame(tol)?;
        let eig = linalg::symmetric_eigen(&self.frame_operator())?;
        let n = self.dim();
        let mut scaled = eig.vectors.clone();
        for k in 0..n {
            let inv = 1.0 / eig.values[k];
            for i in 0..n {
                scaled[(i, k)] *= inv;
            }
        }
        let s_inv = &scaled * &eig.vectors.transpose();
        Ok(Frame {
            synthesis: &s_inv * &self.synthesis,
        })
    }

    /// Every `n`-element subfamily spans `R^n`.
    pub fn is_full_spark(&self, tol: &Tolerance) -> Result<bool> {
        let (n, m) = (self.dim(), self.len());
        if m < n {
            return Err(Error::TooFewVectors { needed: n, found: m });
        }
        let mut all = true;
        for_each_combination(m, n, |idx| {
            let sub = self.synthesis.select_columns(idx);
            if linalg::numerical_rank(&sub, tol).unwrap_or(0) < n {
                all = false;
            }
            all
        });
        Ok(all)
    }

    /// Every vector lies in the span of the remaining ones.
    pub fn is_weak_full_spark(&self, tol: &Tolerance) -> Result<bool> {
        let m = self.len();
        if m < 2 {
            return Err(Error::TooFewVectors { needed: 2, found: m });
        }
        let full = self.rank(tol);
        Ok((0..m).all(|i| {
            let others: Vec<usize> = (0..m).filter(|&j| j != i).collect();
            let sub = self.synthesis.select_columns(&others);
            linalg::numerical_rank(&sub, tol).unwrap_or(0) == full
        }))
    }

    /// `{f_i - f_{i+1}}`.
    pub fn difference_family(&self, closure: Closure) -> Frame {
        self.shifted_combination(1.0, -1.0, closure)
    }

    /// `{alpha f_i + beta f_{i+1}}` with both coefficients nonzero.
    pub fn linear_comb_family(&self, alpha: f64, beta: f64, closure: Closure) -> Result<Frame> {
        if !alpha.is_finite() || !beta.is_finite() {
            return Err(Error::NotFinite);
        }
        if alpha == 0.0 || beta == 0.0 {
            return Err(Error::ZeroCoefficient { alpha, beta });
        }
        Ok(self.shifted_combination(alpha, beta, closure))
    }

    fn shifted_combination(&self, alpha: f64, beta: f64, closure: Closure) -> Frame {
        let (n, m) = (self.dim(), self.len());
        let mut out = Matrix::zeros(n, m);
        for i in 0..m {
            let next = match (i + 1 < m, closure) {
                (true, _) => Some(i + 1),
                (false, Closure::WrapAround) => Some(0),
                (false, Closure::ZeroTail) => None,
            };
            for r in 0..n {
                let tail = next.map_or(0.0, |j| self.synthesis[(r, j)]);
                out[(r, i)] = alpha * self.synthesis[(r, i)] + beta * tail;
            }
        }
        Frame { synthesis: out }
    }

    /// `{T f_i}` for an `n x n` map `T`.
    pub fn map(&self, t: &Matrix) -> Result<Frame> {
        if t.cols() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: t.cols(),
            });
        }
        t.ensure_finite()?;
        Frame::from_synthesis(t * &self.synthesis)
    }

    /// Re-expresses the family in the orthonormal coordinates of `subspace`,
    /// turning a frame for a subspace into a frame for `R^k`.
    pub fn restrict_to(&self, subspace: &Subspace) -> Result<Frame> {
        if subspace.ambient_dim() != self.dim() {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: subspace.ambient_dim(),
            });
        }
        if subspace.is_trivial() {
            return Err(Error::EmptyFrame);
        }
        let scale = (0..self.len())
            .map(|i| linalg::norm(&self.vector(i)))
            .fold(0.0_f64, f64::max)
            .max(f64::MIN_POSITIVE);
        for i in 0..self.len() {
            let r = subspace.residual(&self.vector(i));
            if r > MEMBERSHIP_REL * scale {
                return Err(Error::BadDimensions(format!(
                    "vector {} lies outside the subspace (residual {r:e})",
                    i + 1
                )));
            }
        }
        Frame::from_synthesis(&subspace.basis().transpose() * &self.synthesis)
    }
}

/// Calls `visit` with every increasing `k`-subset of `0..m` in lexicographic
/// order until it returns `false`.
fn for_each_combination(m: usize, k: usize, mut visit: impl FnMut(&[usize]) -> bool) {
    if k > m {
        return;
    }
    let mut idx: Vec<usize> = (0..k).collect();
    loop {
        if !visit(&idx) {
            return;
        }
        let Some(pos) = (0..k).rev().find(|&i| idx[i] != i + m - k) else {
            return;
        };
        idx[pos] += 1;
        for j in pos + 1..k {
            idx[j] = idx[j - 1] + 1;
        }
    }
}

/// A square linear map together with the structural flags the weaving
/// constructions care about.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMapProfile {
    pub map: Matrix,
    pub is_idempotent: bool,
    pub is_invertible: bool,
    pub range_equals_range_of_adjoint: bool,
    /// `||T^{-1}||`, present iff the map is invertible.
    pub inverse_norm: Option<f64>,
}

pub fn profile_operator(m: &Matrix, tol: &Tolerance) -> Result<LinearMapProfile> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows(),
            cols: m.cols(),
        });
    }
    m.ensure_finite()?;
    let n = m.rows();
    let d = linalg::svd(m)?;
    let norm = d.max();

    let square = m * m;
    let defect = linalg::operator_norm(&(&square - m))?;
    let is_idempotent = defect <= tol.rank_rel() * norm.powi(2).max(1.0);

    let range = Subspace::span(m, tol)?;
    let co_range = Subspace::span(&m.transpose(), tol)?;
    let range_equals_range_of_adjoint = geometry::gap(&range, &co_range)? <= tol.rank_rel();

    let is_invertible = d.rank(tol) == n;
    let inverse_norm = is_invertible.then(|| 1.0 / d.singular_values[n - 1]);

    Ok(LinearMapProfile {
        map: m.clone(),
        is_idempotent,
        is_invertible,
        range_equals_range_of_adjoint,
        inverse_norm,
    })
}

pub fn apply_operator(profile: &LinearMapProfile, frame: &Frame) -> Result<Frame> {
    frame.map(&profile.map)
}
