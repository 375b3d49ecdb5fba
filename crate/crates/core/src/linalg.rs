//! Dense real kernels shared by the rest of the crate.
//!
//! Everything here works on small matrices (dimension in the tens at most), so
//! the algorithms favour accuracy over speed: cyclic Jacobi for symmetric
//! eigenproblems and one-sided (Hestenes) Jacobi for singular values.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use serde::Serialize;

use crate::error::{Error, Result};

const MAX_SWEEPS: usize = 100;

/// Dense row-major real matrix.
#[derive(Clone, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f64>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = 1.0;
        }
        m
    }

    /// Builds a matrix from row-major data.
    ///
    /// Panics if `data.len() != rows * cols`.
    pub fn from_row_slice(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols, "row-major data has wrong length");
        Self {
            rows,
            cols,
            data: data.to_vec(),
        }
    }

    /// Builds a matrix from a list of equally long rows.
    pub fn from_rows<R: AsRef<[f64]>>(rows: &[R]) -> Self {
        let cols = rows.first().map_or(0, |r| r.as_ref().len());
        let mut data = Vec::with_capacity(rows.len() * cols);
        for r in rows {
            assert_eq!(r.as_ref().len(), cols, "ragged rows");
            data.extend_from_slice(r.as_ref());
        }
        Self {
            rows: rows.len(),
            cols,
            data,
        }
    }

    /// Builds an `nrows x columns.len()` matrix whose columns are the given vectors.
    pub fn from_columns<C: AsRef<[f64]>>(nrows: usize, columns: &[C]) -> Self {
        let mut m = Self::zeros(nrows, columns.len());
        for (j, c) in columns.iter().enumerate() {
            let c = c.as_ref();
            assert_eq!(c.len(), nrows, "column has wrong length");
            for (i, &x) in c.iter().enumerate() {
                m[(i, j)] = x;
            }
        }
        m
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

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn column(&self, j: usize) -> Vec<f64> {
        (0..self.rows).map(|i| self[(i, j)]).collect()
    }

    pub fn columns(&self) -> impl Iterator<Item = Vec<f64>> + '_ {
        (0..self.cols).map(move |j| self.column(j))
    }

    pub fn to_rows(&self) -> Vec<Vec<f64>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn select_columns(&self, idx: &[usize]) -> Self {
        let mut out = Self::zeros(self.rows, idx.len());
        for (k, &j) in idx.iter().enumerate() {
            for i in 0..self.rows {
                out[(i, k)] = self[(i, j)];
            }
        }
        out
    }

    pub fn transpose(&self) -> Self {
        let mut t = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                t[(j, i)] = self[(i, j)];
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.cols, "vector length mismatch");
        (0..self.rows).map(|i| dot(self.row(i), v)).collect()
    }

    pub fn scale(&self, s: f64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|x| x * s).collect(),
        }
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0_f64, |m, x| m.max(x.abs()))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|x| x * x).sum::<f64>().sqrt()
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    pub fn ensure_finite(&self) -> Result<()> {
        if self.is_finite() {
            Ok(())
        } else {
            Err(Error::NotFinite)
        }
    }
}

impl fmt::Debug for Matrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "Matrix {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            writeln!(f, "  {:?}", self.row(i))?;
        }
        write!(f, "]")
    }
}

impl Index<(usize, usize)> for Matrix {
    type Output = f64;

    fn index(&self, (i, j): (usize, usize)) -> &f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &self.data[i * self.cols + j]
    }
}

impl IndexMut<(usize, usize)> for Matrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut f64 {
        debug_assert!(i < self.rows && j < self.cols);
        &mut self.data[i * self.cols + j]
    }
}

impl Mul for &Matrix {
    type Output = Matrix;

    fn mul(self, rhs: &Matrix) -> Matrix {
        assert_eq!(self.cols, rhs.rows, "inner dimensions differ");
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a == 0.0 {
                    continue;
                }
                for j in 0..rhs.cols {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

impl Add for &Matrix {
    type Output = Matrix;

    fn add(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }
}

impl Sub for &Matrix {
    type Output = Matrix;

    fn sub(self, rhs: &Matrix) -> Matrix {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a - b).collect(),
        }
    }
}

pub(crate) fn dot(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| x * y).sum()
}

pub(crate) fn norm(a: &[f64]) -> f64 {
    dot(a, a).sqrt()
}

/// Relative cutoffs used for rank and frame-bound decisions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Tolerance {
    rank_rel: f64,
    frame_rel: f64,
}

impl Tolerance {
    pub const DEFAULT_RANK_REL: f64 = 1e-10;
    pub const DEFAULT_FRAME_REL: f64 = 1e-10;

    pub fn new(rank_rel: f64, frame_rel: f64) -> Result<Self> {
        for (name, value) in [("rank_rel", rank_rel), ("frame_rel", frame_rel)] {
            if !(value > 0.0 && value < 1.0) {
                return Err(Error::InvalidTolerance { name, value });
            }
        }
        Ok(Self {
            rank_rel,
            frame_rel,
        })
    }

    /// Singular values at or below `rank_rel * sigma_max` count as zero.
    pub fn rank_rel(&self) -> f64 {
        self.rank_rel
    }

    /// A lower frame bound at or below `frame_rel * upper` counts as zero.
    pub fn frame_rel(&self) -> f64 {
        self.frame_rel
    }
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            rank_rel: Self::DEFAULT_RANK_REL,
            frame_rel: Self::DEFAULT_FRAME_REL,
        }
    }
}

fn ensure_symmetric(m: &Matrix) -> Result<()> {
    if !m.is_square() {
        return Err(Error::NonSquare {
            rows: m.rows,
            cols: m.cols,
        });
    }
    m.ensure_finite()?;
    let n = m.rows;
    let mut asym = 0.0_f64;
    for i in 0..n {
        for j in i + 1..n {
            asym = asym.max((m[(i, j)] - m[(j, i)]).abs());
        }
    }
    if asym > 1e-12 * m.frobenius_norm() {
        return Err(Error::NonSymmetric { asymmetry: asym });
    }
    Ok(())
}

/// Cyclic Jacobi on a row-major symmetric `n x n` buffer. On return the
/// diagonal holds the eigenvalues; `vectors`, when given, is multiplied on the
/// right by every rotation.
fn jacobi_diagonalize(a: &mut [f64], n: usize, mut vectors: Option<&mut [f64]>) {
    let scale = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    if scale == 0.0 {
        return;
    }
    // symmetrize exactly; the input was only checked to 1e-12
    for i in 0..n {
        for j in i + 1..n {
            let s = 0.5 * (a[i * n + j] + a[j * n + i]);
            a[i * n + j] = s;
            a[j * n + i] = s;
        }
    }
    for _ in 0..MAX_SWEEPS {
        let mut off = 0.0;
        for p in 0..n {
            for q in p + 1..n {
                off += a[p * n + q] * a[p * n + q];
            }
        }
        if off.sqrt() <= f64::EPSILON * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq.abs() < f64::MIN_POSITIVE {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + theta.hypot(1.0));
                let c = 1.0 / t.hypot(1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
                a[p * n + q] = 0.0;
                a[q * n + p] = 0.0;
                if let Some(v) = vectors.as_deref_mut() {
                    for k in 0..n {
                        let vkp = v[k * n + p];
                        let vkq = v[k * n + q];
                        v[k * n + p] = c * vkp - s * vkq;
                        v[k * n + q] = s * vkp + c * vkq;
                    }
                }
            }
        }
    }
}

/// Eigendecomposition of a symmetric matrix, eigenvalues ascending.
#[derive(Debug, Clone)]
pub struct SymmetricEigen {
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors as columns, in the order of `values`.
    pub vectors: Matrix,
}

pub fn symmetric_eigen(m: &Matrix) -> Result<SymmetricEigen> {
    ensure_symmetric(m)?;
    let n = m.rows;
    let mut a = m.data.clone();
    let mut v = Matrix::identity(n).data;
    jacobi_diagonalize(&mut a, n, Some(&mut v));
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[i * n + i].total_cmp(&a[j * n + j]));
    let values = order.iter().map(|&i| a[i * n + i]).collect();
    let v = Matrix {
        rows: n,
        cols: n,
        data: v,
    };
    Ok(SymmetricEigen {
        values,
        vectors: v.select_columns(&order),
    })
}

/// Eigenvalues only, ascending.
pub fn symmetric_eigenvalues(m: &Matrix) -> Result<Vec<f64>> {
    ensure_symmetric(m)?;
    let n = m.rows;
    let mut a = m.data.clone();
    jacobi_diagonalize(&mut a, n, None);
    let mut values: Vec<f64> = (0..n).map(|i| a[i * n + i]).collect();
    values.sort_by(f64::total_cmp);
    Ok(values)
}

/// Extreme eigenvalues of an exactly symmetric row-major buffer, which is
/// overwritten. Used on the hot path of subset enumeration.
pub(crate) fn extremal_eigs_in_place(a: &mut [f64], n: usize) -> (f64, f64) {
    jacobi_diagonalize(a, n, None);
    (0..n).fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), i| {
        let d = a[i * n + i];
        (lo.min(d), hi.max(d))
    })
}

/// Smallest and largest eigenvalue of a symmetric (PSD) matrix.
pub fn sym_extremal_eigs(m: &Matrix) -> Result<(f64, f64)> {
    let values = symmetric_eigenvalues(m)?;
    match (values.first(), values.last()) {
        (Some(&lo), Some(&hi)) => Ok((lo, hi)),
        _ => Ok((0.0, 0.0)),
    }
}

/// Thin singular value decomposition `M = U diag(s) V^T`, with `s` descending.
#[derive(Debug, Clone)]
pub struct Svd {
    /// `rows x k` left singular vectors, `k = min(rows, cols)`.
    pub u: Matrix,
    pub singular_values: Vec<f64>,
    /// `cols x k` right singular vectors.
    pub v: Matrix,
}

impl Svd {
    pub fn max(&self) -> f64 {
        self.singular_values.first().copied().unwrap_or(0.0)
    }

    /// Number of singular values above `rank_rel * sigma_max`.
    pub fn rank(&self, tol: &Tolerance) -> usize {
        let smax = self.max();
        if smax == 0.0 {
            return 0;
        }
        let cutoff = tol.rank_rel * smax;
        self.singular_values.iter().filter(|&&s| s > cutoff).count()
    }
}

pub fn svd(m: &Matrix) -> Result<Svd> {
    m.ensure_finite()?;
    if m.cols > m.rows {
        let t = svd_tall(&m.transpose());
        return Ok(Svd {
            u: t.v,
            singular_values: t.singular_values,
            v: t.u,
        });
    }
    Ok(svd_tall(m))
}

/// One-sided Jacobi for `rows >= cols`: rotate column pairs of `A V` until
/// they are mutually orthogonal; the column norms are then the singular values.
fn svd_tall(a: &Matrix) -> Svd {
    let (r, c) = (a.rows, a.cols);
    let mut w: Vec<Vec<f64>> = a.columns().collect();
    let mut v: Vec<Vec<f64>> = (0..c)
        .map(|j| {
            let mut e = vec![0.0; c];
            e[j] = 1.0;
            e
        })
        .collect();

    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for p in 0..c {
            for q in p + 1..c {
                let alpha = dot(&w[p], &w[p]);
                let beta = dot(&w[q], &w[q]);
                let gamma = dot(&w[p], &w[q]);
                if gamma == 0.0 || gamma.abs() <= f64::EPSILON * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let zeta = (beta - alpha) / (2.0 * gamma);
                let t = zeta.signum() / (zeta.abs() + zeta.hypot(1.0));
                let cs = 1.0 / t.hypot(1.0);
                let sn = cs * t;
                rotate_pair(&mut w, p, q, cs, sn);
                rotate_pair(&mut v, p, q, cs, sn);
            }
        }
        if !rotated {
            break;
        }
    }

    let norms: Vec<f64> = w.iter().map(|col| norm(col)).collect();
    let mut order: Vec<usize> = (0..c).collect();
    order.sort_by(|&i, &j| norms[j].total_cmp(&norms[i]).then(i.cmp(&j)));

    let mut u = Matrix::zeros(r, c);
    let mut vm = Matrix::zeros(c, c);
    let mut singular_values = Vec::with_capacity(c);
    for (k, &j) in order.iter().enumerate() {
        let s = norms[j];
        singular_values.push(s);
        if s > 0.0 {
            for i in 0..r {
                u[(i, k)] = w[j][i] / s;
            }
        }
        for i in 0..c {
            vm[(i, k)] = v[j][i];
        }
    }
    Svd {
        u,
        singular_values,
        v: vm,
    }
}

fn rotate_pair(cols: &mut [Vec<f64>], p: usize, q: usize, c: f64, s: f64) {
    let (head, tail) = cols.split_at_mut(q);
    let (cp, cq) = (&mut head[p], &mut tail[0]);
    for (x, y) in cp.iter_mut().zip(cq.iter_mut()) {
        let (xp, xq) = (*x, *y);
        *x = c * xp - s * xq;
        *y = s * xp + c * xq;
    }
}

pub fn singular_values(m: &Matrix) -> Result<Vec<f64>> {
    Ok(svd(m)?.singular_values)
}

pub fn numerical_rank(m: &Matrix, tol: &Tolerance) -> Result<usize> {
    if m.is_empty() {
        m.ensure_finite()?;
        return Ok(0);
    }
    Ok(svd(m)?.rank(tol))
}

/// Largest singular value (spectral norm).
pub fn operator_norm(m: &Matrix) -> Result<f64> {
    if m.is_empty() {
        return Ok(0.0);
    }
    Ok(svd(m)?.max())
}

/// Moore-Penrose inverse with singular values below the rank cutoff treated as zero.
pub fn pseudo_inverse(m: &Matrix, tol: &Tolerance) -> Result<Matrix> {
    let mut out = Matrix::zeros(m.cols, m.rows);
    if m.is_empty() {
        m.ensure_finite()?;
        return Ok(out);
    }
    let d = svd(m)?;
    let k = d.rank(tol);
    for l in 0..k {
        let inv = 1.0 / d.singular_values[l];
        for i in 0..m.cols {
            let vi = d.v[(i, l)] * inv;
            if vi == 0.0 {
                continue;
            }
            for j in 0..m.rows {
                out[(i, j)] += vi * d.u[(j, l)];
            }
        }
    }
    Ok(out)
}

/// A subspace of `R^n` stored by an orthonormal basis (possibly empty).
#[derive(Debug, Clone, PartialEq)]
pub struct Subspace {
    ambient_dim: usize,
    basis: Matrix,
}

impl Subspace {
    pub fn trivial(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::zeros(ambient_dim, 0),
        }
    }

    pub fn whole(ambient_dim: usize) -> Self {
        Self {
            ambient_dim,
            basis: Matrix::identity(ambient_dim),
        }
    }

    /// Wraps a basis that is already orthonormal (checked to 1e-10).
    pub fn from_orthonormal(basis: Matrix) -> Result<Self> {
        basis.ensure_finite()?;
        let gram = &basis.transpose() * &basis;
        let defect = (&gram - &Matrix::identity(basis.cols)).max_abs();
        if defect > 1e-10 || basis.cols > basis.rows {
            return Err(Error::BadDimensions(format!(
                "basis columns are not orthonormal (defect {defect:e})"
            )));
        }
        Ok(Self {
            ambient_dim: basis.rows,
            basis,
        })
    }

    /// Span of the columns of `vectors`.
    pub fn span(vectors: &Matrix, tol: &Tolerance) -> Result<Self> {
        orthonormal_basis(vectors, tol)
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn dim(&self) -> usize {
        self.basis.cols
    }

    pub fn is_trivial(&self) -> bool {
        self.basis.cols == 0
    }

    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    pub fn projection(&self) -> Matrix {
        projection(self)
    }

    /// Coordinates of `v` in this basis, i.e. `B^T v`.
    pub fn coordinates(&self, v: &[f64]) -> Vec<f64> {
        self.basis.transpose().mul_vec(v)
    }

    /// `|| v - P v ||`
    pub fn residual(&self, v: &[f64]) -> f64 {
        let coords = self.coordinates(v);
        let pv = self.basis.mul_vec(&coords);
        v.iter()
            .zip(&pv)
            .map(|(a, b)| (a - b) * (a - b))
            .sum::<f64>()
            .sqrt()
    }

    /// Eigenvectors of `P` with eigenvalue 0. `P` has only the eigenvalues 0
    /// and 1, so the split is made at 1/2 rather than by a relative rank test.
    pub fn orthogonal_complement(&self) -> Result<Self> {
        let eig = symmetric_eigen(&self.projection())?;
        let keep: Vec<usize> = (0..self.ambient_dim).filter(|&i| eig.values[i] < 0.5).collect();
        Ok(Subspace {
            ambient_dim: self.ambient_dim,
            basis: eig.vectors.select_columns(&keep),
        })
    }
}

/// Orthonormal basis of the column span of `vectors`.
pub fn orthonormal_basis(vectors: &Matrix, tol: &Tolerance) -> Result<Subspace> {
    vectors.ensure_finite()?;
    let n = vectors.rows;
    if vectors.cols == 0 {
        return Ok(Subspace::trivial(n));
    }
    let d = svd(vectors)?;
    let k = d.rank(tol);
    let idx: Vec<usize> = (0..k).collect();
    Ok(Subspace {
        ambient_dim: n,
        basis: d.u.select_columns(&idx),
    })
}

/// Orthogonal projection `B B^T` onto the subspace.
pub fn projection(s: &Subspace) -> Matrix {
    &s.basis * &s.basis.transpose()
}

fn same_ambient(m: &Subspace, n: &Subspace) -> Result<()> {
    if m.ambient_dim != n.ambient_dim {
        return Err(Error::DimensionMismatch {
            expected: m.ambient_dim,
            found: n.ambient_dim,
        });
    }
    Ok(())
}

/// `M ∩ N` from the eigenvectors of `P_M P_N P_M` (restricted to `M`) whose
/// eigenvalue lies within `rank_rel` of one.
pub fn subspace_intersection(m: &Subspace, n: &Subspace, tol: &Tolerance) -> Result<Subspace> {
    same_ambient(m, n)?;
    if m.is_trivial() || n.is_trivial() {
        return Ok(Subspace::trivial(m.ambient_dim));
    }
    let cross = &n.basis.transpose() * &m.basis;
    let compressed = &cross.transpose() * &cross;
    let eig = symmetric_eigen(&compressed)?;
    let keep: Vec<usize> = (0..eig.values.len())
        .filter(|&i| eig.values[i] >= 1.0 - tol.rank_rel)
        .collect();
    let basis = &m.basis * &eig.vectors.select_columns(&keep);
    Ok(Subspace {
        ambient_dim: m.ambient_dim,
        basis,
    })
}
