//! Weavings of two frames and exhaustive woven certification.
//!
//! For index subset `sigma`, the weaving of `F` and `G` keeps `f_i` for
//! `i in sigma` and `g_i` otherwise. Two frames for `R^n` are woven exactly
//! when every weaving spans `R^n`; [`certify_woven`] decides this by walking
//! all `2^m` masks and recording the extreme eigenvalues of each weaving's
//! frame operator.

mod conditions;
mod explore;

use rayon::prelude::*;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{self, Matrix, Tolerance};

pub use conditions::{
    check_corollary, check_norm_sum, check_perturbation, ConditionReport, PreconditionNote,
};
pub use explore::{explore_problem, Counterexample, ExplorationReport, ExploreConfig, Problem};

/// Default cap on `m` for exhaustive enumeration.
pub const DEFAULT_ENUMERATION_LIMIT: usize = 24;
/// Masks are `u64`, and the top bit is kept free for range arithmetic.
pub const MAX_INDICES: usize = 63;

const CHUNK: usize = 1 << 12;

/// A subset `sigma` of `{1, ..., m}` stored as a bitmask; bit `i` set means
/// index `i + 1` is in `sigma`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct IndexSubset {
    m: usize,
    mask: u64,
}

fn full_mask(m: usize) -> u64 {
    if m >= 64 {
        u64::MAX
    } else {
        (1u64 << m) - 1
    }
}

impl IndexSubset {
    pub fn new(m: usize, mask: u64) -> Result<Self> {
        if m > MAX_INDICES || mask & !full_mask(m) != 0 {
            return Err(Error::InvalidSubset { m, mask });
        }
        Ok(Self { m, mask })
    }

    pub fn empty(m: usize) -> Self {
        Self { m, mask: 0 }
    }

    pub fn full(m: usize) -> Self {
        Self {
            m,
            mask: full_mask(m),
        }
    }

    /// From 1-based indices.
    pub fn from_indices(m: usize, indices: &[usize]) -> Result<Self> {
        let mut mask = 0u64;
        for &i in indices {
            if i == 0 || i > m || i > MAX_INDICES {
                return Err(Error::InvalidSubset { m, mask: u64::MAX });
            }
            mask |= 1 << (i - 1);
        }
        Self::new(m, mask)
    }

    /// Parses a bit string whose `k`-th character (1-based) says whether
    /// index `k` belongs to the subset, e.g. `"101"` is `{1, 3}`.
    pub fn from_bits(bits: &str) -> Result<Self> {
        let m = bits.chars().count();
        let mut mask = 0u64;
        for (k, c) in bits.chars().enumerate() {
            match c {
                '1' if k < MAX_INDICES => mask |= 1 << k,
                '0' => {}
                _ => {
                    return Err(Error::BadDimensions(format!(
                        "invalid subset bit string {bits:?}"
                    )))
                }
            }
        }
        Self::new(m, mask)
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    /// 0-based membership test.
    pub fn contains(&self, i: usize) -> bool {
        i < self.m && self.mask >> i & 1 == 1
    }

    /// 1-based indices in increasing order.
    pub fn indices(&self) -> Vec<usize> {
        (0..self.m).filter(|&i| self.contains(i)).map(|i| i + 1).collect()
    }

    pub fn bits(&self) -> String {
        (0..self.m)
            .map(|i| if self.contains(i) { '1' } else { '0' })
            .collect()
    }

    pub fn complement(&self) -> Self {
        Self {
            m: self.m,
            mask: self.mask ^ full_mask(self.m),
        }
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    /// Empty or the whole index set.
    pub fn is_trivial(&self) -> bool {
        self.mask == 0 || self.mask == full_mask(self.m)
    }
}

impl Serialize for IndexSubset {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let mut s = serializer.serialize_struct("IndexSubset", 4)?;
        s.serialize_field("m", &self.m)?;
        s.serialize_field("mask", &self.mask)?;
        s.serialize_field("bits", &self.bits())?;
        s.serialize_field("indices", &self.indices())?;
        s.end()
    }
}

/// Which subsets `sigma` are enumerated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum SubsetPolicy {
    /// Every `sigma ⊆ [m]`, including the empty and the full set.
    All,
    /// Only `sigma` with both `sigma` and its complement nonempty.
    NontrivialOnly,
}

impl SubsetPolicy {
    fn mask_range(self, m: usize) -> (u64, u64) {
        let end = full_mask(m) + 1;
        match self {
            SubsetPolicy::All => (0, end),
            SubsetPolicy::NontrivialOnly => (1, end.saturating_sub(1).max(1)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WovenReport {
    pub woven: bool,
    /// `min_sigma lambda_min(S_sigma)`
    pub universal_lower: f64,
    /// `max_sigma lambda_max(S_sigma)`
    pub universal_upper: f64,
    /// `frame_rel * universal_upper`; woven iff `universal_lower` exceeds it.
    pub threshold: f64,
    /// Smallest mask attaining `universal_lower`.
    pub worst_subset: IndexSubset,
    /// Smallest mask whose weaving has `lambda_min <= threshold`.
    pub breaking_subset: Option<IndexSubset>,
    pub subsets_examined: u64,
    pub subset_policy: SubsetPolicy,
}

fn ensure_same_shape(f: &Frame, g: &Frame) -> Result<()> {
    if f.dim() != g.dim() || f.len() != g.len() {
        return Err(Error::ShapeMismatch {
            left_dim: f.dim(),
            left_len: f.len(),
            right_dim: g.dim(),
            right_len: g.len(),
        });
    }
    Ok(())
}

fn ensure_subset_fits(f: &Frame, sigma: IndexSubset) -> Result<()> {
    if sigma.m() != f.len() {
        return Err(Error::InvalidSubset {
            m: f.len(),
            mask: sigma.mask(),
        });
    }
    Ok(())
}

/// `{f_i}_{i in sigma} ∪ {g_i}_{i not in sigma}`, keeping index order.
pub fn weaving_family(f: &Frame, g: &Frame, sigma: IndexSubset) -> Result<Frame> {
    ensure_same_shape(f, g)?;
    ensure_subset_fits(f, sigma)?;
    let n = f.dim();
    let (tf, tg) = (f.synthesis(), g.synthesis());
    let mut t = Matrix::zeros(n, f.len());
    for j in 0..f.len() {
        let src = if sigma.contains(j) { tf } else { tg };
        for i in 0..n {
            t[(i, j)] = src[(i, j)];
        }
    }
    Frame::from_synthesis(t)
}

/// Frame operator of the weaving, `S_sigma`.
pub fn weaving_operator(f: &Frame, g: &Frame, sigma: IndexSubset) -> Result<Matrix> {
    Ok(weaving_family(f, g, sigma)?.frame_operator())
}

/// True iff the weaving's synthesis operator is onto `R^n`.
pub fn surjectivity_check(
    f: &Frame,
    g: &Frame,
    sigma: IndexSubset,
    tol: &Tolerance,
) -> Result<bool> {
    let w = weaving_family(f, g, sigma)?;
    Ok(w.rank(tol) == w.dim())
}

/// Column-major copies of both families, for the enumeration hot loop.
struct PairColumns {
    n: usize,
    f: Vec<Vec<f64>>,
    g: Vec<Vec<f64>>,
}

impl PairColumns {
    fn new(f: &Frame, g: &Frame) -> Self {
        Self {
            n: f.dim(),
            f: f.vectors(),
            g: g.vectors(),
        }
    }

    /// `(lambda_min, lambda_max)` of `S_sigma`. The operator is accumulated in
    /// index order so the value depends only on the mask.
    fn extremes(&self, mask: u64, buf: &mut [f64]) -> (f64, f64) {
        let n = self.n;
        buf.fill(0.0);
        for (i, (fi, gi)) in self.f.iter().zip(&self.g).enumerate() {
            let v = if mask >> i & 1 == 1 { fi } else { gi };
            for r in 0..n {
                let vr = v[r];
                if vr == 0.0 {
                    continue;
                }
                for c in 0..n {
                    buf[r * n + c] += vr * v[c];
                }
            }
        }
        linalg::extremal_eigs_in_place(buf, n)
    }
}

#[derive(Debug, Clone, Copy)]
struct Extremes {
    min: f64,
    min_mask: u64,
    max: f64,
    count: u64,
}

impl Extremes {
    const EMPTY: Extremes = Extremes {
        min: f64::INFINITY,
        min_mask: u64::MAX,
        max: f64::NEG_INFINITY,
        count: 0,
    };

    fn merge(self, other: Extremes) -> Extremes {
        let take_other = other.min < self.min || (other.min == self.min && other.min_mask < self.min_mask);
        let (min, min_mask) = if take_other {
            (other.min, other.min_mask)
        } else {
            (self.min, self.min_mask)
        };
        Extremes {
            min,
            min_mask,
            max: self.max.max(other.max),
            count: self.count + other.count,
        }
    }
}

pub fn certify_woven(
    f: &Frame,
    g: &Frame,
    policy: SubsetPolicy,
    tol: &Tolerance,
) -> Result<WovenReport> {
    certify_woven_limited(f, g, policy, tol, DEFAULT_ENUMERATION_LIMIT)
}

/// Exhaustive certification over every mask allowed by `policy`.
///
/// Work is split into fixed mask ranges and reduced with an associative,
/// commutative rule (min with smallest-mask tie break, max, sum), so the
/// report does not depend on the number of worker threads.
pub fn certify_woven_limited(
    f: &Frame,
    g: &Frame,
    policy: SubsetPolicy,
    tol: &Tolerance,
    limit: usize,
) -> Result<WovenReport> {
    ensure_same_shape(f, g)?;
    let m = f.len();
    let limit = limit.min(MAX_INDICES);
    if m > limit {
        return Err(Error::EnumerationLimitExceeded { m, limit });
    }
    let (start, end) = policy.mask_range(m);
    if start >= end {
        return Err(Error::EmptyEnumeration { m });
    }

    let pair = PairColumns::new(f, g);
    let n = pair.n;
    let total = end - start;
    let chunks = total.div_ceil(CHUNK as u64);

    let ext = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let lo = start + c * CHUNK as u64;
            let hi = (lo + CHUNK as u64).min(end);
            let mut buf = vec![0.0; n * n];
            (lo..hi).fold(Extremes::EMPTY, |acc, mask| {
                let (min, max) = pair.extremes(mask, &mut buf);
                acc.merge(Extremes {
                    min,
                    min_mask: mask,
                    max,
                    count: 1,
                })
            })
        })
        .reduce(|| Extremes::EMPTY, Extremes::merge);

    let threshold = tol.frame_rel() * ext.max.max(0.0);
    let woven = ext.min > threshold;
    let breaking_subset = if woven {
        None
    } else {
        (start..end)
            .into_par_iter()
            .find_first(|&mask| {
                let mut buf = vec![0.0; n * n];
                pair.extremes(mask, &mut buf).0 <= threshold
            })
            .map(|mask| IndexSubset { m, mask })
    };

    Ok(WovenReport {
        woven,
        universal_lower: ext.min,
        universal_upper: ext.max,
        threshold,
        worst_subset: IndexSubset {
            m,
            mask: ext.min_mask,
        },
        breaking_subset,
        subsets_examined: ext.count,
        subset_policy: policy,
    })
}

/// Woven frame sequences: every nontrivial weaving must span the whole space.
pub fn certify_woven_sequences(f: &Frame, g: &Frame, tol: &Tolerance) -> Result<WovenReport> {
    certify_woven(f, g, SubsetPolicy::NontrivialOnly, tol)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BesselBound {
    /// `sum_j B_j`, a Bessel bound for every weaving.
    pub sum: f64,
    /// `sqrt(sum_j B_j)`, bounding the norm of every weaving's synthesis operator.
    pub synthesis_norm: f64,
}

pub fn bessel_sum_bound(bounds: &[f64]) -> Result<BesselBound> {
    if bounds.is_empty() {
        return Err(Error::EmptyList);
    }
    if let Some(&value) = bounds.iter().find(|b| b.is_nan() || **b <= 0.0 || b.is_infinite()) {
        return Err(Error::NonPositiveBound { value });
    }
    let sum: f64 = bounds.iter().sum();
    Ok(BesselBound {
        sum,
        synthesis_norm: sum.sqrt(),
    })
}
