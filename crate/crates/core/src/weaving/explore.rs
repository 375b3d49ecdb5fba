//! Randomized search harness for two open questions: is a frame always woven
//! with its frame-operator image, and with its canonical dual?
//!
//! The harness only collects evidence. Frames are drawn with i.i.d. standard
//! normal entries from a ChaCha8 stream seeded by the caller; draws whose rank
//! is below `n` are rejected and redrawn.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

use super::{certify_woven, IndexSubset, SubsetPolicy};
use crate::error::{Error, Result};
use crate::frames::Frame;
use crate::linalg::{Matrix, Tolerance};

pub const MAX_EXPLORE_DIM: usize = 6;
pub const MAX_EXPLORE_COUNT: usize = 10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Problem {
    /// Pair each frame with `{S f_i}`.
    FrameOperatorImage,
    /// Pair each frame with its canonical dual `{S^{-1} f_i}`.
    CanonicalDual,
}

impl Problem {
    fn partner(self, f: &Frame, tol: &Tolerance) -> Result<Frame> {
        match self {
            Problem::FrameOperatorImage => Ok(f.apply_frame_operator()),
            Problem::CanonicalDual => f.canonical_dual(tol),
        }
    }
}

#[derive(Debug, Clone)]
pub struct ExploreConfig {
    pub problem: Problem,
    pub trials: usize,
    /// Ambient dimension `n` of the sampled frames.
    pub dim: usize,
    /// Number of vectors `m` per sampled frame.
    pub count: usize,
    pub seed: u64,
    /// Hand-picked frames examined after the random trials.
    pub extra: Vec<Frame>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Counterexample {
    /// 0-based trial number; extra frames continue after the random trials.
    pub trial: usize,
    pub frame: Vec<Vec<f64>>,
    pub partner: Vec<Vec<f64>>,
    pub breaking_subset: IndexSubset,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExplorationReport {
    pub problem: Problem,
    pub trials: usize,
    pub dim: usize,
    pub count: usize,
    pub seed: u64,
    pub extra_instances: usize,
    pub rejected_samples: u64,
    pub woven_count: usize,
    pub not_woven_count: usize,
    pub min_universal_lower: f64,
    pub first_counterexample: Option<Counterexample>,
}

fn sample_frame(rng: &mut ChaCha8Rng, n: usize, m: usize, tol: &Tolerance) -> (Frame, u64) {
    let mut rejected = 0;
    loop {
        let data: Vec<f64> = (0..n * m).map(|_| StandardNormal.sample(rng)).collect();
        let f = Frame::from_synthesis(Matrix::from_row_slice(n, m, &data))
            .expect("normal samples are finite");
        if f.is_frame(tol) {
            return (f, rejected);
        }
        rejected += 1;
    }
}

pub fn explore_problem(cfg: &ExploreConfig, tol: &Tolerance) -> Result<ExplorationReport> {
    let (n, m) = (cfg.dim, cfg.count);
    if cfg.trials == 0 {
        return Err(Error::BadDimensions("trials must be at least 1".into()));
    }
    if n == 0 || n > MAX_EXPLORE_DIM || m < n || m > MAX_EXPLORE_COUNT {
        return Err(Error::BadDimensions(format!(
            "need 1 <= n <= {MAX_EXPLORE_DIM} and n <= m <= {MAX_EXPLORE_COUNT}, got n={n}, m={m}"
        )));
    }
    if let Some(f) = cfg.extra.iter().find(|f| f.dim() > MAX_EXPLORE_DIM || f.len() > MAX_EXPLORE_COUNT) {
        return Err(Error::BadDimensions(format!(
            "extra frame of shape {}x{} is above desk scale",
            f.dim(),
            f.len()
        )));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut report = ExplorationReport {
        problem: cfg.problem,
        trials: cfg.trials,
        dim: n,
        count: m,
        seed: cfg.seed,
        extra_instances: cfg.extra.len(),
        rejected_samples: 0,
        woven_count: 0,
        not_woven_count: 0,
        min_universal_lower: f64::INFINITY,
        first_counterexample: None,
    };

    let examine = |trial: usize, f: &Frame, report: &mut ExplorationReport| -> Result<()> {
        let partner = cfg.problem.partner(f, tol)?;
        let r = certify_woven(f, &partner, SubsetPolicy::All, tol)?;
        report.min_universal_lower = report.min_universal_lower.min(r.universal_lower);
        if r.woven {
            report.woven_count += 1;
        } else {
            report.not_woven_count += 1;
            if report.first_counterexample.is_none() {
                report.first_counterexample = Some(Counterexample {
                    trial,
                    frame: f.vectors(),
                    partner: partner.vectors(),
                    breaking_subset: r.breaking_subset.unwrap_or(r.worst_subset),
                });
            }
        }
        Ok(())
    };

    for trial in 0..cfg.trials {
        let (f, rejected) = sample_frame(&mut rng, n, m, tol);
        report.rejected_samples += rejected;
        examine(trial, &f, &mut report)?;
    }
    for (k, f) in cfg.extra.iter().enumerate() {
        examine(cfg.trials + k, f, &mut report)?;
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(problem: Problem) -> ExploreConfig {
        ExploreConfig {
            problem,
            trials: 20,
            dim: 2,
            count: 3,
            seed: 7,
            extra: Vec::new(),
        }
    }

    #[test]
    fn seeded_runs_are_reproducible() {
        let t = Tolerance::default();
        let a = explore_problem(&config(Problem::FrameOperatorImage), &t).unwrap();
        let b = explore_problem(&config(Problem::FrameOperatorImage), &t).unwrap();
        assert_eq!(a, b);
        assert_eq!(a.woven_count + a.not_woven_count, 20);
    }

    #[test]
    fn orthonormal_basis_is_woven_with_its_image() {
        let t = Tolerance::default();
        let mut cfg = config(Problem::FrameOperatorImage);
        let base = explore_problem(&cfg, &t).unwrap();
        cfg.extra = vec![Frame::from_vectors(2, &[[1.0, 0.0], [0.0, 1.0]]).unwrap()];
        let with = explore_problem(&cfg, &t).unwrap();
        assert_eq!(with.woven_count, base.woven_count + 1);
    }

    #[test]
    fn tight_frame_is_woven_with_its_dual() {
        let t = Tolerance::default();
        let s = 3f64.sqrt() / 2.0;
        // three unit vectors at 120 degrees: S = (3/2) I
        let tight = Frame::from_vectors(2, &[[1.0, 0.0], [-0.5, s], [-0.5, -s]]).unwrap();
        let mut cfg = config(Problem::CanonicalDual);
        let base = explore_problem(&cfg, &t).unwrap();
        cfg.extra = vec![tight];
        let with = explore_problem(&cfg, &t).unwrap();
        assert_eq!(with.woven_count, base.woven_count + 1);
    }

    #[test]
    fn rejects_bad_dimensions() {
        let t = Tolerance::default();
        for (trials, dim, count) in [(0, 2, 3), (5, 7, 8), (5, 3, 2), (5, 2, 11), (5, 0, 1)] {
            let cfg = ExploreConfig {
                trials,
                dim,
                count,
                ..config(Problem::CanonicalDual)
            };
            assert!(matches!(explore_problem(&cfg, &t), Err(Error::BadDimensions(_))));
        }
    }
}
