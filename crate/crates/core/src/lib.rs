//! Finite frames in `R^n` and the machinery for deciding whether two of them
//! are woven.
//!
//! The crate is organised bottom-up:
//!
//! * [`linalg`] holds the dense kernels (Jacobi eigen/SVD, rank, pseudo-inverse,
//!   orthonormal bases, projections, intersections).
//! * [`frames`] defines [`Frame`] together with bounds, spark tests, canonical
//!   duals and the difference / linear-combination constructions.
//! * [`weaving`] enumerates weavings, certifies woven-ness exhaustively and
//!   evaluates the perturbation style sufficient conditions.
//! * [`geometry`] measures gaps and angle cosines between subspaces, including
//!   the spans of complementary weavings.

pub mod error;
pub mod frames;
pub mod geometry;
pub mod linalg;
pub mod weaving;

pub use error::{Error, Result};
pub use frames::{Closure, Frame, FrameBounds, LinearMapProfile, RelativeTo};
pub use geometry::GapAngleReport;
pub use linalg::{Matrix, Subspace, Tolerance};
pub use weaving::{
    ConditionReport, ExplorationReport, IndexSubset, Problem, SubsetPolicy, WovenReport,
};
