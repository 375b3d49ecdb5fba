//! Sufficient conditions for woven-ness based on synthesis-operator norms.
//!
//! Each checker reports the two sides of its inequality and, when it holds,
//! the lower and upper frame bounds it guarantees for every weaving. None of
//! them issue a negative verdict: a failed inequality says nothing.

use serde::Serialize;

use super::{certify_woven, ensure_same_shape, SubsetPolicy};
use crate::error::{Error, Result};
use crate::frames::{Frame, RelativeTo};
use crate::linalg::{self, Tolerance};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub enum PreconditionNote {
    /// `(sum ||v_i||^2)^(1/2)` of the named family is not below one.
    EnergyNotBelowOne { family: &'static str, lambda: f64 },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ConditionReport {
    pub condition_holds: bool,
    pub lhs: f64,
    pub rhs: f64,
    pub guaranteed_lower: Option<f64>,
    pub guaranteed_upper: Option<f64>,
    pub notes: Vec<PreconditionNote>,
}

impl ConditionReport {
    fn new(lhs: f64, rhs: f64, denominator: f64) -> Self {
        let condition_holds = lhs < rhs;
        let (guaranteed_lower, guaranteed_upper) = if condition_holds {
            (Some((rhs - lhs).powi(2) / denominator), Some(denominator))
        } else {
            (None, None)
        };
        Self {
            condition_holds,
            lhs,
            rhs,
            guaranteed_lower,
            guaranteed_upper,
            notes: Vec::new(),
        }
    }
}

fn norm(f: &Frame) -> Result<f64> {
    linalg::operator_norm(f.synthesis())
}

fn difference_norm(a: &Frame, b: &Frame) -> Result<f64> {
    linalg::operator_norm(&(a.synthesis() - b.synthesis()))
}

/// Perturbing the second frame of a woven pair.
///
/// `F, G` are first certified woven (universal bounds `A, B`); then with
/// `lhs = (||T_G|| + ||T_H||) ||T_G - T_H||` the pair `F, H` is woven whenever
/// `lhs < A`, with lower bound `(A - lhs)^2 / (B + B_H)` and upper bound
/// `B + B_H`, where `B_H` is the optimal upper bound of `H`.
pub fn check_perturbation(
    f: &Frame,
    g: &Frame,
    h: &Frame,
    tol: &Tolerance,
) -> Result<ConditionReport> {
    ensure_same_shape(f, g)?;
    ensure_same_shape(g, h)?;
    let premise = certify_woven(f, g, SubsetPolicy::All, tol)?;
    if !premise.woven {
        return Err(Error::NotWovenPremise);
    }
    let lhs = (norm(g)? + norm(h)?) * difference_norm(g, h)?;
    Ok(ConditionReport::new(
        lhs,
        premise.universal_lower,
        premise.universal_upper + h.upper_bound(),
    ))
}

/// A frame `F` and a nearby family `G` are woven when
/// `||T_F - T_G|| (||T_F|| + ||T_G||) < A_F`.
///
/// This is the perturbation bound applied to the pair `(F, F)`, whose
/// universal bounds are `F`'s own, so the guaranteed lower bound is
/// `(A_F - lhs)^2 / (B_F + B_G)`.
pub fn check_corollary(f: &Frame, g: &Frame, tol: &Tolerance) -> Result<ConditionReport> {
    ensure_same_shape(f, g)?;
    let bounds = f.optimal_bounds(RelativeTo::Ambient, tol)?;
    let lhs = difference_norm(f, g)? * (norm(f)? + norm(g)?);
    Ok(ConditionReport::new(
        lhs,
        bounds.lower,
        bounds.upper + g.upper_bound(),
    ))
}

/// The energy condition `lambda_F sqrt(B_F) + lambda_G sqrt(B_G) < A_F` with
/// `lambda = (sum ||v_i||^2)^(1/2)`.
///
/// Since `B_F <= lambda_F^2` and `A_F <= B_F`, the left side is never below
/// `A_F` for a nonzero `G`; the checker still evaluates it faithfully.
pub fn check_norm_sum(f: &Frame, g: &Frame, tol: &Tolerance) -> Result<ConditionReport> {
    ensure_same_shape(f, g)?;
    if f.is_zero() || g.is_zero() {
        return Err(Error::ZeroFamily);
    }
    let fb = f.optimal_bounds(RelativeTo::Ambient, tol)?;
    let gb = g.optimal_bounds(RelativeTo::SpanOfFamily, tol)?;
    let lambda_f = f.total_energy().sqrt();
    let lambda_g = g.total_energy().sqrt();
    let lhs = lambda_f * fb.upper.sqrt() + lambda_g * gb.upper.sqrt();
    let mut report = ConditionReport::new(lhs, fb.lower, fb.upper + gb.upper);
    for (family, lambda) in [("F", lambda_f), ("G", lambda_g)] {
        if lambda >= 1.0 {
            report
                .notes
                .push(PreconditionNote::EnergyNotBelowOne { family, lambda });
        }
    }
    Ok(report)
}
