//! Exact finite/infinite shift decision on the Herglotz data (β, μ).
//!
//! `f` has finite shift iff either
//!
//! * (i)  `∫_{(-∞,0)} |t| dμ < ∞`, `∫_{(0,∞)} t² dμ < ∞` and `β > ∫ t dμ`, or
//! * (ii) `∫_{(-∞,0)} t² dμ < ∞`, `∫_{(0,∞)} |t| dμ < ∞` and `β < ∫ t dμ`.
//!
//! Moments come from the closed forms in [`crate::measure`], never from
//! quadrature, so the decision is exact on every representable measure.

use std::fmt;

use crate::error::Result;
use crate::halfplane::{HalfPlanePoint, ParabolicMap};
use crate::measure::{ExtendedReal, MomentKind};
use crate::orbit::{shift_oracle, OracleOptions, OracleReport, OracleVerdict};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MomentReport {
    pub abs_neg: ExtendedReal,
    pub abs_pos: ExtendedReal,
    pub sq_neg: ExtendedReal,
    pub sq_pos: ExtendedReal,
    pub first: Option<f64>,
    pub drift: Option<f64>,
}

impl MomentReport {
    pub fn of(map: &ParabolicMap) -> Self {
        let mu = map.mu();
        // the four one-sided moments never fail
        let m = |k| mu.moment(k).unwrap_or(ExtendedReal::Infinite);
        let first = mu.first_moment().ok();
        Self {
            abs_neg: m(MomentKind::AbsNeg),
            abs_pos: m(MomentKind::AbsPos),
            sq_neg: m(MomentKind::SqNeg),
            sq_pos: m(MomentKind::SqPos),
            first,
            drift: first.map(|f| map.beta() - f),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShiftKind {
    FiniteShiftCaseI,
    FiniteShiftCaseII,
    InfiniteShift,
}

impl ShiftKind {
    pub fn is_finite(self) -> bool {
        !matches!(self, ShiftKind::InfiniteShift)
    }
}

impl fmt::Display for ShiftKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            ShiftKind::FiniteShiftCaseI => "FiniteShiftCaseI",
            ShiftKind::FiniteShiftCaseII => "FiniteShiftCaseII",
            ShiftKind::InfiniteShift => "InfiniteShift",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShiftVerdict {
    pub kind: ShiftKind,
    pub report: MomentReport,
}

/// Condition (i): drift positive, left side integrable against `|t|`, right side against `t²`.
pub fn condition_one(report: &MomentReport) -> bool {
    report.abs_neg.is_finite() && report.sq_pos.is_finite() && report.drift.is_some_and(|d| d > 0.0)
}

/// Condition (ii): mirror image of (i).
pub fn condition_two(report: &MomentReport) -> bool {
    report.sq_neg.is_finite() && report.abs_pos.is_finite() && report.drift.is_some_and(|d| d < 0.0)
}

/// A divergent absolute moment forces infinite shift; an exact tie
/// `β = ∫ t dμ` satisfies neither strict inequality and is infinite shift too.
pub fn classify_shift(map: &ParabolicMap) -> ShiftVerdict {
    let report = MomentReport::of(map);
    let kind = if condition_one(&report) {
        ShiftKind::FiniteShiftCaseI
    } else if condition_two(&report) {
        ShiftKind::FiniteShiftCaseII
    } else {
        ShiftKind::InfiniteShift
    };
    ShiftVerdict { kind, report }
}

#[derive(Debug, Clone, PartialEq)]
pub enum CrossValidation {
    Agree {
        verdict: ShiftVerdict,
        oracle: OracleReport,
    },
    Disagree {
        verdict: ShiftVerdict,
        oracle: OracleReport,
    },
    OracleInconclusive {
        verdict: ShiftVerdict,
        oracle: OracleReport,
    },
}

impl CrossValidation {
    pub fn name(&self) -> &'static str {
        match self {
            CrossValidation::Agree { .. } => "Agree",
            CrossValidation::Disagree { .. } => "Disagree",
            CrossValidation::OracleInconclusive { .. } => "OracleInconclusive",
        }
    }

    pub fn verdict(&self) -> &ShiftVerdict {
        match self {
            CrossValidation::Agree { verdict, .. }
            | CrossValidation::Disagree { verdict, .. }
            | CrossValidation::OracleInconclusive { verdict, .. } => verdict,
        }
    }

    pub fn oracle(&self) -> &OracleReport {
        match self {
            CrossValidation::Agree { oracle, .. }
            | CrossValidation::Disagree { oracle, .. }
            | CrossValidation::OracleInconclusive { oracle, .. } => oracle,
        }
    }
}

/// Compares [`classify_shift`] with the orbit simulation of [`shift_oracle`].
pub fn cross_validate(map: &ParabolicMap, z0: HalfPlanePoint, options: &OracleOptions) -> Result<CrossValidation> {
    let verdict = classify_shift(map);
    let oracle = shift_oracle(map, z0, options)?;
    Ok(match (verdict.kind.is_finite(), oracle.verdict) {
        (_, OracleVerdict::Inconclusive) => CrossValidation::OracleInconclusive { verdict, oracle },
        (true, OracleVerdict::BoundedShift { .. }) | (false, OracleVerdict::UnboundedShift) => {
            CrossValidation::Agree { verdict, oracle }
        }
        _ => CrossValidation::Disagree { verdict, oracle },
    })
}
