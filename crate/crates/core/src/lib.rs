//! Parabolic self-maps of the upper half-plane given by their Herglotz data
//! `(β, μ)`: evaluation, iteration, finite-shift classification from the
//! moments of μ, and the rate at which the conjugated disk map approaches its
//! Denjoy–Wolff point.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod classifier;
pub mod disk;
pub mod error;
pub mod extrapolate;
pub mod halfplane;
pub mod measure;
pub mod orbit;
pub mod quadrature;
pub mod suite;

pub use classifier::{classify_shift, cross_validate, CrossValidation, MomentReport, ShiftKind, ShiftVerdict};
pub use disk::{DiskSetting, RateRow};
pub use error::{Error, Result};
pub use extrapolate::{aitken_limit, aitken_limit_with, LimitEstimate};
pub use halfplane::{HalfPlanePoint, ParabolicMap};
pub use measure::{Atom, ExtendedReal, HistogramPiece, MomentKind, PowerTail, RealMeasure, TailSide};
pub use num_complex::Complex64;
pub use orbit::{
    drift_limit, iterate, oracle_verdict, pommerenke_quantities, pseudo_hyperbolic_distance, shift_oracle, DriftLimit,
    OracleOptions, OracleReport, OracleVerdict, Orbit, OrbitDiagnostics, OrbitRow,
};
pub use quadrature::{Integrator, QuadratureOptions};
pub use suite::{run_suite, AtomMapSampler, SuiteRow, SuiteTally};
