//! Monte Carlo estimation of success probabilities and their limits.

mod bound;
mod classify;
mod curve;
mod trajectory;
mod wilson;

use thiserror::Error;

use crate::machines::MachineError;

pub use bound::{BoundSpec, BoundTemplate};
pub use classify::{classify_limit, Classification, FitDiagnostics, LimitPoint, Thresholds, Verdict};
pub use curve::{
    correctness_audit, estimate_property_curve, estimate_success_curve, halts_within, validate_grid, Audit, AuditPoint, Curve,
    EstimatePoint, Mode, Sweep,
};
pub use trajectory::{trajectory_halt_fraction, TrajectoryEstimate};
pub use wilson::{wilson_interval, Proportion, Z_95, Z_99};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EstimateError {
    #[error("estimate undefined: zero trials")]
    UndefinedEstimate,
    #[error("classification needs at least 4 points, got {0}")]
    TooFewPoints(usize),
    #[error("at-valid-times mode requires a deterministic schedule")]
    NoDeterministicSchedule,
    #[error("{0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Machine(#[from] MachineError),
}
