use thiserror::Error;

use crate::units::Units;

#[derive(Debug, Error)]
pub enum Error {
    #[error("unit system mismatch: {0:?} vs {1:?}")]
    UnitMismatch(Units, Units),

    #[error("boost speed {speed} is not below the speed of light")]
    Superluminal { speed: f64 },

    #[error("spacetime index {0} out of range 0..=3")]
    IndexOutOfRange(usize),

    #[error("momentum is off shell: p.p = {value}, expected {expected}")]
    OffShell { value: f64, expected: f64 },

    #[error("direction is not a unit vector (|n| = {0})")]
    NonUnitVector(f64),

    #[error("mass must be positive, got {0}")]
    NonPositiveMass(f64),

    #[error("spinor cannot be normalized: bar(A) H A = {0}")]
    NotNormalizable(f64),

    #[error("spinor violates the energy normalization: bar(A) H A = {value}, expected {expected}")]
    NotNormalized { value: f64, expected: f64 },

    #[error("tensor is not antisymmetric (max |T + T^T| = {0})")]
    NotAntisymmetric(f64),

    #[error("state became non-finite at tau = {tau}")]
    NonFinite { tau: f64 },

    #[error("invalid integration step {0}")]
    InvalidStep(f64),

    #[error("samples are not coplanar: out-of-plane rms {rms} vs radius {radius}")]
    NonCoplanar { rms: f64, radius: f64 },

    #[error("circle fit is degenerate: {0}")]
    DegenerateFit(String),

    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },

    #[error("dipole energy expressions disagree: {values:?}")]
    InconsistentDipoleEnergy { values: [f64; 4] },

    #[error("field evaluation failed at {x:?}: {reason}")]
    Field { x: [f64; 4], reason: String },

    #[error("invalid scenario field `{path}`: {reason}")]
    Scenario { path: String, reason: String },

    #[error("grid has {points} points, above the cap of {cap}")]
    GridTooLarge { points: usize, cap: usize },

    #[error("malformed input at line {line}: {reason}")]
    MalformedInput { line: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
