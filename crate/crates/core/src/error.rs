//! Error types shared by the model, fixed-point, dynamics and sweep layers.

use thiserror::Error;

use crate::dynamics::Trajectory;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, Error)]
pub enum CoreError {
    /// The photo-excited electron has no way to leave the dot
    /// (`Gamma_r + Gamma_t = 0`), so the spin-retention branching ratio
    /// is undefined.
    #[error("no escape channel")]
    NoEscapeChannel,

    /// A nuclear field outside the physical range `[-B_sat, +B_sat]`
    /// was passed to the rate equation.
    #[error("polarization out of range: |{b_n}| T exceeds B_sat = {b_sat} T")]
    PolarizationOutOfRange { b_n: f64, b_sat: f64 },

    /// A caller-supplied argument violates a documented precondition.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A fixed point whose slope is numerically indistinguishable from
    /// zero; the drive sits on a bifurcation and the stability label
    /// would be a guess.
    #[error("marginal fixed point at B_N = {b_n} T (slope {slope} /s)")]
    MarginalFixedPoint { b_n: f64, slope: f64 },

    /// The integrator state stopped being finite.
    #[error("integration diverged at t = {t} s; last finite B_N = {last_b_n} T")]
    IntegrationDiverged { t: f64, last_b_n: f64 },

    /// `relax` ran to its time budget without meeting the convergence
    /// criterion. The partial trajectory is attached for inspection.
    #[error("relaxation did not converge within {t_max} s")]
    RelaxationNotConverged {
        t_max: f64,
        trajectory: Box<Trajectory>,
    },

    /// A sweep aborted at a specific axis value.
    #[error("sweep failed at {axis} = {value}: {source}")]
    SweepFailed {
        axis: &'static str,
        value: f64,
        #[source]
        source: Box<CoreError>,
    },
}

impl CoreError {
    pub(crate) fn at_sweep_point(self, axis: &'static str, value: f64) -> CoreError {
        CoreError::SweepFailed {
            axis,
            value,
            source: Box::new(self),
        }
    }
}

/// Errors from parsing and validating a configuration file.
#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("line {line}: unknown key `{key}`")]
    UnknownKey { line: usize, key: String },

    #[error("line {line}: key `{key}` does not belong to section [{section}]")]
    KeyOutsideSection {
        line: usize,
        key: String,
        section: &'static str,
    },

    #[error("line {line}: unknown section [{section}]")]
    UnknownSection { line: usize, section: String },

    #[error("line {line}: duplicate key `{key}`")]
    DuplicateKey { line: usize, key: String },

    #[error("line {line}: invalid value for `{key}`: {value:?}")]
    InvalidValue {
        line: usize,
        key: String,
        value: String,
    },

    #[error("line {line}: expected `key = value`")]
    Malformed { line: usize },

    #[error("line {line}: violates invariant {invariant}")]
    InvariantViolation { line: usize, invariant: &'static str },

    #[error("cannot read config: {0}")]
    Io(#[from] std::io::Error),
}

impl ConfigError {
    /// Line number the error points at, when it has one.
    pub fn line(&self) -> Option<usize> {
        match self {
            ConfigError::UnknownKey { line, .. }
            | ConfigError::KeyOutsideSection { line, .. }
            | ConfigError::UnknownSection { line, .. }
            | ConfigError::DuplicateKey { line, .. }
            | ConfigError::InvalidValue { line, .. }
            | ConfigError::Malformed { line }
            | ConfigError::InvariantViolation { line, .. } => Some(*line),
            ConfigError::Io(_) => None,
        }
    }
}
