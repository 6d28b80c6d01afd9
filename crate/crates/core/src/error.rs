use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("level {level} is outside the horizon 1..={horizon}")]
    LevelOutOfHorizon { level: usize, horizon: usize },

    #[error("invalid system at level {level}: {reason}")]
    InvalidLevel { level: usize, reason: String },

    #[error("invalid rule: {0}")]
    InvalidRule(String),

    #[error("invalid window {start}..={end}: {reason}")]
    InvalidWindow {
        start: usize,
        end: usize,
        reason: String,
    },

    #[error("enumeration needs {needed} points, cap is {cap}")]
    EnumerationCap { needed: String, cap: u64 },

    #[error("digit {digit} is not in B_{level}")]
    DigitNotInSet { level: usize, digit: u64 },

    #[error("digit set at level {level} is not of the form {{0,..,K-1}}")]
    NotConsecutive { level: usize },

    #[error("0 is not a digit at level {level}")]
    ZeroNotInDigits { level: usize },

    #[error("tolerance {tol:e} not reached within the horizon; best bound {achieved:e} after {levels_used} levels")]
    ToleranceUnreachable {
        tol: f64,
        achieved: f64,
        levels_used: usize,
    },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("spec file line {line}: {message}")]
    SpecFile { line: usize, message: String },

    #[error("precondition not met: {0}")]
    Precondition(String),
}

impl Error {
    /// Stable machine-readable tag for the error kind.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::LevelOutOfHorizon { .. } => "level-out-of-horizon",
            Error::InvalidLevel { .. } => "invalid-system",
            Error::InvalidRule(_) => "invalid-rule",
            Error::InvalidWindow { .. } => "invalid-window",
            Error::EnumerationCap { .. } => "enumeration-cap",
            Error::DigitNotInSet { .. } => "digit-not-in-set",
            Error::NotConsecutive { .. } => "not-consecutive",
            Error::ZeroNotInDigits { .. } => "zero-not-in-digits",
            Error::ToleranceUnreachable { .. } => "tolerance-unreachable",
            Error::InvalidParameter(_) => "invalid-parameter",
            Error::SpecFile { .. } => "spec-file",
            Error::Precondition(_) => "precondition",
        }
    }

    /// Process exit code: 3 for resource limits (horizon, caps), 2 for invalid input.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::LevelOutOfHorizon { .. }
            | Error::EnumerationCap { .. }
            | Error::ToleranceUnreachable { .. } => 3,
            _ => 2,
        }
    }
}
