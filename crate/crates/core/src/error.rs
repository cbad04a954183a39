use std::fmt;

use serde::Serialize;

/// Coarse error classes surfaced by the CLI exit status and the C ABI.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum ErrorCategory {
    Input,
    Parameter,
    Degenerate,
    Numeric,
    Io,
}

impl ErrorCategory {
    /// Process exit status for this category (0 is reserved for success).
    pub fn exit_code(self) -> i32 {
        match self {
            ErrorCategory::Input => 1,
            ErrorCategory::Parameter => 2,
            ErrorCategory::Degenerate => 3,
            ErrorCategory::Numeric => 4,
            ErrorCategory::Io => 5,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorCategory::Input => "input",
            ErrorCategory::Parameter => "parameter",
            ErrorCategory::Degenerate => "degenerate",
            ErrorCategory::Numeric => "numeric",
            ErrorCategory::Io => "io",
        }
    }
}

impl fmt::Display for ErrorCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed or empty data.
    #[error("input error: {0}")]
    Input(String),

    /// A smoothing parameter, level or index outside its valid range.
    #[error("parameter error: {0}")]
    Parameter(String),

    /// Argument outside the mathematical domain of a function (non-finite
    /// reals, non-positive prices for a log transform).
    #[error("domain error: {0}")]
    Domain(String),

    /// The inverse-CDF search interval does not straddle the requested level.
    #[error("bracket [{lo}, {hi}] does not straddle u = {u} (F(lo) = {f_lo}, F(hi) = {f_hi})")]
    Bracket {
        lo: f64,
        hi: f64,
        u: f64,
        f_lo: f64,
        f_hi: f64,
    },

    /// The sum of conditioning weights is too close to zero to divide by.
    #[error("degenerate denominator: |sum of weights| = {sum:.3e} below threshold {threshold:.3e}")]
    DegenerateDenominator { sum: f64, threshold: f64 },

    /// Sequential generation kept hitting degenerate conditionals.
    #[error("generation failed at coordinate {coordinate} after {attempts} redraws")]
    Generation { coordinate: usize, attempts: usize },

    #[error("quadrature did not converge on [{lo}, {hi}]: estimate {estimate:.6e}, error {error:.3e} after {intervals} subintervals")]
    Quadrature {
        lo: f64,
        hi: f64,
        estimate: f64,
        error: f64,
        intervals: usize,
    },

    #[error("numeric error: {0}")]
    Numeric(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn category(&self) -> ErrorCategory {
        match self {
            Error::Input(_) | Error::Domain(_) => ErrorCategory::Input,
            Error::Parameter(_) | Error::Bracket { .. } => ErrorCategory::Parameter,
            Error::DegenerateDenominator { .. } | Error::Generation { .. } => {
                ErrorCategory::Degenerate
            }
            Error::Quadrature { .. } | Error::Numeric(_) => ErrorCategory::Numeric,
            Error::Io(_) => ErrorCategory::Io,
        }
    }

    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::Parameter(msg.into())
    }

    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn ensure_finite(name: &str, value: f64) -> Result<()> {
    if value.is_finite() {
        Ok(())
    } else {
        Err(Error::Domain(format!("{name} must be finite, got {value}")))
    }
}

pub(crate) fn ensure_positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::param(format!("{name} must be finite and > 0, got {value}")))
    }
}
