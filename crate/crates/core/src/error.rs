//! Crate-wide error type.

use thiserror::Error;

/// Errors reported by the dynamics, spectrum, and environment routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// Input violates a documented precondition.
    #[error("domain error: {0}")]
    Domain(String),

    /// Spectrum maximum sits on a boundary bin; no interior peak to measure.
    #[error("no interior spectral peak (maximum on a boundary bin)")]
    NoPeak,

    /// The measurement curve never falls below the width threshold in range.
    #[error("no threshold crossing found on {side} side of the peak")]
    NoCrossing {
        /// Which side of the peak lacked a crossing.
        side: &'static str,
    },

    /// Frequency bins are too coarse to resolve the requested comb spacing.
    #[error("spectral resolution too coarse: bin spacing {bin_spacing:e} exceeds {required:e}")]
    ResolutionTooCoarse {
        /// Actual bin spacing of the spectrum.
        bin_spacing: f64,
        /// Largest admissible bin spacing (expected_spacing / 4).
        required: f64,
    },

    /// Adaptive quadrature could not reach the requested tolerance.
    #[error("quadrature failed to converge: estimate {estimate:e}, error {error_estimate:e}")]
    QuadratureFail {
        /// Best value found before giving up.
        estimate: f64,
        /// Estimated absolute error of that value.
        error_estimate: f64,
    },

    /// The number-basis sum would need more terms than the configured cap.
    #[error("oracle truncation infeasible: needs more than {cap} terms")]
    OracleInfeasible {
        /// Configured hard cap on the number of summed terms.
        cap: usize,
    },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
