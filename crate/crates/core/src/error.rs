use thiserror::Error;

pub type Result<T> = std::result::Result<T, CasimirError>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CasimirError {
    /// An argument lies outside the domain where the quantity is defined.
    #[error("domain error in {operation}: {reason}")]
    Domain {
        operation: &'static str,
        reason: String,
    },

    /// A model parameter is missing, non-finite, or violates its bounds.
    #[error("invalid model parameter `{field}`: {reason}")]
    InvalidModel { field: String, reason: String },

    /// An adaptive integration exhausted its budget without meeting tolerance.
    #[error(
        "integration failed to converge: achieved error {achieved:e}, requested {requested:e}"
    )]
    IntegrationFailure { achieved: f64, requested: f64 },

    /// Point evaluation of a distributional (delta-function) quantity.
    #[error("{0} is a distribution at this frequency and has no pointwise value")]
    UnsupportedDistribution(&'static str),

    /// The magnetic response makes the permeability non-positive.
    #[error("medium instability: magnetic susceptibility {chi_m} >= 1 at xi = {xi}")]
    MediumInstability { xi: f64, chi_m: f64 },

    /// Evaluation on a propagator pole with no regulator.
    #[error("pole in {kind} at k = {k}, frequency = {freq} (regulator eta = {eta})")]
    Pole {
        kind: &'static str,
        k: f64,
        freq: f64,
        eta: f64,
    },

    #[error("degenerate mode: mode energy vanishes at p0 = {p0}, q = {q}")]
    DegenerateMode { p0: f64, q: f64 },

    /// The polarization-boundary denominator changed sign inside the domain.
    #[error("invalid regime: alpha * exp(2EH) - 1 = {denominator:e} <= 0 at p0 = {p0}, q = {q}")]
    InvalidRegime { p0: f64, q: f64, denominator: f64 },

    #[error("series diverges: {0}")]
    Divergence(&'static str),

    /// Malformed medium definition; `line`/`column` locate the problem when
    /// it is syntactic, `field` names the offending entry otherwise.
    #[error("medium file {field} (line {line}, column {column}): {message}")]
    MediumFile {
        field: String,
        line: usize,
        column: usize,
        message: String,
    },
}

impl CasimirError {
    pub(crate) fn domain(operation: &'static str, reason: impl Into<String>) -> Self {
        CasimirError::Domain {
            operation,
            reason: reason.into(),
        }
    }

    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        CasimirError::InvalidModel {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
