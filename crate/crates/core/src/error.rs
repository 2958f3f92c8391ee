use thiserror::Error;

use crate::partitions::Partition;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("index {index} is not admissible for {op} on partition {partition} (m = {m})")]
    IndexNotAdmissible {
        op: &'static str,
        partition: Partition,
        index: usize,
        m: usize,
    },

    #[error("partition {partition} has more than {m} parts")]
    TooManyParts { partition: Partition, m: usize },

    #[error("variable count mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("degree {degree} exceeds table degree {max}")]
    DegreeOverflow { degree: usize, max: usize },

    #[error("eigenvalue collision for kappa = {kappa} against {other} (m = {m}, n = {n})")]
    EigenvalueCollision {
        m: usize,
        n: usize,
        kappa: Partition,
        other: Partition,
    },

    #[error("degenerate parameters (m = {m}, n = {n}, kappa = {kappa}): {reason}")]
    DegenerateParameters {
        m: usize,
        n: usize,
        kappa: Partition,
        reason: String,
    },

    #[error("cannot parse {0}")]
    Parse(String),

    #[error("invalid parameters: {0}")]
    InvalidParameters(String),

    #[error("{method} bound is not applicable: {reason}")]
    NotApplicable { method: String, reason: String },

    #[error("invalid certificate: {0}")]
    CertificateInvalid(String),

    #[error("value outside domain: {0}")]
    Domain(String),

    #[error("eigensolver did not converge after {iterations} iterations (residual {residual:e})")]
    Convergence { iterations: usize, residual: f64 },

    #[error("malformed code file: {0}")]
    MalformedCode(String),

    #[error("frame {index} is not orthonormal (Gram deviation {deviation:e})")]
    NonOrthonormal { index: usize, deviation: f64 },

    #[error("internal consistency failure: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Errors that describe a mathematical domain or applicability condition
    /// rather than a bug or an I/O failure.
    pub fn is_domain(&self) -> bool {
        matches!(
            self,
            Error::NotApplicable { .. }
                | Error::Domain(_)
                | Error::CertificateInvalid(_)
                | Error::DegenerateParameters { .. }
                | Error::InvalidParameters(_)
                | Error::IndexNotAdmissible { .. }
                | Error::TooManyParts { .. }
                | Error::DegreeOverflow { .. }
                | Error::EigenvalueCollision { .. }
        )
    }
}
