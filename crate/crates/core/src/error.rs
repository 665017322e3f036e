use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error("matrix is not hermitian: max |M - M†| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("contract violation: {0}")]
    ContractViolation(String),

    #[error("integrand tail {tail:e} at the cutoff exceeds {tolerance:e}; increase r_max or the grid span")]
    TailNotNegligible { tail: f64, tolerance: f64 },

    #[error("kernel normalisation residual {residual:e} exceeds {tolerance:e}; quadrature conventions disagree")]
    ConventionMismatch { residual: f64, tolerance: f64 },

    #[error("phase distribution has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("internal consistency failure: {0}")]
    InternalConsistency(String),

    #[error("dimension {requested} exceeds the limit {limit}")]
    DimensionTooLarge { requested: usize, limit: usize },
}

pub(crate) fn contract(msg: impl Into<String>) -> Error {
    Error::ContractViolation(msg.into())
}
