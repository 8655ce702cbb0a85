use thiserror::Error;

/// Errors raised by the simulation library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: max |A_mn - conj(A_nm)| = {deviation:e} exceeds {tolerance:e}")]
    NotHermitian { deviation: f64, tolerance: f64 },

    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}")]
    NotPsd { min_eigenvalue: f64 },

    #[error("density matrix trace is {trace}, expected 1")]
    BadTrace { trace: f64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("unsupported matrix dimension {0} (allowed 1..=8)")]
    UnsupportedDimension(usize),

    #[error("state vector is not normalized: norm^2 = {norm_sqr}")]
    NotNormalized { norm_sqr: f64 },

    #[error("concurrence {0} exceeds 1 beyond tolerance")]
    ConcurrenceOutOfRange(f64),

    #[error("unknown state name '{0}'")]
    UnknownState(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("time must be non-negative, got {0}")]
    NegativeTime(f64),
}

impl Error {
    /// True for failures of a numerical invariant (as opposed to bad input).
    pub fn is_numeric(&self) -> bool {
        matches!(
            self,
            Error::NotHermitian { .. }
                | Error::NotPsd { .. }
                | Error::BadTrace { .. }
                | Error::ConcurrenceOutOfRange(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
