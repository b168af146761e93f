//! Resource budgets and the engine-wide error type.
//!
//! Long-running computations (Buchberger loops, resolution steps) poll a
//! [`Limits`] value. Exceeding a budget aborts with a dedicated error so
//! callers can distinguish "ran out of budget" from a mathematical verdict.

use std::time::{Duration, Instant};

#[derive(Clone, Debug, Default)]
pub struct Limits {
    pub deadline: Option<Instant>,
    /// Cap on the number of basis elements in a single Groebner run.
    pub max_basis: Option<usize>,
}

impl Limits {
    pub fn none() -> Self {
        Limits::default()
    }

    pub fn with_seconds(secs: u64) -> Self {
        Limits {
            deadline: Some(Instant::now() + Duration::from_secs(secs)),
            max_basis: None,
        }
    }

    pub fn with_max_basis(mut self, n: usize) -> Self {
        self.max_basis = Some(n);
        self
    }

    pub fn check_time(&self) -> Result<()> {
        if let Some(d) = self.deadline {
            if Instant::now() > d {
                return Err(EngineError::TimeLimit);
            }
        }
        Ok(())
    }

    pub fn check_basis(&self, len: usize) -> Result<()> {
        if let Some(m) = self.max_basis {
            if len > m {
                return Err(EngineError::BasisLimit(len));
            }
        }
        Ok(())
    }
}

#[derive(thiserror::Error, Debug, Clone, PartialEq, Eq)]
pub enum EngineError {
    #[error("ring mismatch: {0}")]
    RingMismatch(String),
    #[error("wall-clock limit exceeded")]
    TimeLimit,
    #[error("basis size limit exceeded ({0} elements)")]
    BasisLimit(usize),
    #[error("combinatorial expansion limit exceeded: {0}")]
    ExpansionLimit(String),
    #[error("exponent overflow while multiplying monomials")]
    ExponentOverflow,
    #[error("input is not homogeneous: {0}")]
    Inhomogeneous(String),
    #[error("resolution truncated below requested cohomological degree {0}")]
    Truncated(usize),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, EngineError>;

impl EngineError {
    /// Resource-limit errors map to a distinct process exit code.
    pub fn is_resource_limit(&self) -> bool {
        matches!(
            self,
            EngineError::TimeLimit | EngineError::BasisLimit(_) | EngineError::ExpansionLimit(_)
        )
    }
}
