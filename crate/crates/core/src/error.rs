//! Error type shared by all core operations.

use core::fmt;

/// Errors raised by the algebra, statevector and model layers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CoreError {
    /// Two operands live on chains of different length.
    DimensionMismatch { left: usize, right: usize },
    /// A site index fell outside `1..=n_sites`.
    SiteOutOfRange { site: usize, n_sites: usize },
    /// A gate received repeated sites or the wrong number of them.
    BadGateSites(&'static str),
    /// A dense object would exceed the configured size cap.
    CapacityExceeded { needed: usize, limit: usize },
    /// A chain specification failed validation.
    InvalidSpec(&'static str),
    /// The requested operation is not defined for this model or boundary.
    Unsupported(&'static str),
}

impl fmt::Display for CoreError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CoreError::DimensionMismatch { left, right } => {
                write!(f, "chain length mismatch: {left} vs {right} sites")
            }
            CoreError::SiteOutOfRange { site, n_sites } => {
                write!(f, "site {site} out of range 1..={n_sites}")
            }
            CoreError::BadGateSites(msg) => write!(f, "bad gate sites: {msg}"),
            CoreError::CapacityExceeded { needed, limit } => {
                write!(f, "capacity exceeded: needed {needed}, limit {limit}")
            }
            CoreError::InvalidSpec(msg) => write!(f, "invalid chain spec: {msg}"),
            CoreError::Unsupported(msg) => write!(f, "unsupported: {msg}"),
        }
    }
}

impl core::error::Error for CoreError {}

pub type Result<T> = core::result::Result<T, CoreError>;
