//! Error type for the std-side workbench.

use clusterlab_core::CoreError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] CoreError),
    #[error("operator is not Hermitian (max |Im coeff| above 1e-12)")]
    NonHermitian,
    #[error("eigensolver failed: {0}")]
    Eigensolver(String),
    #[error("iterative solver did not converge: best residual {best_residual:.3e} after {krylov_dim} Krylov vectors")]
    Convergence { best_residual: f64, krylov_dim: usize },
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("the operator pair is not proportional; no projective phase")]
    NotProportional,
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, LabError>;
