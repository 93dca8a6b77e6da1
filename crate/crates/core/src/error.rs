use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the reduction pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch in {matrix}: {detail}")]
    DimensionMismatch { matrix: String, detail: String },

    #[error("invalid model: {0}")]
    InvalidModel(String),

    #[error("invalid frequency range: {0}")]
    InvalidBand(String),

    #[error("shifted matrix is numerically singular at {at} (condition estimate {condition:.3e})")]
    SingularShift { at: String, condition: f64 },

    #[error("matrix is not stable: {0}")]
    NotStable(String),

    #[error("{what} did not converge (residual {residual:.3e}, target {target:.3e})")]
    NoConvergence { what: String, residual: f64, target: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:.3e})")]
    NotPsd { min_eigenvalue: f64 },

    #[error("spectrum has an eigenvalue on the imaginary axis ({0}); threshold undefined")]
    DegenerateSpectrum(String),

    #[error("rho = {rho} is not admissible: {detail}")]
    NotAdmissible { rho: f64, detail: String },

    #[error("inverse mapping is singular: {0}")]
    SingularInversion(String),

    #[error("inverse mapping failed verification: {0}")]
    RoundTripFailure(String),

    #[error("reduced order {order} is invalid for a {states}-state model")]
    BadOrder { order: usize, states: usize },

    #[error("residualized block is singular (condition estimate {condition:.3e})")]
    SingularResidualization { condition: f64 },

    #[error("no admissible point in the rho grid ({0})")]
    NoAdmissiblePoint(String),

    #[error("tolerance {tol:e} not achievable; best bound {best_bound:e} at order {order}")]
    NotAchievable { tol: f64, best_bound: f64, order: usize },

    #[error("parse error in {path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("usage: {0}")]
    Usage(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
