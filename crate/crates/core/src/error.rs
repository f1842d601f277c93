use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid expansion center: {0}")]
    InvalidCenter(String),
    #[error("non-positive density {0:e}")]
    NonPositiveDensity(f64),
    #[error("non-positive temperature {0:e}")]
    NonPositiveTemperature(f64),
    #[error("state is not expressed at its local center: {0}")]
    LocalFrame(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("parameter estimation failed: {0}")]
    Estimation(String),
    #[error("time step {dt:e} violates the CFL bound (CFL number {cfl:.4})")]
    TimeStep { dt: f64, cfl: f64 },
    #[error("numerical instability at t = {time:e}: {detail}")]
    Stability { time: f64, detail: String },
    #[error("incompatible cache {path}: {reason}")]
    IncompatibleCache { path: PathBuf, reason: String },
    #[error("corrupt cache {path}: {reason}")]
    CorruptCache { path: PathBuf, reason: String },
    #[error("{key}: {reason}")]
    ConfigKey { key: String, reason: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
