use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// A parameter or configuration value is outside its admissible range.
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// The momentum grid is too coarse for the requested time window.
    #[error(
        "momentum grid too coarse for t_max = {t_max_ps} ps: n_k = {n_k} gives a phase step of \
         {phase_step:.4} rad per node (limit pi/4); use n_k >= {required_n_k}"
    )]
    Resolution {
        t_max_ps: f64,
        n_k: usize,
        phase_step: f64,
        required_n_k: usize,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("single-qubit amplitudes not normalized: |alpha|^2 + |beta|^2 = {0}")]
    NotNormalized(f64),

    #[error("X-state not positive: {0}")]
    XStatePositivity(String),

    /// Density matrix fails one or more state invariants.
    #[error("invalid two-qubit state: {}", .0.join("; "))]
    InvalidState(Vec<String>),

    #[error("time grid mismatch: {0}")]
    TimeGridMismatch(String),

    #[error("geometric discord sandwich violated: {0}")]
    Sandwich(String),

    #[error("config error: {0}")]
    Config(String),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
