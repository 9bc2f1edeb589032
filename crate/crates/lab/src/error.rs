use std::path::PathBuf;

use adscale_core::PolicyKind;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum LabError {
    #[error(transparent)]
    Core(#[from] adscale_core::Error),
    #[error("episode failed for policy `{policy}`, run {run}: {source}")]
    Episode {
        policy: PolicyKind,
        run: usize,
        #[source]
        source: adscale_core::Error,
    },
    #[error("{path}:{line}: {message}")]
    Config { path: String, line: usize, message: String },
    #[error("unknown preset `{0}` (expected fig1, fig2, fig3 or fig4)")]
    UnknownPreset(String),
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("thread pool: {0}")]
    ThreadPool(#[from] rayon::ThreadPoolBuildError),
}

pub type Result<T, E = LabError> = std::result::Result<T, E>;
