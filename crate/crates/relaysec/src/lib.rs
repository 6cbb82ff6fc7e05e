//! File formats, reports and the `relaysec` command-line driver on top of
//! [`relaysec_core`].

pub mod cli;
pub mod formats;
pub mod report;

use relaysec_core::algebra::AlgebraError;
use relaysec_core::antilatin::AntiLatinError;
use relaysec_core::attack::AttackError;
use relaysec_core::codes::CodeError;
use relaysec_core::info::InfoError;
use relaysec_core::network::NetworkError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("{0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Info(#[from] InfoError),
    #[error(transparent)]
    Code(#[from] CodeError),
    #[error(transparent)]
    AntiLatin(#[from] AntiLatinError),
    #[error(transparent)]
    Attack(#[from] AttackError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

pub type Result<T> = std::result::Result<T, Error>;

/// Reads a whole file, keeping the path in the error.
pub fn read_file(path: &std::path::Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.display().to_string(),
        source,
    })
}
