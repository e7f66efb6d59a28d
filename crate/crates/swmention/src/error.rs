use std::io;
use std::path::{Path, PathBuf};

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },

    #[error("missing input `{artifact}`: {path} does not exist")]
    MissingInput { artifact: &'static str, path: PathBuf },

    #[error("{path}: header does not match the expected columns ({expected})")]
    Header { path: PathBuf, expected: String },

    #[error("{path}:{line}: {message}")]
    Row { path: PathBuf, line: usize, message: String },

    #[error("{path}: {message}")]
    Format { path: PathBuf, message: String },

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{source_name}: {message}")]
    Service { source_name: String, message: String },

    #[error(transparent)]
    Core(#[from] swmention_core::Error),
}

impl Error {
    pub fn io(path: impl AsRef<Path>, source: io::Error) -> Self {
        Error::Io { path: path.as_ref().to_path_buf(), source }
    }

    pub fn format(path: impl AsRef<Path>, message: impl Into<String>) -> Self {
        Error::Format { path: path.as_ref().to_path_buf(), message: message.into() }
    }

    /// Process exit status: 1 validation, 2 data, 3 external service.
    pub fn exit_code(&self) -> u8 {
        match self {
            Error::Config(_) | Error::Core(swmention_core::Error::InvalidParameter { .. }) => 1,
            Error::Service { .. } => 3,
            _ => 2,
        }
    }
}

pub(crate) trait IoContext<T> {
    fn at(self, path: &Path) -> Result<T>;
}

impl<T> IoContext<T> for io::Result<T> {
    fn at(self, path: &Path) -> Result<T> {
        self.map_err(|e| Error::io(path, e))
    }
}
