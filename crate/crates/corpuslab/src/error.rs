use std::path::PathBuf;

use thiserror::Error;

/// Errors surfaced by file handling, the pipeline and the CLI.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{module}: {source}")]
    Core {
        module: &'static str,
        #[source]
        source: corpuslab_core::Error,
    },
    #[error("{}: {source}", path.display())]
    File {
        path: PathBuf,
        #[source]
        source: corpuslab_core::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("corpus {key:?}: {message}")]
    Registry { key: String, message: String },
    #[error("{0}")]
    Usage(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub fn file(path: impl Into<PathBuf>, source: corpuslab_core::Error) -> Self {
        Error::File {
            path: path.into(),
            source,
        }
    }

    /// 1 for usage errors, 2 for data errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 1,
            _ => 2,
        }
    }
}

/// Tags a core error with the module it came from.
pub trait InModule<T> {
    fn in_module(self, module: &'static str) -> Result<T>;
}

impl<T> InModule<T> for corpuslab_core::Result<T> {
    fn in_module(self, module: &'static str) -> Result<T> {
        self.map_err(|source| Error::Core { module, source })
    }
}
