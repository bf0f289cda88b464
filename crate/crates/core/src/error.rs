use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("skeleton has {} connected components (sizes {sizes:?})", sizes.len())]
    MultipleComponents { sizes: Vec<usize> },

    #[error("invalid root: {0}")]
    InvalidRoot(String),

    #[error("skeleton has no edges")]
    EmptySkeleton,

    #[error("insufficient data: {0}")]
    InsufficientData(String),

    #[error("invalid insertion: {0}")]
    InvalidInsertion(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("invalid template: {0}")]
    InvalidTemplate(String),

    #[error("invalid outline: {0}")]
    InvalidOutline(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("{what}: {msg}")]
    Parse { what: String, msg: String },

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{stage}: {source}")]
    Stage {
        stage: &'static str,
        #[source]
        source: Box<Error>,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn parse(what: impl Into<String>, msg: impl std::fmt::Display) -> Self {
        Error::Parse {
            what: what.into(),
            msg: msg.to_string(),
        }
    }

    /// Process exit code: 1 for I/O failures, 2 for everything that is a
    /// validation problem with the inputs.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Io { .. } => 1,
            Error::Stage { source, .. } => source.exit_code(),
            _ => 2,
        }
    }

    pub(crate) fn in_stage(self, stage: &'static str) -> Self {
        Error::Stage {
            stage,
            source: Box::new(self),
        }
    }
}
