use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// A binary stream (IDX file) did not match its declared layout.
    #[error("{path}: parse error at byte offset {offset}: {message}")]
    Parse {
        path: String,
        offset: usize,
        message: String,
    },

    /// A structured-text document is malformed; `field` names the offending key.
    #[error("{document}: invalid field `{field}`: {message}")]
    Format {
        document: &'static str,
        field: String,
        message: String,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
