use std::path::PathBuf;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{origin}: {message}")]
    Format { origin: String, message: String },
    #[error("{0}")]
    Input(String),
    #[error("unknown gazetteer entry {name:?}; available: {}", available.join(", "))]
    UnknownPlace { name: String, available: Vec<String> },
    #[error(transparent)]
    Core(#[from] maplink_core::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn format(origin: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Format {
            origin: origin.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
