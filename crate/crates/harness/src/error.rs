use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("adapter `{adapter}` {verb} failed: {detail}")]
    Protocol {
        adapter: String,
        verb: &'static str,
        detail: String,
    },

    #[error("{0}")]
    Config(String),

    #[error("train and test files share {count} ids, first `{first}`")]
    Leak { count: usize, first: String },

    #[error("{0}")]
    Data(String),

    #[error(transparent)]
    Core(#[from] phenom_core::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Adapter,
    Io,
}

impl Error {
    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Protocol { .. } => ErrorKind::Adapter,
            Error::Config(_) => ErrorKind::Config,
            Error::Leak { .. } | Error::Data(_) | Error::Json(_) | Error::Csv(_) => ErrorKind::Data,
            Error::Core(e) => match e.kind() {
                phenom_core::error::ErrorKind::Config => ErrorKind::Config,
                phenom_core::error::ErrorKind::Data => ErrorKind::Data,
                phenom_core::error::ErrorKind::Io => ErrorKind::Io,
            },
            Error::Io(_) => ErrorKind::Io,
        }
    }

    pub(crate) fn protocol(adapter: &str, verb: &'static str, detail: impl Into<String>) -> Self {
        Error::Protocol {
            adapter: adapter.to_string(),
            verb,
            detail: detail.into(),
        }
    }
}
