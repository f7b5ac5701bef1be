use thiserror::Error;

/// Errors raised by the library.
///
/// The CLI maps [`Error::ResourceGuard`] to exit status 3 and every
/// precondition-style variant to exit status 2.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid signature: {0}")]
    InvalidSignature(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("enumeration bound exceeded: n = {n} is larger than the configured bound {bound}")]
    ResourceGuard { n: usize, bound: usize },

    #[error("blowup tower inconsistency: {0}")]
    Tower(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit status used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::ResourceGuard { .. } => 3,
            Error::Tower(_) => 1,
            _ => 2,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
