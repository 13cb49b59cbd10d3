use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Shapes or lengths that do not fit together.
    #[error("structural error: {0}")]
    Structural(String),

    #[error("unknown name: {0}")]
    Lookup(String),

    /// A caller-supplied degree bound is too small for the requested computation.
    #[error("degree bound exceeded in {context}: needed {needed}, bound is {bound}; raise the bound")]
    BoundExceeded {
        context: &'static str,
        needed: usize,
        bound: usize,
    },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn bound(context: &'static str, needed: usize, bound: usize) -> Self {
        Error::BoundExceeded {
            context,
            needed,
            bound,
        }
    }
}
