use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument is outside the validity region of the requested formula.
    #[error("domain error: {0}")]
    Domain(String),

    /// Parameters exceed the configured order/argument caps.
    #[error("capacity exceeded: {0}")]
    Capacity(String),

    #[error("no certified bracket for zero m={m} of order n={n} ({bc}): {detail}")]
    Bracketing {
        n: u32,
        m: u32,
        bc: &'static str,
        detail: String,
    },

    #[error("numerical failure: {0}")]
    Numerical(String),

    #[error("invalid mode index: {0}")]
    Index(String),

    #[error("empty gamma path: {0}")]
    Path(String),

    #[error("degenerate estimator input: {0}")]
    Estimator(String),

    #[error("malformed data in {path}: {detail}")]
    Parse { path: PathBuf, detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Domain(_) | Error::Index(_) | Error::Path(_))
    }
}
