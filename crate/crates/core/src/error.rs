use thiserror::Error;

/// Errors shared across the library.
///
/// `exit_code` distinguishes bad input (1) from internal invariant
/// violations (2), which the CLI maps onto process exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("input error: {0}")]
    Input(String),

    #[error("not Gorenstein: {0}")]
    NotGorenstein(String),

    #[error("table cochain evaluated outside its domain at tuple {0}")]
    Domain(String),

    #[error("unsupported cochain representation: {0}")]
    Representation(String),

    #[error("arity {arity} exceeds the configured cap {cap}")]
    ArityCap { arity: usize, cap: usize },

    #[error("invalid Poisson structure: {0}")]
    InvalidStructure(String),

    #[error("unsupported Poisson structure: {0}")]
    UnsupportedStructure(String),

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("internal invariant violation: {0}")]
    Invariant(String),

    #[error("I/O error: {0}")]
    Io(#[from] std::io::Error),

    #[error("JSON error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    /// Process exit code the CLI should report for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Invariant(_) | Error::Contract(_) => 2,
            _ => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
