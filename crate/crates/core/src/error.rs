use thiserror::Error;

/// Errors raised across the library.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed or out-of-range input; `field` names the offending location.
    #[error("invalid {field}: {message}")]
    Invalid { field: String, message: String },
    /// The input lies outside the classes this library can decide.
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("scalars belong to different algebraic contexts")]
    ContextMismatch,
}

impl Error {
    pub fn invalid(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid { field: field.into(), message: message.into() }
    }

    pub fn unsupported(message: impl Into<String>) -> Self {
        Error::Unsupported(message.into())
    }

    /// Prefixes the field path of an `Invalid` error.
    pub fn within(self, prefix: &str) -> Self {
        match self {
            Error::Invalid { field, message } => {
                let field = if field.is_empty() { prefix.to_string() } else { format!("{prefix}.{field}") };
                Error::Invalid { field, message }
            }
            other => other,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
