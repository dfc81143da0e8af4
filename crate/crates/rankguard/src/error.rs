use thiserror::Error;

/// Malformed or inconsistent input, naming the offending field.
#[derive(Debug, Clone, PartialEq, Error)]
#[error("{field}: {message}")]
pub struct InputError {
    pub field: String,
    pub message: String,
}

impl InputError {
    pub fn new(field: impl Into<String>, message: impl Into<String>) -> Self {
        InputError { field: field.into(), message: message.into() }
    }
}

#[derive(Debug, Error)]
pub enum AppError {
    #[error(transparent)]
    Input(#[from] InputError),
    #[error("{context}: {source}")]
    Core {
        context: String,
        #[source]
        source: rankguard_core::Error,
    },
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Csv {
        path: String,
        #[source]
        source: csv::Error,
    },
}

impl AppError {
    pub fn core(context: impl Into<String>, source: rankguard_core::Error) -> Self {
        AppError::Core { context: context.into(), source }
    }

    /// 3 for degenerate data, 2 for everything else.
    pub fn exit_code(&self) -> i32 {
        match self {
            AppError::Core { source: rankguard_core::Error::Degenerate(_), .. } => 3,
            _ => 2,
        }
    }
}
