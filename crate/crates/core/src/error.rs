use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Broad failure class; the CLI maps each to a fixed exit code.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Parse,
    Validation,
    Undefined,
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error("{}:{line}:{column}: {message}", file.as_ref().map(|p| p.display().to_string()).unwrap_or_else(|| "<input>".into()))]
    Parse {
        file: Option<PathBuf>,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("invalid element path {path:?} at offset {offset}: {message}")]
    Path {
        path: String,
        offset: usize,
        message: String,
    },

    #[error("validation failed: {0}")]
    Validation(String),

    #[error("{what} not found: {name}{}", suggestion_suffix(.suggestions))]
    NotFound {
        what: &'static str,
        name: String,
        suggestions: Vec<String>,
    },

    #[error("undefined metric: {0}")]
    UndefinedMetric(String),

    #[error("unsupported: {0}")]
    Capability(String),
}

fn suggestion_suffix(suggestions: &[String]) -> String {
    if suggestions.is_empty() {
        String::new()
    } else {
        format!(" (did you mean {}?)", suggestions.join(", "))
    }
}

impl Error {
    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } | Error::Parse { .. } => ErrorClass::Parse,
            Error::Path { .. } | Error::Validation(_) | Error::NotFound { .. } => {
                ErrorClass::Validation
            }
            Error::UndefinedMetric(_) | Error::Capability(_) => ErrorClass::Undefined,
        }
    }
}
