use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A configuration value violates its contract. `field` names the offending key.
    #[error("invalid configuration `{field}`: {reason}")]
    Config { field: String, reason: String },

    #[error("{what} {index} out of range (valid: 0..{len})")]
    Range {
        what: &'static str,
        index: u64,
        len: u64,
    },

    #[error("undefined ratio: {0}")]
    UndefinedRatio(String),

    #[error("empty input: {0}")]
    EmptyInput(String),

    #[error("unknown distribution preset `{0}` (known: sre-default, table2)")]
    UnknownPreset(String),

    #[error("line {line}: {reason}")]
    Parse { line: u64, reason: String },

    #[error("format error: {0}")]
    Format(String),

    /// Wraps an error raised while evaluating one retention window.
    #[error("window {window_days}d: {source}")]
    Window {
        window_days: u32,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::Config {
            field: field.into(),
            reason: reason.into(),
        }
    }

    /// True for errors caused by bad user input rather than runtime failure.
    pub fn is_config(&self) -> bool {
        match self {
            Error::Config { .. } | Error::UnknownPreset(_) => true,
            Error::Window { source, .. } => source.is_config(),
            _ => false,
        }
    }
}
