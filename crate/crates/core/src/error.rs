use std::fmt;

/// A single failed constraint, addressed by its dotted key path inside the
/// scenario tree (for example `controller.pd_gains.k2`).
#[derive(Debug, Clone, PartialEq, Eq, serde::Serialize)]
pub struct FieldError {
    pub path: String,
    pub message: String,
}

impl FieldError {
    pub fn new(path: impl Into<String>, message: impl Into<String>) -> Self {
        Self {
            path: path.into(),
            message: message.into(),
        }
    }

    pub(crate) fn prefixed(mut self, prefix: &str) -> Self {
        self.path = if self.path.is_empty() {
            prefix.to_string()
        } else {
            format!("{prefix}.{}", self.path)
        };
        self
    }
}

impl fmt::Display for FieldError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.path, self.message)
    }
}

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid {}", join(.0))]
    Invalid(Vec<FieldError>),

    #[error("parse error at `{path}`: {message}")]
    Parse { path: String, message: String },

    #[error("unknown key `{path}`: {message}")]
    UnknownKey { path: String, message: String },

    #[error("unsupported schema version {found} (supported: {supported})")]
    SchemaVersion { found: u32, supported: u32 },

    #[error("node index {index} outside 0..={max}")]
    IndexOutOfRange { index: usize, max: usize },

    #[error("stencil {kind} expects {expected} samples, got {got}")]
    StencilWidth {
        kind: &'static str,
        expected: usize,
        got: usize,
    },

    #[error("stencil step must be positive and finite, got {0}")]
    NonPositiveStep(f64),

    #[error("unknown gain `{name}` for {controller} control")]
    UnknownGain { name: String, controller: String },

    #[error("history of {requested} bytes exceeds the memory cap of {cap} bytes")]
    MemoryCap { requested: u64, cap: u64 },

    #[error("malformed result bundle: {0}")]
    Bundle(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn join(errors: &[FieldError]) -> String {
    errors
        .iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join("; ")
}

impl Error {
    pub(crate) fn field(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Invalid(vec![FieldError::new(path, message)])
    }

    /// Constraint violations carried by this error, if any.
    pub fn field_errors(&self) -> &[FieldError] {
        match self {
            Error::Invalid(errors) => errors,
            _ => &[],
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
