use thiserror::Error;

/// Errors produced anywhere in the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid distribution: {0}")]
    InvalidDistribution(String),

    #[error("alphabet mismatch: {0}")]
    AlphabetMismatch(String),

    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: String, got: String },

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("degenerate instance: {0}")]
    DegenerateInstance(&'static str),

    #[error("degenerate information: every arm has zero information gain and positive regret")]
    DegenerateInformation,

    #[error("config error at line {line}: {msg}")]
    ConfigSyntax { line: usize, msg: String },

    #[error("config error: missing required key `{0}`")]
    MissingKey(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error("unknown agent `{0}` (expected ts, sts:<eps>, blasts:<beta>, vids, vblaids:<beta|adaptive>)")]
    UnknownAgent(String),

    #[error("malformed csv `{path}` at line {line}: {msg}")]
    Csv { path: String, line: usize, msg: String },

    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn param(name: &'static str, reason: impl Into<String>) -> Self {
        Error::InvalidParameter { name, reason: reason.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    /// True for errors caused by bad user configuration (CLI exit code 2).
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::ConfigSyntax { .. }
                | Error::MissingKey(_)
                | Error::Config(_)
                | Error::UnknownAgent(_)
                | Error::InvalidParameter { .. }
                | Error::Csv { .. }
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
