use std::fmt;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Severity::Error => f.write_str("error"),
            Severity::Warning => f.write_str("warning"),
        }
    }
}

/// A located message about some input text. Line and column are 1-based.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SourceDiagnostic {
    pub file: String,
    pub line: usize,
    pub column: usize,
    pub message: String,
    pub severity: Severity,
}

impl SourceDiagnostic {
    pub fn error(file: impl Into<String>, line: usize, column: usize, message: impl Into<String>) -> Self {
        SourceDiagnostic {
            file: file.into(),
            line: line.max(1),
            column: column.max(1),
            message: message.into(),
            severity: Severity::Error,
        }
    }

    /// Re-anchor a diagnostic produced for a single line of a larger file.
    pub fn relocate(mut self, file: &str, line: usize, column_offset: usize) -> Self {
        self.file = file.to_string();
        self.line = line;
        self.column += column_offset;
        self
    }
}

impl fmt::Display for SourceDiagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}:{}:{}: {}: {}",
            self.file, self.line, self.column, self.severity, self.message
        )
    }
}

#[derive(Debug, Error)]
pub enum Error {
    #[error("{0}")]
    Syntax(SourceDiagnostic),
    #[error("{what} has size {size}, exceeding the cap of {cap}")]
    SizeLimit { what: String, size: u128, cap: u128 },
    #[error("fixpoint iteration cap {0} exceeded")]
    IterationCap(usize),
    #[error("context mismatch: {0}")]
    ContextMismatch(String),
    #[error("contract violation: {0}")]
    Contract(String),
    #[error("not a homomorphism: {0}")]
    NotHomomorphism(String),
    #[error("not a bijection: {0}")]
    NotBijective(String),
    #[error("signature mismatch: {0}")]
    SignatureMismatch(String),
    #[error("not a group: {0}")]
    NotGroup(String),
    #[error("unknown instance `{0}`")]
    UnknownInstance(String),
    #[error("no definition for relation `{0}`")]
    MissingDefinition(String),
    #[error("malformed witness: {0}")]
    MalformedWitness(String),
    #[error("invalid model: {0}")]
    InvalidModel(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub fn diagnostic(&self) -> Option<&SourceDiagnostic> {
        match self {
            Error::Syntax(d) => Some(d),
            _ => None,
        }
    }
}

impl From<SourceDiagnostic> for Error {
    fn from(d: SourceDiagnostic) -> Self {
        Error::Syntax(d)
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
