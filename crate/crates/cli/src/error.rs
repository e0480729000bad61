use std::fmt;
use std::path::PathBuf;

use thiserror::Error;

/// Location of a problem inside a text input.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    /// Path to the offending field, e.g. `patches[2].x`. Empty when unknown.
    pub field: String,
    pub message: String,
}

impl ParseError {
    pub fn new(
        line: usize,
        column: usize,
        field: impl Into<String>,
        message: impl Into<String>,
    ) -> Self {
        ParseError {
            line,
            column,
            field: field.into(),
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}", self.line)?;
        if self.column > 0 {
            write!(f, ", column {}", self.column)?;
        }
        if !self.field.is_empty() {
            write!(f, ", at {}", self.field)?;
        }
        write!(f, ": {}", self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{}: {source}", path.display())]
    Parse { path: PathBuf, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error("patch {patch} violates the HS tangent condition (residuals x={}, y={}, z={})", residuals[0], residuals[1], residuals[2])]
    Infeasible { patch: String, residuals: [f64; 3] },
    #[error(transparent)]
    Kernel(#[from] hspatch::Error),
}

impl CliError {
    /// 1 for an infeasible patch, 2 for everything else.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Infeasible { .. } | CliError::Kernel(hspatch::Error::Infeasible { .. }) => 1,
            _ => 2,
        }
    }
}
