//! Command-line front end: problem files, the example corpus, and output.

pub mod app;
pub mod corpus;
pub mod document;
pub mod problem;

use hsbar::forms::FormsError;
use hsbar::hmbar::HmError;
use hsbar::ktheory::KTheoryError;
use hsbar::solver::SolveError;
use thiserror::Error;

pub use app::run;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("invalid field {field}: {message}")]
    Field { field: String, message: String },
    #[error("validation failed: {0}")]
    Validation(FormsError),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Hm(#[from] HmError),
    #[error(transparent)]
    KTheory(#[from] KTheoryError),
    #[error("cannot read {path}: {message}")]
    Io { path: String, message: String },
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. }
            | CliError::Field { .. }
            | CliError::Validation(_)
            | CliError::KTheory(_)
            | CliError::Usage(_) => 2,
            CliError::Solve(e) if e.is_budget() => 3,
            CliError::Solve(SolveError::NoConsistentAnswer { .. }) => 4,
            CliError::Solve(SolveError::Forms(_)) => 2,
            CliError::Solve(_) | CliError::Hm(_) | CliError::Io { .. } => 1,
        }
    }
}
