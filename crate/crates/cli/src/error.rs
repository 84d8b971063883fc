use std::path::Path;

use sfcov_core::coverage::CoverageError;
use sfcov_core::graph::GraphError;
use sfcov_core::harness::HarnessError;
use sfcov_core::source::SourceError;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}:{line}: {reason}")]
    Config { path: String, line: usize, reason: String },
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error(transparent)]
    Source(#[from] SourceError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Coverage(#[from] CoverageError),
    /// A harness error, with the file it came from when known.
    #[error("{}", harness_message(path.as_deref(), err))]
    Harness { path: Option<String>, err: HarnessError },
}

fn harness_message(path: Option<&str>, err: &HarnessError) -> String {
    match (path, err) {
        (Some(p), HarnessError::FormatError { line, reason }) => format!("{p}:{line}: {reason}"),
        (Some(p), HarnessError::UnknownOutcomeCode { line, code }) => {
            format!("{p}:{line}: unknown outcome code `{code}` (expected K, S or T)")
        }
        (Some(p), e) => format!("{p}: {e}"),
        (None, e) => e.to_string(),
    }
}

impl CliError {
    pub fn io(path: &Path, e: impl std::fmt::Display) -> Self {
        CliError::Io { path: path.display().to_string(), reason: e.to_string() }
    }

    pub fn harness(path: &Path, err: HarnessError) -> Self {
        match err {
            HarnessError::Io { path, reason } => CliError::Io { path, reason },
            err => CliError::Harness { path: Some(path.display().to_string()), err },
        }
    }

    /// 0 success, 1 usage/config/parse/IO, 2 missing root class, 3 no
    /// oracles, 4 malformed matrix or unknown test id.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Graph(GraphError::RootNotFound(_)) => 2,
            CliError::Coverage(CoverageError::NoOraclesFound(_)) => 3,
            CliError::Harness {
                err: HarnessError::FormatError { .. } | HarnessError::UnknownOutcomeCode { .. } | HarnessError::UnknownTestId(_),
                ..
            } => 4,
            _ => 1,
        }
    }
}
