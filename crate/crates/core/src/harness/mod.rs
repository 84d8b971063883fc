//! Replaying prioritization experiments from kill and coverage matrices.

mod matrix;
mod metrics;
mod order;
mod report;

use thiserror::Error;

pub use matrix::{load_failing_tests, parse_failing_tests, CoverageMatrix, KillMatrix, Outcome};
pub use metrics::{apfd, apfd_progression, first_fault_index, mutation_score, prefix_len, ApfdPoint, APFD_PERCENTS};
pub use order::{additional_greedy, greedy_sfc_order, greedy_statement_order, random_order, Strategy, TestRecord};
pub use report::{run_harness, FirstFaultRow, HarnessInput, HarnessReport, OrderingResult, PrefixPoint};

#[derive(Debug, Error, PartialEq)]
pub enum HarnessError {
    #[error("line {line}: {reason}")]
    FormatError { line: usize, reason: String },
    #[error("line {line}: unknown outcome code `{code}` (expected K, S or T)")]
    UnknownOutcomeCode { line: usize, code: String },
    #[error("unknown test id `{0}`")]
    UnknownTestId(String),
    #[error("no detectable faults")]
    NoDetectableFaults,
    #[error("{path}: {reason}")]
    Io { path: String, reason: String },
    #[error("{0}")]
    InvalidArgument(String),
}
