//! Oracle coverage: which coverable labels an oracle's code reaches.

mod oracles;
mod reach;
mod score;

use thiserror::Error;

pub use oracles::{
    assertion_calls, extract_oracles, OracleKind, OracleMode, OracleQuery, OracleSpec, Selector,
    DEFAULT_INVARIANT_PATTERN, DEFAULT_TEST_PATTERN,
};
pub use reach::{reachable_code, reachable_code_with, ClassNames, FieldAccess, ReachOptions, ReachableCode};
pub use score::{
    covered_labels, oracle_coverage, sfc_ratio, state_field_coverage, uncovered_report, CoverageResult,
    OracleCoverage, UncoveredReport, STATELESS_MESSAGE,
};

#[derive(Debug, Error, PartialEq)]
pub enum CoverageError {
    #[error("no oracles found for selector `{0}`")]
    NoOraclesFound(String),
    #[error("invalid selector: {0}")]
    InvalidSelector(String),
    #[error("unknown oracle mode `{0}` (expected `invariants` or `tests`)")]
    InvalidMode(String),
}
