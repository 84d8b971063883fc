//! Mutation score, APFD and first-fault positions.

use std::collections::{BTreeMap, BTreeSet};

use super::matrix::KillMatrix;
use super::HarnessError;

/// Share of non-trivial mutants killed by at least one of `tests`; `None`
/// when the matrix has no non-trivial mutants.
pub fn mutation_score(matrix: &KillMatrix, tests: &[String]) -> Result<Option<f64>, HarnessError> {
    if let Some(t) = tests.iter().find(|t| !matrix.contains_test(t)) {
        return Err(HarnessError::UnknownTestId(t.clone()));
    }
    Ok(score_lenient(matrix, tests))
}

/// As [`mutation_score`], with unknown tests killing nothing.
pub(crate) fn score_lenient(matrix: &KillMatrix, tests: &[String]) -> Option<f64> {
    let denom = matrix.denominator();
    if denom == 0 {
        return None;
    }
    let killed: BTreeSet<usize> = tests.iter().flat_map(|t| matrix.killed_by(t)).collect();
    Some(killed.len() as f64 / denom as f64)
}

/// 1-based position of the first test detecting each detected fault.
fn first_detections(order: &[String], matrix: &KillMatrix) -> BTreeMap<usize, usize> {
    let mut tf = BTreeMap::new();
    for (i, t) in order.iter().enumerate() {
        for j in matrix.killed_by(t) {
            tf.entry(j).or_insert(i + 1);
        }
    }
    tf
}

/// APFD = 1 - sum(TF) / (n m) + 1 / (2n), where m counts only the faults
/// some test in `order` detects.
pub fn apfd(order: &[String], matrix: &KillMatrix) -> Result<f64, HarnessError> {
    let tf = first_detections(order, matrix);
    let n = order.len();
    let m = tf.len();
    if n == 0 || m == 0 {
        return Err(HarnessError::NoDetectableFaults);
    }
    let sum: usize = tf.values().sum();
    Ok(1.0 - sum as f64 / (n * m) as f64 + 1.0 / (2.0 * n as f64))
}

pub const APFD_PERCENTS: [u32; 10] = [10, 20, 30, 40, 50, 60, 70, 80, 90, 100];

/// Number of tests in the first `percent`% of a suite of `n`, rounded up,
/// and at least one.
pub fn prefix_len(n: usize, percent: u32) -> usize {
    ((n * percent as usize).div_ceil(100)).clamp(1.min(n), n)
}

#[derive(Debug, Clone, PartialEq, serde::Serialize)]
pub struct ApfdPoint {
    pub percent: u32,
    pub tests: usize,
    /// `None` when the prefix detects no fault.
    pub apfd: Option<f64>,
}

/// APFD of each percentage prefix of `order`.
pub fn apfd_progression(order: &[String], matrix: &KillMatrix, percents: &[u32]) -> Vec<ApfdPoint> {
    percents
        .iter()
        .map(|&p| {
            let k = prefix_len(order.len(), p);
            ApfdPoint { percent: p, tests: k, apfd: apfd(&order[..k], matrix).ok() }
        })
        .collect()
}

/// 1-based position of the first test of `order` in `failing`.
pub fn first_fault_index(order: &[String], failing: &BTreeSet<String>) -> Option<usize> {
    order.iter().position(|t| failing.contains(t)).map(|i| i + 1)
}
