//! Test orderings: additional-greedy over labels or statements, and seeded
//! random shuffles.

use std::collections::{BTreeMap, BTreeSet};

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::matrix::CoverageMatrix;
use crate::graph::LabelSet;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestRecord {
    pub id: String,
    pub labels: LabelSet,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub statements: Option<BTreeSet<String>>,
}

impl TestRecord {
    pub fn new(id: impl Into<String>, labels: LabelSet) -> Self {
        TestRecord { id: id.into(), labels, statements: None }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Strategy {
    SfcGreedy,
    StatementGreedy,
    Random { seed: u64, repetition: usize },
    /// Average over the random repetitions; has no single order.
    RandomMean { seed: u64, repetitions: usize },
}

impl Strategy {
    pub fn name(&self) -> String {
        match self {
            Strategy::SfcGreedy => "sfc-greedy".into(),
            Strategy::StatementGreedy => "statement-greedy".into(),
            Strategy::Random { repetition, .. } => format!("random-{repetition}"),
            Strategy::RandomMean { .. } => "random".into(),
        }
    }
}

/// Additional greedy: repeatedly take the item adding the most new elements,
/// ties to the smallest id. Once nothing adds anything, the remaining ids
/// follow in lexicographic order.
pub fn additional_greedy<T: Ord + Clone>(items: &BTreeMap<String, BTreeSet<T>>) -> Vec<String> {
    let mut remaining: Vec<&String> = items.keys().collect();
    let mut covered: BTreeSet<T> = BTreeSet::new();
    let mut order = Vec::with_capacity(remaining.len());
    while !remaining.is_empty() {
        let mut best: Option<(usize, usize)> = None;
        for (pos, id) in remaining.iter().enumerate() {
            let gain = items[*id].iter().filter(|x| !covered.contains(*x)).count();
            // `remaining` is sorted, so the first maximum has the smallest id
            if best.is_none_or(|(_, g)| gain > g) {
                best = Some((pos, gain));
            }
        }
        let (pos, gain) = best.expect("non-empty");
        if gain == 0 {
            break;
        }
        let id = remaining.remove(pos);
        covered.extend(items[id].iter().cloned());
        order.push(id.clone());
    }
    order.extend(remaining.into_iter().cloned());
    order
}

pub fn greedy_sfc_order(tests: &[TestRecord], universe: &LabelSet) -> Vec<String> {
    let items = tests.iter().map(|t| (t.id.clone(), t.labels.intersection(universe).cloned().collect())).collect();
    additional_greedy::<crate::graph::Label>(&items)
}

/// Greedy over statement sets. Tests missing from `coverage` get an empty
/// set; their ids are returned as warnings.
pub fn greedy_statement_order(tests: &[String], coverage: &CoverageMatrix) -> (Vec<String>, Vec<String>) {
    let mut missing = Vec::new();
    let items: BTreeMap<String, BTreeSet<String>> = tests
        .iter()
        .map(|t| {
            let set = coverage.statements.get(t).cloned().unwrap_or_else(|| {
                missing.push(t.clone());
                BTreeSet::new()
            });
            (t.clone(), set)
        })
        .collect();
    missing.sort();
    (additional_greedy(&items), missing)
}

/// `repetitions` shuffles of the sorted ids. Repetition `r` uses ChaCha8
/// seeded with `seed` on stream `r`, so each run is replayable on its own.
pub fn random_order(tests: &[String], seed: u64, repetitions: usize) -> Vec<Vec<String>> {
    let mut base = tests.to_vec();
    base.sort();
    (0..repetitions)
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut v = base.clone();
            v.shuffle(&mut rng);
            v
        })
        .collect()
}
