//! Running every strategy over a suite and rendering the results.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::matrix::{CoverageMatrix, KillMatrix};
use super::metrics::{apfd_progression, first_fault_index, score_lenient, ApfdPoint, APFD_PERCENTS};
use super::order::{greedy_sfc_order, greedy_statement_order, random_order, Strategy, TestRecord};
use super::HarnessError;
use crate::graph::LabelSet;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PrefixPoint {
    pub tests: usize,
    pub covered_labels: f64,
    /// NA is reported as 0 (see `HarnessReport::warnings`).
    pub sfc: f64,
    pub statements: Option<f64>,
    pub mutation_score: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OrderingResult {
    pub strategy: Strategy,
    /// Empty for averaged strategies.
    pub order: Vec<String>,
    pub prefixes: Vec<PrefixPoint>,
    pub apfd: Vec<ApfdPoint>,
    pub first_fault: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct HarnessInput {
    pub tests: Vec<TestRecord>,
    pub universe: LabelSet,
    pub kill: Option<KillMatrix>,
    pub coverage: Option<CoverageMatrix>,
    pub failing: Option<BTreeSet<String>>,
    pub seed: u64,
    pub repetitions: usize,
    pub project: String,
    pub bug_id: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FirstFaultRow {
    pub project: String,
    pub bug_id: String,
    pub tests: usize,
    pub sfc: Option<usize>,
    pub random: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct HarnessReport {
    pub tests: usize,
    pub universe: usize,
    pub mutants: Option<usize>,
    pub orderings: Vec<OrderingResult>,
    pub first_fault: Option<FirstFaultRow>,
    pub warnings: Vec<String>,
}

struct Context<'a> {
    labels: BTreeMap<&'a str, &'a LabelSet>,
    universe: &'a LabelSet,
    coverage: Option<&'a CoverageMatrix>,
    kill: Option<&'a KillMatrix>,
    failing: Option<&'a BTreeSet<String>>,
}

impl Context<'_> {
    fn evaluate(&self, strategy: Strategy, order: Vec<String>) -> OrderingResult {
        let mut labels = LabelSet::new();
        let mut stmts: BTreeSet<&str> = BTreeSet::new();
        let mut prefixes = Vec::with_capacity(order.len());
        for k in 1..=order.len() {
            let t = order[k - 1].as_str();
            if let Some(ls) = self.labels.get(t) {
                labels.extend(ls.intersection(self.universe).cloned());
            }
            if let Some(s) = self.coverage.and_then(|c| c.statements.get(t)) {
                stmts.extend(s.iter().map(String::as_str));
            }
            let sfc = if self.universe.is_empty() { 0.0 } else { labels.len() as f64 / self.universe.len() as f64 };
            prefixes.push(PrefixPoint {
                tests: k,
                covered_labels: labels.len() as f64,
                sfc,
                statements: self.coverage.map(|_| stmts.len() as f64),
                mutation_score: self.kill.and_then(|m| score_lenient(m, &order[..k])),
            });
        }
        let apfd = self.kill.map(|m| apfd_progression(&order, m, &APFD_PERCENTS)).unwrap_or_default();
        let first_fault = self.failing.and_then(|f| first_fault_index(&order, f)).map(|i| i as f64);
        OrderingResult { strategy, order, prefixes, apfd, first_fault }
    }
}

fn mean(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let mut sum = 0.0;
    let mut count = 0usize;
    for v in values.flatten() {
        sum += v;
        count += 1;
    }
    (count > 0).then(|| sum / count as f64)
}

fn mean_all(values: impl Iterator<Item = Option<f64>>) -> Option<f64> {
    let v: Vec<Option<f64>> = values.collect();
    if v.iter().any(Option::is_none) {
        return None;
    }
    mean(v.into_iter())
}

/// Average of the random repetitions, prefix by prefix.
fn mean_ordering(seed: u64, runs: &[OrderingResult]) -> OrderingResult {
    let n = runs.first().map_or(0, |r| r.prefixes.len());
    let prefixes = (0..n)
        .map(|k| PrefixPoint {
            tests: k + 1,
            covered_labels: mean(runs.iter().map(|r| Some(r.prefixes[k].covered_labels))).unwrap_or(0.0),
            sfc: mean(runs.iter().map(|r| Some(r.prefixes[k].sfc))).unwrap_or(0.0),
            statements: mean_all(runs.iter().map(|r| r.prefixes[k].statements)),
            mutation_score: mean_all(runs.iter().map(|r| r.prefixes[k].mutation_score)),
        })
        .collect();
    let apfd = runs
        .first()
        .map(|r0| {
            r0.apfd
                .iter()
                .enumerate()
                .map(|(i, p)| ApfdPoint { percent: p.percent, tests: p.tests, apfd: mean(runs.iter().map(|r| r.apfd[i].apfd)) })
                .collect()
        })
        .unwrap_or_default();
    OrderingResult {
        strategy: Strategy::RandomMean { seed, repetitions: runs.len() },
        order: Vec::new(),
        prefixes,
        apfd,
        first_fault: mean(runs.iter().map(|r| r.first_fault)),
    }
}

/// Order the suite by every strategy and measure each ordering.
pub fn run_harness(input: &HarnessInput) -> Result<HarnessReport, HarnessError> {
    if input.repetitions == 0 {
        return Err(HarnessError::InvalidArgument("repetitions must be at least 1".into()));
    }
    let mut seen = BTreeSet::new();
    for t in &input.tests {
        if !seen.insert(t.id.as_str()) {
            return Err(HarnessError::InvalidArgument(format!("duplicate test id `{}`", t.id)));
        }
    }
    let mut warnings = Vec::new();
    if let Some(m) = &input.kill {
        if let Some(t) = m.tests().iter().find(|t| !seen.contains(t.as_str())) {
            return Err(HarnessError::UnknownTestId(t.clone()));
        }
        let absent: Vec<&str> = seen.iter().copied().filter(|t| !m.contains_test(t)).collect();
        if !absent.is_empty() {
            warnings.push(format!("{} test(s) missing from the kill matrix count as killing nothing: {}", absent.len(), absent.join(", ")));
        }
        if m.denominator() == 0 {
            warnings.push("kill matrix has no non-trivial mutants; mutation scores are NA".into());
        }
    } else {
        warnings.push("no kill matrix: mutation score and APFD columns are blank".into());
    }
    if input.universe.is_empty() {
        warnings.push("stateless universe: SFC is NA and counted as 0".into());
    }

    let ctx = Context {
        labels: input.tests.iter().map(|t| (t.id.as_str(), &t.labels)).collect(),
        universe: &input.universe,
        coverage: input.coverage.as_ref(),
        kill: input.kill.as_ref(),
        failing: input.failing.as_ref(),
    };
    let ids: Vec<String> = seen.iter().map(|s| s.to_string()).collect();

    let mut orderings = vec![ctx.evaluate(Strategy::SfcGreedy, greedy_sfc_order(&input.tests, &input.universe))];
    if let Some(cov) = &input.coverage {
        let (order, missing) = greedy_statement_order(&ids, cov);
        if !missing.is_empty() {
            warnings.push(format!("{} test(s) missing from the coverage matrix have no statements: {}", missing.len(), missing.join(", ")));
        }
        orderings.push(ctx.evaluate(Strategy::StatementGreedy, order));
    }
    let shuffles = random_order(&ids, input.seed, input.repetitions);
    let runs: Vec<OrderingResult> = shuffles
        .into_par_iter()
        .enumerate()
        .map(|(r, order)| ctx.evaluate(Strategy::Random { seed: input.seed, repetition: r }, order))
        .collect();
    orderings.push(mean_ordering(input.seed, &runs));
    orderings.extend(runs);

    let first_fault = input.failing.as_ref().map(|_| FirstFaultRow {
        project: input.project.clone(),
        bug_id: input.bug_id.clone(),
        tests: ids.len(),
        sfc: orderings[0].first_fault.map(|v| v as usize),
        random: orderings.iter().find(|o| matches!(o.strategy, Strategy::RandomMean { .. })).and_then(|o| o.first_fault),
    });
    if input.failing.as_ref().is_some_and(|f| f.iter().all(|t| !seen.contains(t.as_str()))) {
        warnings.push("no failing test is part of the suite".into());
    }

    Ok(HarnessReport {
        tests: ids.len(),
        universe: input.universe.len(),
        mutants: input.kill.as_ref().map(KillMatrix::denominator),
        orderings,
        first_fault,
        warnings,
    })
}

fn opt(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.6}")).unwrap_or_default()
}

fn count(v: f64) -> String {
    format!("{v}")
}

impl HarnessReport {
    pub fn ordering(&self, name: &str) -> Option<&OrderingResult> {
        self.orderings.iter().find(|o| o.strategy.name() == name)
    }

    /// `strategy,tests,mutation_score,sfc,covered_labels,statements`, one row
    /// per strategy and prefix size.
    pub fn curves_csv(&self) -> String {
        let mut out = String::from("strategy,tests,mutation_score,sfc,covered_labels,statements\n");
        for o in &self.orderings {
            let name = o.strategy.name();
            for p in &o.prefixes {
                let _ = writeln!(
                    out,
                    "{name},{},{},{:.6},{},{}",
                    p.tests,
                    opt(p.mutation_score),
                    p.sfc,
                    count(p.covered_labels),
                    p.statements.map(count).unwrap_or_default()
                );
            }
        }
        out
    }

    pub fn apfd_csv(&self) -> String {
        let mut out = String::from("strategy,percent,tests,apfd\n");
        for o in &self.orderings {
            let name = o.strategy.name();
            for p in &o.apfd {
                let _ = writeln!(out, "{name},{},{},{}", p.percent, p.tests, opt(p.apfd));
            }
        }
        out
    }

    pub fn first_fault_csv(&self) -> String {
        let mut out = String::from("Project,Bug ID,#Tests,SFC,Random\n");
        if let Some(r) = &self.first_fault {
            let _ = writeln!(
                out,
                "{},{},{},{},{}",
                r.project,
                r.bug_id,
                r.tests,
                r.sfc.map(|v| v.to_string()).unwrap_or_default(),
                r.random.map(|v| format!("{v:.1}")).unwrap_or_default()
            );
        }
        out
    }

    pub fn to_json(&self) -> Value {
        json!({
            "tests": self.tests,
            "universe": self.universe,
            "mutants": self.mutants,
            "orderings": self.orderings,
            "first_fault": self.first_fault,
            "warnings": self.warnings,
        })
    }
}
