//! Covered labels, state field coverage, and the uncovered-field report.

use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use super::oracles::OracleSpec;
use super::reach::{reachable_code_with, ClassNames, ReachOptions, ReachableCode};
use crate::graph::{Label, LabelSet};
use crate::source::SourceCorpus;

/// `covered / universe`, or `None` (NA) for an empty universe.
pub fn sfc_ratio(covered: usize, universe: usize) -> Option<f64> {
    (universe > 0).then(|| covered as f64 / universe as f64)
}

/// Labels of `universe` covered by the accesses in `reach`.
///
/// An access whose receiver type is unknown covers every universe label
/// with the same field name.
pub fn covered_labels(reach: &ReachableCode, universe: &LabelSet) -> LabelSet {
    let mut by_field: BTreeMap<&str, Vec<&Label>> = BTreeMap::new();
    for l in universe.iter().filter(|l| !l.plus) {
        by_field.entry(l.field.as_str()).or_default().push(l);
    }
    let mut out = LabelSet::new();
    for a in &reach.accesses {
        let plains: Vec<Label> = match &a.declaring {
            Some(d) => vec![Label::plain(d, &a.field)],
            None => by_field.get(a.field.as_str()).into_iter().flatten().map(|l| (*l).clone()).collect(),
        };
        for plain in plains {
            if !universe.contains(&plain) {
                continue;
            }
            if a.in_loop {
                let plus = Label { plus: true, ..plain.clone() };
                if universe.contains(&plus) {
                    out.insert(plus);
                }
            }
            out.insert(plain);
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleCoverage {
    pub id: String,
    pub covered: LabelSet,
    pub sfc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoverageResult {
    pub targets: Vec<String>,
    pub universe: LabelSet,
    pub covered: LabelSet,
    /// `None` when the universe is empty.
    pub sfc: Option<f64>,
    pub uncovered: LabelSet,
    pub per_oracle: Vec<OracleCoverage>,
    pub diagnostics: Vec<String>,
}

impl CoverageResult {
    /// Combine per-oracle results over one universe. `covered` is the union.
    pub fn aggregate(targets: Vec<String>, universe: LabelSet, per_oracle: Vec<OracleCoverage>) -> Self {
        let covered: LabelSet = per_oracle.iter().flat_map(|o| o.covered.iter().cloned()).collect();
        let uncovered = universe.difference(&covered).cloned().collect();
        let mut diagnostics = Vec::new();
        if universe.is_empty() {
            let names = if targets.is_empty() { "<none>".to_string() } else { targets.join(", ") };
            diagnostics.push(format!("stateless target {names}: type graph has no edges, SFC is NA"));
        }
        CoverageResult {
            sfc: sfc_ratio(covered.len(), universe.len()),
            targets,
            universe,
            covered,
            uncovered,
            per_oracle,
            diagnostics,
        }
    }

    pub fn is_stateless(&self) -> bool {
        self.universe.is_empty()
    }

    /// Aggregate SFC with NA counted as 0, and whether that substitution
    /// happened.
    pub fn sfc_or_zero(&self) -> (f64, bool) {
        match self.sfc {
            Some(v) => (v, false),
            None => (0.0, true),
        }
    }

    pub fn to_json(&self) -> Value {
        let labels = |s: &LabelSet| s.iter().map(|l| l.to_string()).collect::<Vec<_>>();
        json!({
            "targets": self.targets,
            "universe": labels(&self.universe),
            "per_oracle": self.per_oracle.iter().map(|o| json!({
                "id": o.id,
                "covered": labels(&o.covered),
                "sfc": o.sfc,
            })).collect::<Vec<_>>(),
            "aggregate": {
                "covered": labels(&self.covered),
                "sfc": self.sfc,
                "uncovered": labels(&self.uncovered),
                "stateless": self.is_stateless(),
            },
            "diagnostics": self.diagnostics,
        })
    }
}

/// Coverage of one oracle against `universe`.
pub fn oracle_coverage(
    corpus: &SourceCorpus,
    names: &ClassNames,
    oracle: &OracleSpec,
    universe: &LabelSet,
    opts: ReachOptions,
) -> (OracleCoverage, Vec<String>) {
    let reach = reachable_code_with(corpus, names, oracle, opts);
    let covered = covered_labels(&reach, universe);
    let sfc = sfc_ratio(covered.len(), universe.len());
    (OracleCoverage { id: oracle.id.clone(), covered, sfc }, reach.diagnostics)
}

/// Per-oracle coverage, computed in parallel, and their union.
pub fn state_field_coverage(
    corpus: &SourceCorpus,
    oracles: &[OracleSpec],
    universe: &LabelSet,
    opts: ReachOptions,
) -> CoverageResult {
    let names = ClassNames::new(corpus);
    let results: Vec<(OracleCoverage, Vec<String>)> =
        oracles.par_iter().map(|o| oracle_coverage(corpus, &names, o, universe, opts)).collect();
    let targets: BTreeSet<String> = oracles.iter().flat_map(|o| o.targets.iter().cloned()).collect();
    let mut diags = Vec::new();
    let mut per_oracle = Vec::new();
    for (c, d) in results {
        per_oracle.push(c);
        diags.extend(d);
    }
    let mut result = CoverageResult::aggregate(targets.into_iter().collect(), universe.clone(), per_oracle);
    diags.sort();
    diags.dedup();
    result.diagnostics.extend(diags);
    result
}

pub const STATELESS_MESSAGE: &str = "stateless target: no coverable labels";

/// Uncovered labels grouped by declaring class.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct UncoveredReport {
    pub stateless: bool,
    pub targets: Vec<String>,
    pub groups: BTreeMap<String, Vec<Label>>,
}

pub fn uncovered_report(result: &CoverageResult) -> UncoveredReport {
    let mut groups: BTreeMap<String, Vec<Label>> = BTreeMap::new();
    for l in &result.uncovered {
        groups.entry(l.class.clone()).or_default().push(l.clone());
    }
    UncoveredReport { stateless: result.is_stateless(), targets: result.targets.clone(), groups }
}

impl UncoveredReport {
    pub fn len(&self) -> usize {
        self.groups.values().map(Vec::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.groups.is_empty()
    }

    pub fn labels(&self) -> LabelSet {
        self.groups.values().flatten().cloned().collect()
    }

    /// One class per header line, one label per indented line. Empty when
    /// everything is covered.
    pub fn to_text(&self) -> String {
        if self.stateless {
            return format!("{STATELESS_MESSAGE} ({})\n", self.targets.join(", "));
        }
        let mut out = String::new();
        for (class, labels) in &self.groups {
            out.push_str(class);
            out.push('\n');
            for l in labels {
                if l.plus {
                    out.push_str(&format!("  {}  (not iterated)\n", l.short()));
                } else {
                    out.push_str(&format!("  {}\n", l.short()));
                }
            }
        }
        out
    }

    pub fn to_json(&self) -> Value {
        if self.stateless {
            return json!({ "stateless": true, "message": STATELESS_MESSAGE, "targets": self.targets, "uncovered": {} });
        }
        let groups: serde_json::Map<String, Value> = self
            .groups
            .iter()
            .map(|(c, ls)| {
                let items = ls
                    .iter()
                    .map(|l| {
                        let mut v = json!({ "label": l.to_string(), "field": l.field, "plus": l.plus });
                        if l.plus {
                            v["note"] = json!("not iterated");
                        }
                        v
                    })
                    .collect();
                (c.clone(), Value::Array(items))
            })
            .collect();
        json!({ "stateless": false, "targets": self.targets, "uncovered": groups })
    }
}
