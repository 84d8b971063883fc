//! The three subcommands. Each returns its stdout text; diagnostics go to
//! stderr as they arise.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use sfcov_core::coverage::{
    extract_oracles, state_field_coverage, uncovered_report, CoverageResult, OracleQuery, ReachOptions, Selector,
};
use sfcov_core::graph::{build_type_graph, merge_label_universes, GraphOptions, Label, LabelSet, TypeGraph};
use sfcov_core::harness::{
    load_failing_tests, run_harness, CoverageMatrix, HarnessInput, KillMatrix, TestRecord,
};
use sfcov_core::source::{load_corpus, SourceCorpus, SourceError};

use crate::config::RunConfig;
use crate::error::CliError;
use crate::output::{csv_header, json_text, provenance, with_provenance, write_atomic, TOOL, VERSION};

pub fn warn(msg: impl std::fmt::Display) {
    eprintln!("{TOOL}: warning: {msg}");
}

fn load(cfg: &RunConfig) -> Result<SourceCorpus, CliError> {
    cfg.require_sources()?;
    for p in &cfg.sources {
        if !p.exists() {
            return Err(CliError::io(p, "no such file or directory"));
        }
    }
    let corpus = load_corpus(&cfg.sources).inspect_err(|e| {
        if let SourceError::NoClasses { diagnostics } = e {
            diagnostics.iter().for_each(|d| eprintln!("{d}"));
        }
    })?;
    for d in &corpus.diagnostics {
        eprintln!("{d}");
    }
    Ok(corpus)
}

fn graphs(cfg: &RunConfig, corpus: &SourceCorpus) -> Result<Vec<TypeGraph>, CliError> {
    cfg.require_roots()?;
    let opts = GraphOptions { inherited: !cfg.no_inherited };
    Ok(cfg.roots.iter().map(|r| build_type_graph(corpus, r, opts)).collect::<Result<_, _>>()?)
}

fn format<'a>(cfg: &'a RunConfig, default: &'a str, allowed: &[&str]) -> Result<&'a str, CliError> {
    let f = cfg.format.as_deref().unwrap_or(default);
    if !allowed.contains(&f) {
        return Err(CliError::Usage(format!("unsupported output format `{f}` (expected one of: {})", allowed.join(", "))));
    }
    Ok(f)
}

fn graph_json(cfg: &RunConfig, gs: &[TypeGraph]) -> Value {
    match gs {
        [g] => with_provenance(cfg, g.to_json()),
        _ => with_provenance(cfg, json!({ "graphs": gs })),
    }
}

fn graph_dot(gs: &[TypeGraph]) -> String {
    gs.iter().map(TypeGraph::to_dot).collect()
}

pub fn cmd_graph(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, "json", &["json", "dot"])?;
    let corpus = load(cfg)?;
    let gs = graphs(cfg, &corpus)?;
    let json = json_text(&graph_json(cfg, &gs));
    let dot = graph_dot(&gs);
    if let Some(dir) = &cfg.out_dir {
        write_atomic(&dir.join("graph.json"), &json)?;
        write_atomic(&dir.join("graph.dot"), &dot)?;
    }
    Ok(if fmt == "dot" { dot } else { json })
}

/// Per-test label sets cached between `coverage` and `prioritize`.
#[derive(Debug, Serialize, Deserialize)]
pub struct LabelSidecar {
    pub tool: String,
    pub version: String,
    #[serde(default)]
    pub config: Value,
    pub universe: LabelSet,
    pub tests: Vec<TestRecord>,
}

fn sfc_text(v: Option<f64>) -> String {
    v.map(|x| format!("{x:.3}")).unwrap_or_else(|| "NA".into())
}

fn coverage_csv(cfg: &RunConfig, r: &CoverageResult) -> String {
    let mut out = csv_header(cfg);
    out.push_str("oracle,covered,universe,sfc,labels\n");
    let n = r.universe.len();
    let row = |out: &mut String, id: &str, covered: &LabelSet, sfc: Option<f64>| {
        let labels: Vec<String> = covered.iter().map(Label::to_string).collect();
        let sfc = sfc.map(|x| format!("{x:.6}")).unwrap_or_default();
        let _ = writeln!(out, "{id},{},{n},{sfc},{}", covered.len(), labels.join(";"));
    };
    for o in &r.per_oracle {
        row(&mut out, &o.id, &o.covered, o.sfc);
    }
    row(&mut out, "aggregate", &r.covered, r.sfc);
    out
}

fn coverage_text(r: &CoverageResult) -> String {
    let n = r.universe.len();
    let width = r.per_oracle.iter().map(|o| o.id.len()).max().unwrap_or(0).max("aggregate".len());
    let mut out = String::new();
    for o in &r.per_oracle {
        let _ = writeln!(out, "{:<width$}  {}  ({}/{n})", o.id, sfc_text(o.sfc), o.covered.len());
    }
    let _ = writeln!(out, "{:<width$}  {}  ({}/{n})", "aggregate", sfc_text(r.sfc), r.covered.len());
    let report = uncovered_report(r);
    if !report.is_empty() || report.stateless {
        out.push_str("\nuncovered:\n");
        out.push_str(&report.to_text());
    }
    out
}

pub fn coverage_result(cfg: &RunConfig, corpus: &SourceCorpus) -> Result<CoverageResult, CliError> {
    let gs = graphs(cfg, corpus)?;
    let universe = merge_label_universes(&gs);
    let mut query = OracleQuery::new(cfg.oracles);
    if let Some(s) = &cfg.selector {
        query = query.with_selector(Selector::parse(s)?);
    }
    query.assert_prefixes = cfg.assert_prefixes.clone();
    let oracles = extract_oracles(corpus, &cfg.roots, &query)?;
    let opts = ReachOptions { recursion_as_iteration: cfg.recursion_as_iteration, strict_loop_bodies: cfg.strict_loop_bodies };
    let result = state_field_coverage(corpus, &oracles, &universe, opts);
    for d in &result.diagnostics {
        warn(d);
    }
    Ok(result)
}

fn sidecar(cfg: &RunConfig, r: &CoverageResult) -> LabelSidecar {
    LabelSidecar {
        tool: TOOL.into(),
        version: VERSION.into(),
        config: provenance(cfg)["config"].clone(),
        universe: r.universe.clone(),
        tests: r.per_oracle.iter().map(|o| TestRecord::new(o.id.clone(), o.covered.clone())).collect(),
    }
}

pub fn cmd_coverage(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, "json", &["json", "csv", "text"])?;
    let corpus = load(cfg)?;
    let r = coverage_result(cfg, &corpus)?;
    let mut json = with_provenance(cfg, r.to_json());
    json["uncovered_report"] = uncovered_report(&r).to_json();
    let json = json_text(&json);
    let csv = coverage_csv(cfg, &r);
    let text = coverage_text(&r);
    let labels_path = cfg.labels.clone().or_else(|| cfg.out_dir.as_ref().map(|d| d.join("labels.json")));
    if let Some(dir) = &cfg.out_dir {
        write_atomic(&dir.join("coverage.json"), &json)?;
        write_atomic(&dir.join("coverage.csv"), &csv)?;
        write_atomic(&dir.join("uncovered.txt"), &uncovered_report(&r).to_text())?;
    }
    if let Some(p) = labels_path {
        let side = serde_json::to_value(sidecar(cfg, &r)).expect("sidecar serializes");
        write_atomic(&p, &json_text(&side))?;
    }
    Ok(match fmt {
        "csv" => csv,
        "text" => text,
        _ => json,
    })
}

fn read_sidecar(path: &Path) -> Result<LabelSidecar, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    serde_json::from_str(&text).map_err(|e| CliError::Io { path: format!("{}:{}", path.display(), e.line()), reason: e.to_string() })
}

/// Labels from the sidecar when one is named, otherwise from a fresh
/// coverage run over the sources.
fn suite(cfg: &RunConfig) -> Result<(Vec<TestRecord>, LabelSet), CliError> {
    match &cfg.labels {
        Some(p) => {
            let s = read_sidecar(p)?;
            Ok((s.tests, s.universe))
        }
        None if !cfg.sources.is_empty() => {
            let corpus = load(cfg)?;
            let r = coverage_result(cfg, &corpus)?;
            let s = sidecar(cfg, &r);
            Ok((s.tests, s.universe))
        }
        None => Err(CliError::Usage("prioritize needs --labels or --src".into())),
    }
}

pub fn cmd_prioritize(cfg: &RunConfig) -> Result<String, CliError> {
    let fmt = format(cfg, "text", &["json", "text"])?;
    let (tests, universe) = suite(cfg)?;
    let kill = cfg.kill.as_ref().map(|p| KillMatrix::load(p).map_err(|e| CliError::harness(p, e))).transpose()?;
    let coverage = cfg.coverage.as_ref().map(|p| CoverageMatrix::load(p).map_err(|e| CliError::harness(p, e))).transpose()?;
    let failing: Option<BTreeSet<String>> =
        cfg.failing.as_ref().map(|p| load_failing_tests(p).map_err(|e| CliError::harness(p, e))).transpose()?;
    let input = HarnessInput {
        tests,
        universe,
        kill,
        coverage,
        failing,
        seed: cfg.seed,
        repetitions: cfg.repetitions,
        project: cfg.project.clone(),
        bug_id: cfg.bug_id.clone(),
    };
    let report = run_harness(&input).map_err(|err| match (&cfg.kill, err) {
        (Some(p), err @ sfcov_core::harness::HarnessError::UnknownTestId(_)) => CliError::harness(p, err),
        (_, sfcov_core::harness::HarnessError::InvalidArgument(m)) => CliError::Usage(m),
        (_, err) => CliError::Harness { path: None, err },
    })?;
    for w in &report.warnings {
        warn(w);
    }
    let dir: PathBuf = cfg.out_dir.clone().unwrap_or_else(|| PathBuf::from("."));
    let head = csv_header(cfg);
    let files = [
        ("curves.csv", format!("{head}{}", report.curves_csv())),
        ("apfd.csv", format!("{head}{}", report.apfd_csv())),
        ("first_fault.csv", format!("{head}{}", report.first_fault_csv())),
        ("report.json", json_text(&with_provenance(cfg, report.to_json()))),
    ];
    let mut out = String::new();
    for (name, body) in &files {
        let p = dir.join(name);
        write_atomic(&p, body)?;
        let _ = writeln!(out, "wrote {}", p.display());
    }
    Ok(if fmt == "json" { files[3].1.clone() } else { out })
}
