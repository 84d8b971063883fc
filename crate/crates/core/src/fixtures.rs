//! Golden fixtures: a source tree plus expected graphs and coverage, stored
//! as data under `fixtures/<name>/`.

use std::path::{Path, PathBuf};

use serde::Deserialize;
use thiserror::Error;

use crate::coverage::{OracleMode, ReachOptions};
use crate::graph::{Label, TypeGraph};
use crate::source::{load_corpus, SourceCorpus, SourceError};

#[derive(Debug, Error)]
pub enum FixtureError {
    #[error("unknown fixture `{0}`")]
    UnknownFixture(String),
    #[error("{path}: {reason}")]
    Malformed { path: String, reason: String },
    #[error(transparent)]
    Source(#[from] SourceError),
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedGraph {
    #[serde(flatten)]
    pub graph: TypeGraph,
    pub iterable: Vec<Label>,
    pub universe: Vec<Label>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedOracle {
    pub id: String,
    pub covered: Vec<Label>,
    pub sfc: Option<f64>,
    /// Number of conjoined properties, for decomposed invariants.
    #[serde(default)]
    pub properties: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedAggregate {
    pub covered: Vec<Label>,
    pub sfc: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
pub struct ExpectedCoverage {
    pub roots: Vec<String>,
    pub mode: OracleMode,
    #[serde(default)]
    pub selector: Option<String>,
    #[serde(default)]
    pub options: ReachOptions,
    #[serde(default)]
    pub family: Option<String>,
    pub universe: Vec<Label>,
    pub oracles: Vec<ExpectedOracle>,
    pub aggregate: ExpectedAggregate,
}

#[derive(Debug, Clone)]
pub struct FixtureCase {
    pub name: String,
    pub dir: PathBuf,
    pub graphs: Vec<ExpectedGraph>,
    pub coverage: Vec<ExpectedCoverage>,
}

#[derive(Deserialize)]
struct GraphFile {
    graphs: Vec<ExpectedGraph>,
}

#[derive(Deserialize)]
struct CoverageFile {
    cases: Vec<ExpectedCoverage>,
}

/// `fixtures/` at the workspace root.
pub fn default_fixture_root() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

fn read_json<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, FixtureError> {
    let malformed = |reason: String| FixtureError::Malformed { path: path.display().to_string(), reason };
    let text = std::fs::read_to_string(path).map_err(|e| malformed(e.to_string()))?;
    serde_json::from_str(&text).map_err(|e| malformed(e.to_string()))
}

pub fn load_fixture(root: &Path, name: &str) -> Result<FixtureCase, FixtureError> {
    let dir = root.join(name);
    if !dir.join("src").is_dir() {
        return Err(FixtureError::UnknownFixture(name.to_string()));
    }
    let graphs: GraphFile = read_json(&dir.join("expected_graph.json"))?;
    let coverage: CoverageFile = read_json(&dir.join("expected_coverage.json"))?;
    Ok(FixtureCase { name: name.to_string(), dir, graphs: graphs.graphs, coverage: coverage.cases })
}

/// Names of every fixture directory under `root`, sorted.
pub fn fixture_names(root: &Path) -> Vec<String> {
    let mut out: Vec<String> = std::fs::read_dir(root)
        .into_iter()
        .flatten()
        .flatten()
        .filter(|e| e.path().join("src").is_dir())
        .filter_map(|e| e.file_name().to_str().map(str::to_string))
        .collect();
    out.sort();
    out
}

impl FixtureCase {
    pub fn src_dir(&self) -> PathBuf {
        self.dir.join("src")
    }

    pub fn corpus(&self) -> Result<SourceCorpus, FixtureError> {
        Ok(load_corpus(&[self.src_dir()])?)
    }
}
