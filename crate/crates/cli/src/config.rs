//! Run configuration: a `key = value` file, overridden by flags.

use std::path::{Path, PathBuf};

use clap::Args;
use serde::Serialize;
use sfcov_core::coverage::OracleMode;

use crate::error::CliError;

/// Flags shared by every subcommand. Each one overrides the same key in
/// the config file.
#[derive(Debug, Default, Args)]
pub struct Flags {
    /// Config file (`key = value` lines; paths relative to its directory)
    #[arg(long, value_name = "FILE")]
    pub config: Option<PathBuf>,
    /// Source roots (files or directories), comma separated or repeated
    #[arg(long = "src", value_name = "PATH", value_delimiter = ',')]
    pub sources: Vec<PathBuf>,
    /// Root classes, comma separated
    #[arg(long = "root", value_name = "CLASS", value_delimiter = ',')]
    pub roots: Vec<String>,
    /// Oracle kind: invariants or tests
    #[arg(long, value_name = "MODE")]
    pub oracles: Option<String>,
    /// Oracle method patterns, `[ClassPat#]methodPat` comma separated
    #[arg(long, value_name = "PATTERN")]
    pub selector: Option<String>,
    /// Callee-name prefixes marking assertion calls
    #[arg(long = "assert-prefix", value_name = "PREFIX", value_delimiter = ',')]
    pub assert_prefixes: Vec<String>,
    /// Treat field accesses in recursive methods as iteration
    #[arg(long)]
    pub recursion_as_iteration: bool,
    /// Only lexical loop bodies count as iteration
    #[arg(long)]
    pub strict_loop_bodies: bool,
    /// Leave superclass fields out of the type graph
    #[arg(long)]
    pub no_inherited: bool,
    /// Kill matrix CSV
    #[arg(long, value_name = "FILE")]
    pub kill: Option<PathBuf>,
    /// Statement coverage matrix CSV
    #[arg(long, value_name = "FILE")]
    pub coverage: Option<PathBuf>,
    /// Failing tests, one id per line
    #[arg(long, value_name = "FILE")]
    pub failing: Option<PathBuf>,
    /// Per-test label sidecar (written by `coverage`, read by `prioritize`)
    #[arg(long, value_name = "FILE")]
    pub labels: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub repetitions: Option<usize>,
    /// Directory for report files
    #[arg(long, value_name = "DIR")]
    pub out_dir: Option<PathBuf>,
    /// Stdout format: json, csv, text or dot
    #[arg(long = "out", value_name = "FORMAT")]
    pub format: Option<String>,
    #[arg(long)]
    pub project: Option<String>,
    #[arg(long)]
    pub bug_id: Option<String>,
}

#[derive(Debug, Clone, Serialize, PartialEq)]
pub struct RunConfig {
    pub sources: Vec<PathBuf>,
    pub roots: Vec<String>,
    pub oracles: OracleMode,
    pub selector: Option<String>,
    pub assert_prefixes: Vec<String>,
    pub recursion_as_iteration: bool,
    pub strict_loop_bodies: bool,
    pub no_inherited: bool,
    pub kill: Option<PathBuf>,
    pub coverage: Option<PathBuf>,
    pub failing: Option<PathBuf>,
    pub labels: Option<PathBuf>,
    pub seed: u64,
    pub repetitions: usize,
    pub out_dir: Option<PathBuf>,
    pub format: Option<String>,
    pub project: String,
    pub bug_id: String,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            sources: Vec::new(),
            roots: Vec::new(),
            oracles: OracleMode::Invariants,
            selector: None,
            assert_prefixes: vec!["assert".into()],
            recursion_as_iteration: false,
            strict_loop_bodies: false,
            no_inherited: false,
            kill: None,
            coverage: None,
            failing: None,
            labels: None,
            seed: 1,
            repetitions: 10,
            out_dir: None,
            format: None,
            project: String::new(),
            bug_id: String::new(),
        }
    }
}

fn list(v: &str) -> Vec<String> {
    v.split(',').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect()
}

fn parse_bool(v: &str) -> Option<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "1" | "on" => Some(true),
        "false" | "no" | "0" | "off" => Some(false),
        _ => None,
    }
}

impl RunConfig {
    /// Apply a config file. Keys use the long flag names, with `-`
    /// or `_` interchangeably.
    pub fn apply_file(&mut self, path: &Path) -> Result<(), CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        let rel = |v: &str| base.join(v);
        for (i, raw) in text.lines().enumerate() {
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |reason: String| CliError::Config { path: path.display().to_string(), line: i + 1, reason };
            let Some((key, value)) = line.split_once('=') else {
                return Err(bad(format!("expected `key = value`, found `{line}`")));
            };
            let key = key.trim().replace('_', "-");
            let value = value.trim();
            let flag = || parse_bool(value).ok_or_else(|| bad(format!("`{key}` expects true or false, found `{value}`")));
            let number = || bad(format!("`{key}` expects a non-negative integer, found `{value}`"));
            match key.as_str() {
                "src" | "sources" => self.sources = list(value).iter().map(|p| rel(p)).collect(),
                "root" | "roots" => self.roots = list(value),
                "oracles" => self.oracles = value.parse().map_err(|e: sfcov_core::coverage::CoverageError| bad(e.to_string()))?,
                "selector" => self.selector = Some(value.to_string()),
                "assert-prefix" | "assert-prefixes" => self.assert_prefixes = list(value),
                "recursion-as-iteration" => self.recursion_as_iteration = flag()?,
                "strict-loop-bodies" => self.strict_loop_bodies = flag()?,
                "no-inherited" => self.no_inherited = flag()?,
                "kill" => self.kill = Some(rel(value)),
                "coverage" => self.coverage = Some(rel(value)),
                "failing" => self.failing = Some(rel(value)),
                "labels" => self.labels = Some(rel(value)),
                "seed" => self.seed = value.parse().map_err(|_| number())?,
                "repetitions" => self.repetitions = value.parse().map_err(|_| number())?,
                "out-dir" => self.out_dir = Some(rel(value)),
                "out" | "format" => self.format = Some(value.to_string()),
                "project" => self.project = value.to_string(),
                "bug-id" => self.bug_id = value.to_string(),
                _ => return Err(bad(format!("unknown key `{key}`"))),
            }
        }
        Ok(())
    }

    pub fn from_flags(flags: &Flags) -> Result<Self, CliError> {
        let mut cfg = RunConfig::default();
        if let Some(p) = &flags.config {
            cfg.apply_file(p)?;
        }
        if !flags.sources.is_empty() {
            cfg.sources = flags.sources.clone();
        }
        if !flags.roots.is_empty() {
            cfg.roots = flags.roots.clone();
        }
        if let Some(m) = &flags.oracles {
            cfg.oracles = m.parse().map_err(|e: sfcov_core::coverage::CoverageError| CliError::Usage(e.to_string()))?;
        }
        if flags.selector.is_some() {
            cfg.selector = flags.selector.clone();
        }
        if !flags.assert_prefixes.is_empty() {
            cfg.assert_prefixes = flags.assert_prefixes.clone();
        }
        cfg.recursion_as_iteration |= flags.recursion_as_iteration;
        cfg.strict_loop_bodies |= flags.strict_loop_bodies;
        cfg.no_inherited |= flags.no_inherited;
        macro_rules! over {
            ($($f:ident),*) => { $( if flags.$f.is_some() { cfg.$f = flags.$f.clone(); } )* };
        }
        over!(kill, coverage, failing, labels, out_dir, format);
        if let Some(s) = flags.seed {
            cfg.seed = s;
        }
        if let Some(r) = flags.repetitions {
            cfg.repetitions = r;
        }
        if let Some(p) = &flags.project {
            cfg.project = p.clone();
        }
        if let Some(b) = &flags.bug_id {
            cfg.bug_id = b.clone();
        }
        Ok(cfg)
    }

    pub fn require_sources(&self) -> Result<(), CliError> {
        if self.sources.is_empty() {
            return Err(CliError::Usage("no source roots given (use --src or `src =` in the config)".into()));
        }
        Ok(())
    }

    pub fn require_roots(&self) -> Result<(), CliError> {
        if self.roots.is_empty() {
            return Err(CliError::Usage("no root class given (use --root or `root =` in the config)".into()));
        }
        Ok(())
    }
}
