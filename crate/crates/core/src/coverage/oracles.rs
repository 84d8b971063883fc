//! Selecting oracle entry points from a corpus.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use regex::Regex;
use serde::{Deserialize, Serialize};

use super::CoverageError;
use crate::source::{visit_exprs, ClassDecl, ExprKind, MethodDecl, MethodId, SourceCorpus, Span};

pub const DEFAULT_INVARIANT_PATTERN: &str = "repOK|inv.*|check.*";
pub const DEFAULT_TEST_PATTERN: &str = ".*";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleMode {
    Invariants,
    Tests,
}

impl FromStr for OracleMode {
    type Err = CoverageError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "invariants" | "invariant" => Ok(OracleMode::Invariants),
            "tests" | "test" => Ok(OracleMode::Tests),
            _ => Err(CoverageError::InvalidMode(s.to_string())),
        }
    }
}

impl fmt::Display for OracleMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OracleMode::Invariants => "invariants",
            OracleMode::Tests => "tests",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OracleKind {
    InvariantMethod,
    TestAssertions,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct OracleSpec {
    /// `Class#method/arity` for invariants, `TestClass#method` for tests.
    pub id: String,
    pub kind: OracleKind,
    pub method: MethodId,
    /// Spans of the assertion calls inside a test method. Empty for
    /// invariant methods, whose whole body is the entry.
    pub assertions: Vec<Span>,
    pub targets: Vec<String>,
}

/// Comma-separated method patterns, each optionally prefixed by a class
/// pattern as `Class#method`. Patterns are regular expressions matched
/// against the whole name; class patterns match the qualified or simple
/// class name.
#[derive(Debug, Clone)]
pub struct Selector {
    text: String,
    items: Vec<(Option<Regex>, Regex)>,
}

fn anchored(p: &str) -> Result<Regex, CoverageError> {
    Regex::new(&format!("^(?:{p})$")).map_err(|e| CoverageError::InvalidSelector(format!("{p}: {e}")))
}

impl Selector {
    pub fn parse(text: &str) -> Result<Self, CoverageError> {
        let mut items = Vec::new();
        for part in text.split(',').map(str::trim).filter(|p| !p.is_empty()) {
            let item = match part.split_once('#') {
                Some((c, m)) => (Some(anchored(c)?), anchored(m)?),
                None => (None, anchored(part)?),
            };
            items.push(item);
        }
        if items.is_empty() {
            return Err(CoverageError::InvalidSelector(format!("empty selector `{text}`")));
        }
        Ok(Selector { text: text.to_string(), items })
    }

    pub fn default_for(mode: OracleMode) -> Self {
        let p = match mode {
            OracleMode::Invariants => DEFAULT_INVARIANT_PATTERN,
            OracleMode::Tests => DEFAULT_TEST_PATTERN,
        };
        Selector::parse(p).expect("default pattern is valid")
    }

    pub fn as_str(&self) -> &str {
        &self.text
    }

    pub fn matches(&self, class: &ClassDecl, method: &MethodDecl) -> bool {
        self.items.iter().any(|(c, m)| {
            m.is_match(&method.name) && c.as_ref().is_none_or(|c| c.is_match(&class.name) || c.is_match(&class.simple_name))
        })
    }
}

#[derive(Debug, Clone)]
pub struct OracleQuery {
    pub mode: OracleMode,
    pub selector: Selector,
    /// Callee-name prefixes that mark a call as an assertion.
    pub assert_prefixes: Vec<String>,
}

impl OracleQuery {
    pub fn new(mode: OracleMode) -> Self {
        OracleQuery { mode, selector: Selector::default_for(mode), assert_prefixes: vec!["assert".to_string()] }
    }

    pub fn with_selector(mut self, selector: Selector) -> Self {
        self.selector = selector;
        self
    }
}

fn is_test_method(m: &MethodDecl) -> bool {
    m.has_annotation("Test") || m.name.starts_with("test")
}

/// Spans of calls in `m` whose callee name starts with one of `prefixes`.
pub fn assertion_calls(m: &MethodDecl, prefixes: &[String]) -> Vec<Span> {
    let mut out = Vec::new();
    if let Some(body) = &m.body {
        visit_exprs(body, &mut |e| {
            if let ExprKind::MethodCall { name, .. } = &e.kind {
                if prefixes.iter().any(|p| name.starts_with(p.as_str())) {
                    out.push(e.span);
                }
            }
        });
    }
    out
}

/// Oracles selected by `query`, sorted by id.
///
/// Invariant mode looks at boolean-returning methods of the root classes and
/// the classes nested in them; test mode looks at every class in the corpus.
pub fn extract_oracles(corpus: &SourceCorpus, roots: &[String], query: &OracleQuery) -> Result<Vec<OracleSpec>, CoverageError> {
    let root_names: BTreeSet<String> = roots.iter().filter_map(|r| corpus.find_class(r)).map(|c| c.name.clone()).collect();
    let targets: Vec<String> = root_names.iter().cloned().collect();
    let mut out = Vec::new();

    for class in corpus.classes.values() {
        let in_root = root_names.iter().any(|r| class.name == *r || class.name.starts_with(&format!("{r}.")));
        for (index, m) in class.methods.iter().enumerate() {
            if m.body.is_none() || m.is_constructor || !query.selector.matches(class, m) {
                continue;
            }
            let method = MethodId { class: class.name.clone(), index };
            match query.mode {
                OracleMode::Invariants if in_root && m.returns_boolean() => out.push(OracleSpec {
                    id: format!("{}#{}/{}", class.name, m.name, m.arity()),
                    kind: OracleKind::InvariantMethod,
                    method,
                    assertions: Vec::new(),
                    targets: targets.clone(),
                }),
                OracleMode::Tests if is_test_method(m) => out.push(OracleSpec {
                    id: format!("{}#{}", class.name, m.name),
                    kind: OracleKind::TestAssertions,
                    method,
                    assertions: assertion_calls(m, &query.assert_prefixes),
                    targets: targets.clone(),
                }),
                _ => {}
            }
        }
    }
    if out.is_empty() {
        return Err(CoverageError::NoOraclesFound(query.selector.as_str().to_string()));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    out.dedup_by(|a, b| a.id == b.id);
    Ok(out)
}
