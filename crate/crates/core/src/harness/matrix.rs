//! Kill matrices, statement coverage matrices and failing-test lists.

use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use super::HarnessError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Outcome {
    Killed,
    Survived,
    /// The mutant crashed before any oracle ran.
    Trivial,
}

impl Outcome {
    pub fn code(self) -> char {
        match self {
            Outcome::Killed => 'K',
            Outcome::Survived => 'S',
            Outcome::Trivial => 'T',
        }
    }
}

fn reader(text: &str) -> csv::Reader<&[u8]> {
    csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .comment(Some(b'#'))
        .trim(csv::Trim::All)
        .from_reader(text.as_bytes())
}

fn records(text: &str) -> Result<Vec<(usize, Vec<String>)>, HarnessError> {
    let mut out = Vec::new();
    for rec in reader(text).records() {
        let rec = rec.map_err(|e| HarnessError::FormatError {
            line: e.position().map_or(0, |p| p.line() as usize),
            reason: e.to_string(),
        })?;
        let line = rec.position().map_or(0, |p| p.line() as usize);
        let fields: Vec<String> = rec.iter().map(str::to_string).collect();
        if fields.iter().all(String::is_empty) {
            continue;
        }
        out.push((line, fields));
    }
    Ok(out)
}

fn read(path: &Path) -> Result<String, HarnessError> {
    std::fs::read_to_string(path).map_err(|e| HarnessError::Io { path: path.display().to_string(), reason: e.to_string() })
}

/// Per-(test, mutant) outcomes. A mutant is trivial for the suite when any
/// test reports it as trivial; trivial mutants never count toward scores.
#[derive(Debug, Clone, PartialEq)]
pub struct KillMatrix {
    tests: Vec<String>,
    mutants: Vec<String>,
    cells: Vec<Vec<Outcome>>,
    index: BTreeMap<String, usize>,
    trivial: Vec<bool>,
}

impl KillMatrix {
    pub fn new(tests: Vec<String>, mutants: Vec<String>, cells: Vec<Vec<Outcome>>) -> Result<Self, HarnessError> {
        let mut index = BTreeMap::new();
        for (i, t) in tests.iter().enumerate() {
            if index.insert(t.clone(), i).is_some() {
                return Err(HarnessError::FormatError { line: i + 2, reason: format!("duplicate test id `{t}`") });
            }
        }
        let mut seen = BTreeSet::new();
        for m in &mutants {
            if !seen.insert(m) {
                return Err(HarnessError::FormatError { line: 1, reason: format!("duplicate mutant id `{m}`") });
            }
        }
        if cells.len() != tests.len() || cells.iter().any(|r| r.len() != mutants.len()) {
            return Err(HarnessError::FormatError { line: 0, reason: "matrix shape does not match its ids".into() });
        }
        let trivial = (0..mutants.len()).map(|j| cells.iter().any(|r| r[j] == Outcome::Trivial)).collect();
        Ok(KillMatrix { tests, mutants, cells, index, trivial })
    }

    /// Parse `test_id,<mutant>...` followed by one row of K/S/T cells per test.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let rows = records(text)?;
        let Some(((_, header), body)) = rows.split_first() else {
            return Err(HarnessError::FormatError { line: 1, reason: "missing header".into() });
        };
        if header.first().map(String::as_str) != Some("test_id") {
            return Err(HarnessError::FormatError { line: 1, reason: "header must start with `test_id`".into() });
        }
        let mutants: Vec<String> = header[1..].to_vec();
        if mutants.iter().any(String::is_empty) {
            return Err(HarnessError::FormatError { line: 1, reason: "empty mutant id".into() });
        }
        let mut tests = Vec::new();
        let mut cells = Vec::new();
        let mut seen = BTreeSet::new();
        for (line, row) in body {
            if row.len() != mutants.len() + 1 {
                return Err(HarnessError::FormatError {
                    line: *line,
                    reason: format!("expected {} cells, found {}", mutants.len() + 1, row.len()),
                });
            }
            let id = row[0].clone();
            if id.is_empty() {
                return Err(HarnessError::FormatError { line: *line, reason: "empty test id".into() });
            }
            if !seen.insert(id.clone()) {
                return Err(HarnessError::FormatError { line: *line, reason: format!("duplicate test id `{id}`") });
            }
            let mut out = Vec::with_capacity(mutants.len());
            for code in &row[1..] {
                out.push(match code.as_str() {
                    "K" | "k" => Outcome::Killed,
                    "S" | "s" => Outcome::Survived,
                    "T" | "t" => Outcome::Trivial,
                    other => return Err(HarnessError::UnknownOutcomeCode { line: *line, code: other.to_string() }),
                });
            }
            tests.push(id);
            cells.push(out);
        }
        KillMatrix::new(tests, mutants, cells)
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        KillMatrix::parse(&read(path)?)
    }

    pub fn tests(&self) -> &[String] {
        &self.tests
    }

    pub fn mutants(&self) -> &[String] {
        &self.mutants
    }

    pub fn contains_test(&self, id: &str) -> bool {
        self.index.contains_key(id)
    }

    pub fn outcome(&self, test: &str, mutant: usize) -> Option<Outcome> {
        self.index.get(test).map(|&i| self.cells[i][mutant])
    }

    pub fn is_trivial(&self, mutant: usize) -> bool {
        self.trivial[mutant]
    }

    /// Number of non-trivial mutants: the mutation score denominator.
    pub fn denominator(&self) -> usize {
        self.trivial.iter().filter(|t| !**t).count()
    }

    /// Non-trivial mutants killed by `test`; empty for tests not in the
    /// matrix.
    pub fn killed_by(&self, test: &str) -> BTreeSet<usize> {
        match self.index.get(test) {
            Some(&i) => (0..self.mutants.len())
                .filter(|&j| !self.trivial[j] && self.cells[i][j] == Outcome::Killed)
                .collect(),
            None => BTreeSet::new(),
        }
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("test_id");
        for m in &self.mutants {
            out.push(',');
            out.push_str(m);
        }
        out.push('\n');
        for (t, row) in self.tests.iter().zip(&self.cells) {
            out.push_str(t);
            for c in row {
                out.push(',');
                out.push(c.code());
            }
            out.push('\n');
        }
        out
    }
}

/// Statement ids covered by each test.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct CoverageMatrix {
    pub statements: BTreeMap<String, BTreeSet<String>>,
}

impl CoverageMatrix {
    /// Parse `test_id,stmt;stmt;...` rows. A leading `test_id,...` header is
    /// optional.
    pub fn parse(text: &str) -> Result<Self, HarnessError> {
        let mut statements = BTreeMap::new();
        for (k, (line, row)) in records(text)?.into_iter().enumerate() {
            if k == 0 && row[0] == "test_id" {
                continue;
            }
            if row.len() > 2 {
                return Err(HarnessError::FormatError { line, reason: "expected `test_id,stmt;stmt;...`".into() });
            }
            let id = row[0].clone();
            if id.is_empty() {
                return Err(HarnessError::FormatError { line, reason: "empty test id".into() });
            }
            let set: BTreeSet<String> = row
                .get(1)
                .map(|s| s.split(';').map(str::trim).filter(|s| !s.is_empty()).map(str::to_string).collect())
                .unwrap_or_default();
            if statements.insert(id.clone(), set).is_some() {
                return Err(HarnessError::FormatError { line, reason: format!("duplicate test id `{id}`") });
            }
        }
        Ok(CoverageMatrix { statements })
    }

    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        CoverageMatrix::parse(&read(path)?)
    }
}

/// One test id per line; blank lines and `#` comments are ignored.
pub fn parse_failing_tests(text: &str) -> BTreeSet<String> {
    text.lines().map(str::trim).filter(|l| !l.is_empty() && !l.starts_with('#')).map(str::to_string).collect()
}

pub fn load_failing_tests(path: &Path) -> Result<BTreeSet<String>, HarnessError> {
    Ok(parse_failing_tests(&read(path)?))
}
