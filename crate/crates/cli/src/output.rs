//! Report writing: provenance headers and atomic file replacement.

use std::io::Write;
use std::path::Path;

use serde_json::{json, Map, Value};

use crate::config::RunConfig;
use crate::error::CliError;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn provenance(cfg: &RunConfig) -> Value {
    json!({ "tool": TOOL, "version": VERSION, "config": cfg })
}

/// `body` with `tool`, `version` and `config` keys in front.
pub fn with_provenance(cfg: &RunConfig, body: Value) -> Value {
    let mut out = Map::new();
    if let Value::Object(p) = provenance(cfg) {
        out.extend(p);
    }
    match body {
        Value::Object(b) => out.extend(b),
        other => {
            out.insert("result".into(), other);
        }
    }
    Value::Object(out)
}

pub fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

/// `#` comment lines naming the tool and the effective config, for the top
/// of a CSV file.
pub fn csv_header(cfg: &RunConfig) -> String {
    format!("# {TOOL} {VERSION}\n# config: {}\n", serde_json::to_string(cfg).expect("config serializes"))
}

/// Write through a temporary file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &str) -> Result<(), CliError> {
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    std::fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(contents.as_bytes()).map_err(|e| CliError::io(path, e))?;
    tmp.as_file().sync_all().map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("sub/out.txt");
        write_atomic(&p, "one").unwrap();
        write_atomic(&p, "two").unwrap();
        assert_eq!(std::fs::read_to_string(&p).unwrap(), "two");
        assert_eq!(std::fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn provenance_leads() {
        let v = with_provenance(&RunConfig::default(), json!({"x": 1}));
        let keys: Vec<&String> = v.as_object().unwrap().keys().collect();
        assert_eq!(keys, ["tool", "version", "config", "x"]);
    }
}
