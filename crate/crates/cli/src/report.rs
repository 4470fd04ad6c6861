//! NDJSON run records and their CSV projection.
//!
//! Every line is `{config_hash, graph_id, metric, mode, payload, run_id,
//! stage}` with keys in lexicographic order at every nesting level. The
//! first line of a run has metric `run` and carries the resolved config and
//! the SHA-256 of each input file.

use std::collections::BTreeSet;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::{json, Map, Value};
use sha2::{Digest, Sha256};

pub const OUT_DIR_ENV: &str = "ERNKIT_OUT_DIR";

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes)
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct InputDigest {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

/// Reads every input exactly once so the hash and the parsed data agree.
#[derive(Debug, Default)]
pub struct Inputs {
    digests: Vec<InputDigest>,
}

impl Inputs {
    pub fn read(&mut self, role: &str, path: &Path) -> Result<Vec<u8>> {
        let bytes = fs::read(path).with_context(|| format!("reading {}", path.display()))?;
        self.digests.push(InputDigest {
            role: role.to_owned(),
            path: path.display().to_string(),
            sha256: sha256_hex(&bytes),
        });
        Ok(bytes)
    }

    pub fn digests(&self) -> &[InputDigest] {
        &self.digests
    }
}

pub struct Emitter {
    stage: &'static str,
    run_id: String,
    config_hash: String,
    records: Vec<Value>,
}

impl Emitter {
    pub fn new(stage: &'static str, config: &impl Serialize, inputs: &Inputs) -> Result<Self> {
        let config = serde_json::to_value(config)?;
        let config_hash = sha256_hex(json!({ "stage": stage, "config": config }).to_string().as_bytes());
        let mut h = config_hash.clone();
        for d in inputs.digests() {
            h.push(':');
            h.push_str(&d.sha256);
        }
        let run_id = sha256_hex(h.as_bytes())[..16].to_owned();
        let mut e = Emitter {
            stage,
            run_id,
            config_hash,
            records: Vec::new(),
        };
        let payload = json!({
            "config": config,
            "inputs": inputs.digests(),
            "version": env!("CARGO_PKG_VERSION"),
        });
        e.emit("", "run", None, payload)?;
        Ok(e)
    }

    pub fn emit(&mut self, graph_id: &str, metric: &str, mode: Option<&str>, payload: impl Serialize) -> Result<()> {
        let mut rec = Map::new();
        rec.insert("config_hash".into(), Value::String(self.config_hash.clone()));
        rec.insert("graph_id".into(), Value::String(graph_id.to_owned()));
        rec.insert("metric".into(), Value::String(metric.to_owned()));
        rec.insert("mode".into(), mode.map_or(Value::Null, |m| Value::String(m.to_owned())));
        rec.insert("payload".into(), serde_json::to_value(payload)?);
        rec.insert("run_id".into(), Value::String(self.run_id.clone()));
        rec.insert("stage".into(), Value::String(self.stage.to_owned()));
        self.records.push(Value::Object(rec));
        Ok(())
    }

    /// Emits one record per item.
    pub fn emit_rows<T: Serialize>(
        &mut self,
        graph_id: &str,
        metric: &str,
        mode: Option<&str>,
        rows: impl IntoIterator<Item = T>,
    ) -> Result<()> {
        for r in rows {
            self.emit(graph_id, metric, mode, r)?;
        }
        Ok(())
    }

    pub fn records(&self) -> &[Value] {
        &self.records
    }

    pub fn to_ndjson(&self) -> String {
        let mut s = String::new();
        for r in &self.records {
            s.push_str(&r.to_string());
            s.push('\n');
        }
        s
    }

    /// Writes the NDJSON to `out` (or the default location) and the CSV
    /// projection of `csv_metric` records to `csv`.
    pub fn finish(self, out: Option<&Path>, csv: Option<&Path>, csv_metric: &str) -> Result<()> {
        let text = self.to_ndjson();
        match resolve_out(self.stage, out) {
            Some(path) => write_file(&path, text.as_bytes())?,
            None => {
                let mut stdout = io::stdout().lock();
                stdout.write_all(text.as_bytes())?;
                stdout.flush()?;
            }
        }
        if let Some(path) = csv {
            let table = csv_projection(&self.records, csv_metric)?;
            write_file(path, table.as_bytes())?;
        }
        Ok(())
    }
}

fn resolve_out(stage: &str, out: Option<&Path>) -> Option<PathBuf> {
    if let Some(p) = out {
        return Some(p.to_owned());
    }
    let dir = std::env::var_os(OUT_DIR_ENV)?;
    Some(Path::new(&dir).join(format!("{stage}.ndjson")))
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(parent) = path.parent().filter(|p| !p.as_os_str().is_empty()) {
        fs::create_dir_all(parent).with_context(|| format!("creating {}", parent.display()))?;
    }
    fs::write(path, bytes).with_context(|| format!("writing {}", path.display()))
}

fn cell(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        other => other.to_string(),
    }
}

/// One CSV row per record of `metric`: `graph_id`, `mode`, then every
/// payload field (sorted). Nested payload values are written as JSON.
pub fn csv_projection(records: &[Value], metric: &str) -> Result<String> {
    let rows: Vec<&Value> = records.iter().filter(|r| r["metric"] == metric).collect();
    let mut columns = BTreeSet::new();
    for r in &rows {
        match &r["payload"] {
            Value::Object(m) => columns.extend(m.keys().cloned()),
            _ => {
                columns.insert("value".to_owned());
            }
        }
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["graph_id".to_owned(), "mode".to_owned()];
    header.extend(columns.iter().map(|c| match c.as_str() {
        "graph_id" | "mode" => format!("payload_{c}"),
        _ => c.clone(),
    }));
    w.write_record(&header)?;
    for r in rows {
        let mut line = vec![cell(&r["graph_id"]), cell(&r["mode"])];
        for c in &columns {
            let v = match &r["payload"] {
                Value::Object(m) => m.get(c).cloned().unwrap_or(Value::Null),
                other if c == "value" => other.clone(),
                _ => Value::Null,
            };
            line.push(cell(&v));
        }
        w.write_record(&line)?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}
