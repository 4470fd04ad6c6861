use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::{anyhow, Result};
use clap::Args;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::{Emitter, Inputs};
use crate::Output;

const KEYS: [&str; 7] = ["config_hash", "graph_id", "metric", "mode", "payload", "run_id", "stage"];

#[derive(Debug, Args, Serialize)]
pub struct ReportArgs {
    /// NDJSON files written by earlier stages.
    #[arg(long = "in", required = true, num_args = 1..)]
    pub inputs: Vec<PathBuf>,
    /// Metric projected by --csv.
    #[arg(long, default_value = "summary")]
    pub metric: String,
}

pub fn run(args: ReportArgs, output: &Output) -> Result<()> {
    let mut inputs = Inputs::default();
    let mut records = Vec::new();
    for path in &args.inputs {
        let bytes = inputs.read("ndjson", path)?;
        let text = String::from_utf8(bytes).map_err(|_| anyhow!("{} is not UTF-8", path.display()))?;
        for (i, line) in text.lines().enumerate() {
            if line.trim().is_empty() {
                continue;
            }
            let v: Value = serde_json::from_str(line)
                .map_err(|e| anyhow!("{}:{}: invalid JSON: {e}", path.display(), i + 1))?;
            let Some(obj) = v.as_object() else {
                return Err(anyhow!("{}:{}: record is not an object", path.display(), i + 1));
            };
            if let Some(k) = KEYS.iter().find(|k| !obj.contains_key(**k)) {
                return Err(anyhow!("{}:{}: record lacks `{k}`", path.display(), i + 1));
            }
            records.push(v);
        }
    }

    let mut counts: BTreeMap<(String, String, String), usize> = BTreeMap::new();
    let mut configs: BTreeMap<String, Value> = BTreeMap::new();
    for r in &records {
        let s = |k: &str| r[k].as_str().unwrap_or_default().to_owned();
        *counts.entry((s("run_id"), s("stage"), s("metric"))).or_insert(0) += 1;
        if r["metric"] == "run" {
            configs.insert(s("run_id"), r["payload"]["config"].clone());
        }
    }
    let mut em = Emitter::new("report", &args, &inputs)?;
    for ((run_id, stage, metric), n) in &counts {
        em.emit(
            "",
            "record_count",
            None,
            json!({ "run_id": run_id, "stage": stage, "metric": metric, "records": n }),
        )?;
    }
    em.emit("", "report_summary", None, json!({ "records": records.len(), "runs": configs.len() }))?;
    // Projected rows keep their originating run in graph_id/mode columns.
    let table = crate::report::csv_projection(&records, &args.metric)?;
    if let Some(path) = &output.csv {
        crate::report::write_file(path, table.as_bytes())?;
    }
    let quiet = Output {
        out: output.out.clone(),
        csv: None,
        csv_metric: None,
    };
    quiet.finish(em, &args.metric)
}
