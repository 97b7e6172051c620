//! Output assembly: deterministic JSON documents (no timestamps) and CSV
//! tables for coefficient/zero listings.

use crate::config::{Family, OutputFormat, ResolvedJob};
use qortho::verify::CheckOutcome;
use serde_json::{json, Value};

pub struct Document {
    value: Value,
}

impl Document {
    pub fn new(job: &ResolvedJob, command: &str, result: Value, checks: Vec<CheckOutcome>) -> Self {
        let params = match &job.family {
            Family::Q { params, index } => json!({
                "family": "q",
                "v": params.ctx().v().to_string(),
                "q": params.ctx().q().to_string(),
                "p": params.p_vec().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "beta": params.beta_vec().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "N": params.big_n(),
                "index": index.entries(),
            }),
            Family::Classical { params, index } => json!({
                "family": "classical",
                "p": params.p_vec().iter().map(|x| x.to_string()).collect::<Vec<_>>(),
                "N": params.big_n(),
                "index": index.entries(),
            }),
        };
        let checks: Vec<Value> = checks
            .iter()
            .map(|c| serde_json::to_value(c).expect("check outcome serializes"))
            .collect();
        let value = json!({
            "params": params,
            "result": result,
            "checks": checks,
            "meta": {
                "tool": "qortho",
                "version": env!("CARGO_PKG_VERSION"),
                "command": command,
            },
        });
        Document { value }
    }
}

/// Write the document in the requested format. CSV is available only for the
/// commands that produce coefficient/zero tables (a csv string is supplied).
pub fn emit(job: &ResolvedJob, doc: Document, csv: Option<String>) -> Result<(), String> {
    let text = match job.format {
        OutputFormat::Json => {
            let mut body =
                serde_json::to_string_pretty(&doc.value).map_err(|e| e.to_string())?;
            body.push('\n');
            body
        }
        OutputFormat::Csv => csv.ok_or_else(|| {
            "csv output is provided for coefficient/zero tables only; use --format json".to_string()
        })?,
    };
    match &job.out {
        None => {
            print!("{text}");
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| format!("writing `{path}`: {e}")),
    }
}
