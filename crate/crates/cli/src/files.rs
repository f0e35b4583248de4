//! Tree files and the result CSV.

use std::fs::{self, OpenOptions};
use std::path::Path;

use anyhow::{bail, Context, Result};
use contrakt::network::CostReport;
use contrakt::{ContractionTree, Objective};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

pub const CSV_HEADER: [&str; 6] = [
    "network",
    "objective",
    "seed",
    "attempts",
    "value",
    "wall_s",
];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CsvRow {
    pub network: String,
    pub objective: Objective,
    pub seed: u64,
    pub attempts: usize,
    pub value: f64,
    pub wall_s: f64,
}

/// Report as stored next to a tree.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoredReport {
    pub total_ops_log2: Option<f64>,
    pub vertex_congestion: f64,
    pub edge_congestion: f64,
    pub objective: Objective,
}

impl StoredReport {
    pub fn matches(&self, report: &CostReport<f64>) -> bool {
        self.total_ops_log2 == report.total_ops_log2
            && self.vertex_congestion == report.vertex_congestion
            && self.edge_congestion == report.edge_congestion
            && self.objective == report.objective
    }
}

pub fn write_tree(path: &Path, tree: &ContractionTree, report: &CostReport<f64>) -> Result<()> {
    let doc = json!({ "tree": tree.to_json(), "report": report.to_json() });
    let mut text = serde_json::to_string_pretty(&doc)?;
    text.push('\n');
    fs::write(path, text).with_context(|| format!("writing tree file {}", path.display()))
}

/// Accepts `{"tree": node, "report": {...}}` or a bare tree node.
pub fn read_tree(path: &Path) -> Result<(ContractionTree, Option<StoredReport>)> {
    let text = fs::read_to_string(path)
        .with_context(|| format!("reading tree file {}", path.display()))?;
    let mut de = serde_json::Deserializer::from_str(&text);
    de.disable_recursion_limit();
    let doc = Value::deserialize(&mut de)
        .with_context(|| format!("parsing tree file {}", path.display()))?;
    match doc {
        Value::Object(mut m) if m.contains_key("tree") => {
            let tree = ContractionTree::from_json(&m["tree"])?;
            let report = match m.remove("report") {
                Some(r) => Some(serde_json::from_value(r).context("parsing stored report")?),
                None => None,
            };
            if m.len() != 1 {
                bail!("tree file has keys other than `tree` and `report`");
            }
            Ok((tree, report))
        }
        other => Ok((ContractionTree::from_json(&other)?, None)),
    }
}

/// Append rows, writing the header first when the file is missing or empty.
pub fn append_rows(path: &Path, rows: &[CsvRow]) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)
        .with_context(|| format!("opening {}", path.display()))?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_rows(path: &Path) -> Result<Vec<CsvRow>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    let header: Vec<String> = r.headers()?.iter().map(str::to_owned).collect();
    if header != CSV_HEADER {
        bail!(
            "{} has header {:?}, expected {:?}",
            path.display(),
            header,
            CSV_HEADER
        );
    }
    r.deserialize()
        .collect::<Result<Vec<CsvRow>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}
