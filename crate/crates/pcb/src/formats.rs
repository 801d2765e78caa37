//! On-disk formats.
//!
//! Graph JSON:
//! `{"nodes": [{"name": "X", "kind": "observed"}], "edges": [["X", "Y"]], "bidirected": [["X", "Y"]]}`
//!
//! Model JSON is a graph JSON plus `"cpts": {"name": [p, ...]}`, giving
//! `P(name = 1 | parents)` for every node. Parents are read in alphabetical
//! order, first parent as the most significant bit of the row index.
//!
//! Datasets are CSV with one 0/1 column per observed variable, plus a
//! `<stem>.meta.json` sidecar ([`DatasetMeta`]).
//!
//! Paths of the form `builtin:synthetic-graph` and `builtin:synthetic` name the
//! bundled fixtures.

use std::collections::BTreeMap;
use std::fs;
use std::path::{Path, PathBuf};

use pcb_core::{fixtures, CausalGraph, Dataset, DiscreteScm, GraphBuilder, NodeKind};
use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};

use crate::error::{CliError, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NodeSpec {
    pub name: String,
    pub kind: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GraphFile {
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
}

impl GraphFile {
    pub fn from_graph(g: &CausalGraph) -> Self {
        GraphFile {
            nodes: g
                .nodes()
                .iter()
                .map(|v| NodeSpec { name: g.name(v).to_string(), kind: g.kind(v).as_str().to_string() })
                .collect(),
            edges: g.directed_edges().map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect(),
            bidirected: g.bidirected_edges().map(|(a, b)| (g.name(a).to_string(), g.name(b).to_string())).collect(),
        }
    }

    pub fn build(&self) -> Result<CausalGraph> {
        let mut b = GraphBuilder::new();
        for n in &self.nodes {
            b = b.node(&n.name, n.kind.parse::<NodeKind>()?);
        }
        for (f, t) in &self.edges {
            b = b.edge(f, t);
        }
        for (f, t) in &self.bidirected {
            b = b.bidirected(f, t);
        }
        Ok(b.build()?)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    pub nodes: Vec<NodeSpec>,
    #[serde(default)]
    pub edges: Vec<(String, String)>,
    #[serde(default)]
    pub bidirected: Vec<(String, String)>,
    pub cpts: BTreeMap<String, Vec<f64>>,
}

impl ModelFile {
    pub fn from_model(m: &DiscreteScm) -> Self {
        let g = m.graph();
        let GraphFile { nodes, edges, bidirected } = GraphFile::from_graph(g);
        ModelFile {
            nodes,
            edges,
            bidirected,
            cpts: g.nodes().iter().map(|v| (g.name(v).to_string(), m.cpt(v).to_vec())).collect(),
        }
    }

    pub fn graph_file(&self) -> GraphFile {
        GraphFile { nodes: self.nodes.clone(), edges: self.edges.clone(), bidirected: self.bidirected.clone() }
    }

    pub fn build(&self) -> Result<DiscreteScm> {
        let g = self.graph_file().build()?;
        Ok(DiscreteScm::new(g, self.cpts.iter().map(|(k, v)| (k.as_str(), v.clone())))?)
    }
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T> {
    serde_json::from_str(&read_to_string(path)?).map_err(|e| CliError::parse(path, e))
}

pub fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut s = serde_json::to_string_pretty(value).expect("report types serialize");
    s.push('\n');
    write_file(path, s.as_bytes())
}

pub fn write_file(path: &Path, bytes: &[u8]) -> Result<()> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    }
    fs::write(path, bytes).map_err(|e| CliError::io(path, e))
}

pub fn load_graph(spec: &str) -> Result<CausalGraph> {
    match spec {
        "builtin:synthetic-graph" => Ok(fixtures::synthetic_graph()),
        "builtin:synthetic" => Ok(fixtures::synthetic_model().graph().clone()),
        _ if spec.starts_with("builtin:") => Err(CliError::Usage(format!("unknown builtin `{spec}`"))),
        path => {
            let path = Path::new(path);
            // a model file is also a valid graph source
            let value: serde_json::Value = read_json(path)?;
            if value.get("cpts").is_some() {
                let m: ModelFile = serde_json::from_value(value).map_err(|e| CliError::parse(path, e))?;
                return m.graph_file().build();
            }
            let g: GraphFile = serde_json::from_value(value).map_err(|e| CliError::parse(path, e))?;
            g.build()
        }
    }
}

pub fn load_model(spec: &str) -> Result<DiscreteScm> {
    match spec {
        "builtin:synthetic" => Ok(fixtures::synthetic_model()),
        _ if spec.starts_with("builtin:") => Err(CliError::Usage(format!("unknown builtin model `{spec}`"))),
        path => read_json::<ModelFile>(Path::new(path))?.build(),
    }
}

/// Sidecar written next to every generated dataset.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct DatasetMeta {
    pub model: String,
    pub seed: u64,
    pub n_pre: usize,
    pub retained: usize,
    pub retention_rate: f64,
    pub columns: Vec<String>,
}

pub fn meta_path(csv: &Path) -> PathBuf {
    let stem = csv.file_stem().and_then(|s| s.to_str()).unwrap_or("data");
    csv.with_file_name(format!("{stem}.meta.json"))
}

pub fn dataset_csv(data: &Dataset) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(&data.columns).expect("in-memory write");
    let mut row = Vec::with_capacity(data.columns.len());
    for &bits in &data.rows {
        row.clear();
        row.extend((0..data.columns.len()).map(|i| if bits >> i & 1 == 1 { "1" } else { "0" }));
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn write_dataset(path: &Path, data: &Dataset, meta: &DatasetMeta) -> Result<()> {
    write_file(path, &dataset_csv(data))?;
    write_json(&meta_path(path), meta)
}

/// Reads a dataset CSV. `n_pre` comes from the sidecar when present,
/// otherwise it is the number of rows.
pub fn read_dataset(path: &Path) -> Result<Dataset> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::parse(path, e))?;
    let columns: Vec<String> =
        r.headers().map_err(|e| CliError::parse(path, e))?.iter().map(str::to_string).collect();
    if columns.len() > 63 {
        return Err(CliError::parse(path, "too many columns"));
    }
    let mut rows = Vec::new();
    for (line, rec) in r.records().enumerate() {
        let rec = rec.map_err(|e| CliError::parse(path, e))?;
        let mut bits = 0u64;
        for (i, cell) in rec.iter().enumerate() {
            match cell.trim() {
                "0" => {}
                "1" => bits |= 1 << i,
                other => {
                    return Err(CliError::parse(path, format!("row {}: value `{other}` is not 0 or 1", line + 2)));
                }
            }
        }
        rows.push(bits);
    }
    let meta = meta_path(path);
    let n_pre = if meta.exists() { read_json::<DatasetMeta>(&meta)?.n_pre } else { rows.len() };
    Ok(Dataset { columns, rows, n_pre })
}

pub const BOUNDS_HEADER: [&str; 11] = [
    "context", "arm", "lower", "upper", "lower_src", "upper_src", "crossed", "widened", "lower_estimand",
    "upper_estimand", "warning",
];

pub const OFFLINE_HEADER: [&str; 9] = ["context", "arm", "cp", "biased", "lb", "ub", "truth", "contains", "flag"];

pub const CURVE_HEADER: [&str; 3] = ["round", "mean_regret", "stderr"];

pub const SUMMARY_HEADER: [&str; 6] = ["policy", "rounds", "replications", "final_mean", "final_stderr", "fallbacks"];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OfflineRow {
    pub context: String,
    pub arm: String,
    pub cp: Option<f64>,
    pub biased: Option<f64>,
    pub lb: f64,
    pub ub: f64,
    pub truth: f64,
    pub contains: bool,
    /// Empty unless some estimate was undefined or the bound was widened.
    pub flag: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub policy: String,
    pub rounds: usize,
    pub replications: usize,
    pub final_mean: f64,
    pub final_stderr: f64,
    pub fallbacks: u64,
}

pub fn to_csv<T: Serialize>(header: &[&str], rows: &[T]) -> Vec<u8> {
    let mut w = csv::WriterBuilder::new().has_headers(false).from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for r in rows {
        w.serialize(r).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

/// Reads rows after checking the header matches exactly.
pub fn read_csv<T: DeserializeOwned>(path: &Path, header: &[&str]) -> Result<Vec<T>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::parse(path, e))?;
    let got: Vec<String> = r.headers().map_err(|e| CliError::parse(path, e))?.iter().map(str::to_string).collect();
    if got != header {
        return Err(CliError::parse(path, format!("unexpected header {got:?}")));
    }
    r.deserialize().map(|row| row.map_err(|e| CliError::parse(path, e))).collect()
}
