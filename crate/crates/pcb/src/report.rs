//! Merges offline and online outputs into one JSON document.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::commands::{config_path, ExperimentConfig};
use crate::error::{CliError, Result};
use crate::formats::{self, OfflineRow, SummaryRow, OFFLINE_HEADER, SUMMARY_HEADER};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OfflineSection {
    pub source: String,
    pub rows: Vec<OfflineRow>,
    pub contained: usize,
    pub containment_rate: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OnlineSection {
    pub source: String,
    pub policies: Vec<SummaryRow>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Report {
    pub version: String,
    pub inputs: Vec<String>,
    /// Configs found next to the inputs, in input order.
    pub config: Vec<ExperimentConfig>,
    pub offline: Vec<OfflineSection>,
    pub online: Vec<OnlineSection>,
}

fn header(path: &Path) -> Result<Vec<String>> {
    let mut r = csv::Reader::from_path(path).map_err(|e| CliError::parse(path, e))?;
    Ok(r.headers().map_err(|e| CliError::parse(path, e))?.iter().map(str::to_string).collect())
}

pub fn build_report(paths: &[PathBuf]) -> Result<Report> {
    if paths.is_empty() {
        return Err(CliError::Usage("report needs at least one input".into()));
    }
    let mut report = Report {
        version: crate::VERSION.into(),
        inputs: paths.iter().map(|p| p.display().to_string()).collect(),
        config: Vec::new(),
        offline: Vec::new(),
        online: Vec::new(),
    };
    for path in paths {
        if !path.exists() {
            return Err(CliError::io(path, std::io::ErrorKind::NotFound.into()));
        }
        let h = header(path)?;
        let source = path.display().to_string();
        if h == OFFLINE_HEADER {
            let rows: Vec<OfflineRow> = formats::read_csv(path, &OFFLINE_HEADER)?;
            let contained = rows.iter().filter(|r| r.contains).count();
            let containment_rate = if rows.is_empty() { 0.0 } else { contained as f64 / rows.len() as f64 };
            report.offline.push(OfflineSection { source, rows, contained, containment_rate });
        } else if h == SUMMARY_HEADER {
            let policies: Vec<SummaryRow> = formats::read_csv(path, &SUMMARY_HEADER)?;
            report.online.push(OnlineSection { source, policies });
        } else {
            return Err(CliError::parse(path, "neither an offline report nor an online summary"));
        }
        let side = config_path(path);
        if side.exists() {
            report.config.push(formats::read_json(&side)?);
        }
    }
    Ok(report)
}

pub fn cmd_report(paths: &[PathBuf], out: &Path) -> Result<PathBuf> {
    let report = build_report(paths)?;
    let path = out.join("report.json");
    formats::write_json(&path, &report)?;
    Ok(path)
}
