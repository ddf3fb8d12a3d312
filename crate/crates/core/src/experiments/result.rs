// Copyright 2026 qdatabus Contributors
// SPDX-License-Identifier: Apache-2.0

//! Experiment output: labeled columns, summary scalars and their serialization.

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::config::{ExperimentConfig, ExperimentKind};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "csv" => Ok(Self::Csv),
            "json" => Ok(Self::Json),
            other => Err(Error::Config(format!("unknown output format `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub experiment: ExperimentKind,
    pub version: String,
    /// Seconds since the Unix epoch from `SOURCE_DATE_EPOCH`, if set.
    pub timestamp: Option<i64>,
    pub config: ExperimentConfig,
}

impl Metadata {
    pub fn new(experiment: ExperimentKind, config: ExperimentConfig) -> Self {
        Self {
            experiment,
            version: crate::VERSION.to_string(),
            timestamp: std::env::var("SOURCE_DATE_EPOCH")
                .ok()
                .and_then(|s| s.trim().parse().ok()),
            config,
        }
    }
}

/// Named columns of equal length.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table {
    pub name: String,
    pub columns: Vec<String>,
    pub data: Vec<Vec<f64>>,
}

impl Table {
    pub fn new(name: impl Into<String>, columns: Vec<(&str, Vec<f64>)>) -> Result<Self> {
        let name = name.into();
        let len = columns.first().map_or(0, |c| c.1.len());
        if let Some((col, v)) = columns.iter().find(|c| c.1.len() != len) {
            return Err(Error::Numerical(format!(
                "table `{name}`: column `{col}` has {} rows, expected {len}",
                v.len()
            )));
        }
        Ok(Self {
            name,
            columns: columns.iter().map(|c| c.0.to_string()).collect(),
            data: columns.into_iter().map(|c| c.1).collect(),
        })
    }

    pub fn rows(&self) -> usize {
        self.data.first().map_or(0, Vec::len)
    }

    pub fn column(&self, name: &str) -> Option<&[f64]> {
        self.columns
            .iter()
            .position(|c| c == name)
            .map(|i| self.data[i].as_slice())
    }

    fn to_csv(&self, metadata: &Metadata) -> String {
        let mut header = serde_json::Map::new();
        header.insert("table".into(), Value::String(self.name.clone()));
        header.insert(
            "metadata".into(),
            serde_json::to_value(metadata).expect("metadata serializes"),
        );
        let mut out = format!("# {}\n", Value::Object(header));
        out.push_str(&self.columns.join(","));
        out.push('\n');
        for r in 0..self.rows() {
            let row: Vec<String> = self.data.iter().map(|col| format_float(col[r])).collect();
            out.push_str(&row.join(","));
            out.push('\n');
        }
        out
    }
}

/// 17 significant digits in scientific notation; `nan`/`inf` spelled out.
pub fn format_float(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.to_string()
    } else {
        format!("{x:.16e}")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    pub metadata: Metadata,
    pub tables: Vec<Table>,
    pub summary: BTreeMap<String, Value>,
    pub warnings: Vec<String>,
}

impl ExperimentResult {
    pub fn new(experiment: ExperimentKind, config: ExperimentConfig) -> Self {
        Self {
            metadata: Metadata::new(experiment, config),
            tables: Vec::new(),
            summary: BTreeMap::new(),
            warnings: Vec::new(),
        }
    }

    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        self.summary.insert(
            key.to_string(),
            serde_json::to_value(value).expect("summary value serializes"),
        );
    }

    /// Summary scalar as `f64`, if present and numeric.
    pub fn scalar(&self, key: &str) -> Option<f64> {
        self.summary.get(key).and_then(Value::as_f64)
    }

    fn stem(&self) -> &'static str {
        match self.metadata.experiment {
            ExperimentKind::Transfer => "transfer",
            ExperimentKind::CompareApprox => "compare_approx",
            ExperimentKind::Wstate => "wstate",
            ExperimentKind::Scaling => "scaling",
            ExperimentKind::Disorder => "disorder",
            ExperimentKind::NodeParity => "node_parity",
        }
    }

    fn summary_document(&self) -> Value {
        let mut doc = serde_json::Map::new();
        doc.insert(
            "metadata".into(),
            serde_json::to_value(&self.metadata).expect("serializes"),
        );
        doc.insert(
            "summary".into(),
            serde_json::to_value(&self.summary).expect("serializes"),
        );
        doc.insert(
            "warnings".into(),
            serde_json::to_value(&self.warnings).expect("serializes"),
        );
        Value::Object(doc)
    }

    /// Writes the run into `dir` and returns the written paths.
    ///
    /// CSV: one `<stem>_<table>.csv` per table plus `<stem>_summary.json`.
    /// JSON: a single `<stem>.json` holding everything, plus the summary file.
    pub fn write(&self, dir: &Path, format: OutputFormat) -> Result<Vec<PathBuf>> {
        fs::create_dir_all(dir)?;
        let mut written = Vec::new();
        let stem = self.stem();
        match format {
            OutputFormat::Csv => {
                for table in &self.tables {
                    let path = dir.join(format!("{stem}_{}.csv", table.name));
                    write_file(&path, &table.to_csv(&self.metadata))?;
                    written.push(path);
                }
            }
            OutputFormat::Json => {
                let path = dir.join(format!("{stem}.json"));
                let text = serde_json::to_string_pretty(self)?;
                write_file(&path, &(text + "\n"))?;
                written.push(path);
            }
        }
        let path = dir.join(format!("{stem}_summary.json"));
        write_file(&path, &(serde_json::to_string_pretty(&self.summary_document())? + "\n"))?;
        written.push(path);
        Ok(written)
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    let mut f = fs::File::create(path)?;
    f.write_all(contents.as_bytes())?;
    Ok(())
}
