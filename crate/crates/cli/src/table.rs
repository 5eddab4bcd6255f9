use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::Serialize;

use crate::error::{CliError, CliResult};

/// One named series.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum Column {
    Float(Vec<f64>),
    Text(Vec<String>),
}

impl Column {
    pub fn len(&self) -> usize {
        match self {
            Column::Float(v) => v.len(),
            Column::Text(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    fn cell(&self, i: usize) -> String {
        match self {
            Column::Float(v) => format!("{:?}", v[i]),
            Column::Text(v) => v[i].clone(),
        }
    }
}

/// Run metadata written next to the CSV.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Metadata {
    pub experiment: String,
    /// Resolved configuration, defaults filled in.
    pub config: serde_json::Value,
    pub seed: u64,
    pub version: String,
    pub timestamp: String,
    /// Scalar or structured results.
    pub summary: BTreeMap<String, serde_json::Value>,
    pub warnings: Vec<String>,
}

/// Equal-length named columns plus metadata.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultTable {
    columns: Vec<(String, Column)>,
    pub metadata: Metadata,
}

impl ResultTable {
    pub fn new(experiment: &str, config: serde_json::Value, seed: u64) -> Self {
        Self {
            columns: Vec::new(),
            metadata: Metadata {
                experiment: experiment.to_string(),
                config,
                seed,
                version: env!("CARGO_PKG_VERSION").to_string(),
                timestamp: chrono::Utc::now().to_rfc3339(),
                summary: BTreeMap::new(),
                warnings: Vec::new(),
            },
        }
    }

    /// Appends a column; its length must match the existing ones.
    pub fn push(&mut self, name: impl Into<String>, column: Column) -> CliResult<()> {
        let name = name.into();
        if let Some((_, first)) = self.columns.first() {
            if first.len() != column.len() {
                return Err(CliError::Config(format!(
                    "column {name} has {} rows, expected {}",
                    column.len(),
                    first.len()
                )));
            }
        }
        if self.columns.iter().any(|(n, _)| *n == name) {
            return Err(CliError::Config(format!("duplicate column {name}")));
        }
        self.columns.push((name, column));
        Ok(())
    }

    pub fn push_float(&mut self, name: impl Into<String>, values: Vec<f64>) -> CliResult<()> {
        self.push(name, Column::Float(values))
    }

    pub fn push_text(&mut self, name: impl Into<String>, values: Vec<String>) -> CliResult<()> {
        self.push(name, Column::Text(values))
    }

    pub fn summarize(&mut self, key: impl Into<String>, value: impl Serialize) -> CliResult<()> {
        self.metadata.summary.insert(key.into(), serde_json::to_value(value)?);
        Ok(())
    }

    pub fn warn(&mut self, msg: impl Into<String>) {
        let msg = msg.into();
        log::warn!("{msg}");
        self.metadata.warnings.push(msg);
    }

    pub fn columns(&self) -> &[(String, Column)] {
        &self.columns
    }

    pub fn column(&self, name: &str) -> Option<&Column> {
        self.columns.iter().find(|(n, _)| n == name).map(|(_, c)| c)
    }

    pub fn float(&self, name: &str) -> Option<&[f64]> {
        match self.column(name)? {
            Column::Float(v) => Some(v),
            Column::Text(_) => None,
        }
    }

    pub fn text(&self, name: &str) -> Option<&[String]> {
        match self.column(name)? {
            Column::Text(v) => Some(v),
            Column::Float(_) => None,
        }
    }

    pub fn rows(&self) -> usize {
        self.columns.first().map_or(0, |(_, c)| c.len())
    }

    pub fn to_csv_string(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(self.columns.iter().map(|(n, _)| n.as_str()))?;
        for i in 0..self.rows() {
            w.write_record(self.columns.iter().map(|(_, c)| c.cell(i)))?;
        }
        let bytes = w.into_inner().map_err(|e| CliError::Io(e.into_error()))?;
        Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
    }

    pub fn metadata_json(&self) -> CliResult<String> {
        Ok(serde_json::to_string_pretty(&self.metadata)?)
    }

    /// Writes the CSV to `path` and the metadata to [`sidecar_path`].
    pub fn write(&self, path: &Path) -> CliResult<PathBuf> {
        if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
            std::fs::create_dir_all(dir)?;
        }
        std::fs::write(path, self.to_csv_string()?)?;
        let meta = sidecar_path(path);
        std::fs::write(&meta, self.metadata_json()?)?;
        Ok(meta)
    }
}

/// `results.csv` → `results.meta.json`.
pub fn sidecar_path(path: &Path) -> PathBuf {
    path.with_extension("meta.json")
}
