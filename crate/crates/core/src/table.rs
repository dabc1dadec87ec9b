//! Tab-delimited numeric tables with a commented `key=value` header.
//!
//! ```text
//! # material=LiNbO3-e
//! # g=1
//! # columns=omega_tilde<TAB>sigma
//! -5e0<TAB>1.0377e0
//! ```
//!
//! Numbers are written in shortest round-trip scientific notation, so parsing
//! a written table restores every value bit for bit.

use std::fmt::Write as _;
use std::path::Path;

use crate::error::{MopoError, Result};

const COLUMNS_KEY: &str = "columns";

#[derive(Debug, Clone, PartialEq, Default)]
pub struct DataTable {
    pub metadata: Vec<(String, String)>,
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl DataTable {
    pub fn new(columns: Vec<String>) -> Self {
        Self {
            metadata: Vec::new(),
            columns,
            rows: Vec::new(),
        }
    }

    pub fn push_meta(&mut self, key: impl Into<String>, value: impl ToString) {
        self.metadata.push((key.into(), value.to_string()));
    }

    pub fn meta(&self, key: &str) -> Option<&str> {
        self.metadata
            .iter()
            .find(|(k, _)| k == key)
            .map(|(_, v)| v.as_str())
    }

    pub fn push_row(&mut self, row: Vec<f64>) -> Result<()> {
        if row.len() != self.columns.len() {
            return Err(MopoError::Table(format!(
                "row has {} values, table has {} columns",
                row.len(),
                self.columns.len()
            )));
        }
        self.rows.push(row);
        Ok(())
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let idx = self.columns.iter().position(|c| c == name)?;
        Some(self.rows.iter().map(|r| r[idx]).collect())
    }

    pub fn render(&self) -> Result<String> {
        let mut out = String::new();
        for (k, v) in &self.metadata {
            if k.is_empty() || k.contains('=') || k.contains('\n') || v.contains('\n') {
                return Err(MopoError::Table(format!("unwritable metadata entry '{k}'")));
            }
            let _ = writeln!(out, "# {k}={v}");
        }
        let _ = writeln!(out, "# {COLUMNS_KEY}={}", self.columns.join("\t"));
        for row in &self.rows {
            let line: Vec<String> = row.iter().map(|x| format!("{x:e}")).collect();
            out.push_str(&line.join("\t"));
            out.push('\n');
        }
        Ok(out)
    }

    pub fn parse(text: &str) -> Result<Self> {
        let mut table = DataTable::default();
        let mut have_columns = false;
        for (lineno, line) in text.lines().enumerate() {
            if let Some(header) = line.strip_prefix('#') {
                let header = header.strip_prefix(' ').unwrap_or(header);
                let (k, v) = header.split_once('=').ok_or_else(|| {
                    MopoError::Table(format!("line {}: header without '='", lineno + 1))
                })?;
                if k == COLUMNS_KEY {
                    table.columns = v.split('\t').map(str::to_string).collect();
                    have_columns = true;
                } else {
                    table.metadata.push((k.to_string(), v.to_string()));
                }
                continue;
            }
            if line.trim().is_empty() {
                continue;
            }
            if !have_columns {
                return Err(MopoError::Table("data before the columns header".into()));
            }
            let row = line
                .split('\t')
                .map(|f| {
                    f.parse::<f64>()
                        .map_err(|e| MopoError::Table(format!("line {}: '{f}': {e}", lineno + 1)))
                })
                .collect::<Result<Vec<f64>>>()?;
            table.push_row(row)?;
        }
        if !have_columns {
            return Err(MopoError::Table("missing columns header".into()));
        }
        Ok(table)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        std::fs::write(path, self.render()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }
}
