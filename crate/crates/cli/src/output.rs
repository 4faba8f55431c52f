//! Rendering of command results as aligned tables or JSON records.

use std::path::Path;

use num_rational::Ratio;
use serde::Serialize;
use serde_json::Value;

use crate::error::CliError;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, clap::ValueEnum)]
pub enum Format {
    #[default]
    Table,
    Records,
}

/// Provenance stamped on every output.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Meta {
    pub record: &'static str,
    pub command: &'static str,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub config_hash: Option<String>,
}

impl Meta {
    pub fn new(command: &'static str, config_hash: Option<String>) -> Self {
        Meta {
            record: "meta",
            command,
            tool_version: TOOL_VERSION,
            config_hash,
        }
    }

    fn banner(&self) -> String {
        match &self.config_hash {
            Some(h) => format!(
                "# firebreak {} {} config sha256:{h}",
                self.tool_version, self.command
            ),
            None => format!("# firebreak {} {}", self.tool_version, self.command),
        }
    }
}

/// What a command produced: both renderings of its result, plus files to
/// write into the output directory.
#[derive(Debug, Clone)]
pub struct Output {
    pub meta: Meta,
    pub table: String,
    pub records: Vec<Value>,
    pub files: Vec<(String, String)>,
}

impl Output {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Table => format!("{}\n{}", self.meta.banner(), self.table),
            Format::Records => {
                let mut out = json_line(&self.meta);
                for r in &self.records {
                    out.push_str(&json_line(r));
                }
                out
            }
        }
    }

    pub fn write_files(&self, dir: &Path) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Io {
            path: dir.display().to_string(),
            message: e.to_string(),
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        for (name, contents) in &self.files {
            std::fs::write(dir.join(name), contents).map_err(io)?;
        }
        Ok(())
    }
}

pub fn json_line<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string(v).expect("records serialize");
    s.push('\n');
    s
}

pub fn json_pretty<T: Serialize>(v: &T) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("records serialize");
    s.push('\n');
    s
}

/// Always `p/q`, even for integers.
pub fn ratio(r: &Ratio<u64>) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

/// Left-aligned columns separated by two spaces.
#[derive(Debug, Clone)]
pub struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<String>>,
}

impl Table {
    pub fn new<S: Into<String>>(headers: impl IntoIterator<Item = S>) -> Self {
        Table {
            headers: headers.into_iter().map(Into::into).collect(),
            rows: Vec::new(),
        }
    }

    pub fn row<S: Into<String>>(&mut self, cells: impl IntoIterator<Item = S>) {
        let row: Vec<String> = cells.into_iter().map(Into::into).collect();
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn render(&self) -> String {
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for r in &self.rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        for line in std::iter::once(&self.headers).chain(&self.rows) {
            let mut text = String::new();
            for (i, (cell, w)) in line.iter().zip(&widths).enumerate() {
                if i > 0 {
                    text.push_str("  ");
                }
                text.push_str(cell);
                text.extend(std::iter::repeat_n(' ', w - cell.chars().count()));
            }
            out.push_str(text.trim_end());
            out.push('\n');
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn table_alignment() {
        let mut t = Table::new(["n", "value"]);
        t.row(["10", "x"]);
        t.row(["2", "longer"]);
        assert_eq!(t.render(), "n   value\n10  x\n2   longer\n");
    }

    #[test]
    fn ratios_keep_denominators() {
        assert_eq!(ratio(&Ratio::from_integer(3)), "3/1");
        assert_eq!(ratio(&Ratio::new(6, 4)), "3/2");
    }
}
