//! Report envelope and the three output renderings.
//!
//! JSON is the canonical machine format: a fixed envelope — library
//! version, configuration echo, adopted convention where one was decided —
//! wrapped around the typed payload, with struct-declared field order
//! throughout, so identical configurations produce byte-identical output
//! no matter how many threads did the work. CSV and text are flat views of
//! the same rows for spreadsheets and terminals.

use std::io::Write as _;
use std::path::Path;

use clap::ValueEnum;
use serde::Serialize;

use crate::config::RunConfig;
use crate::fock::Convention;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
    Text,
}

impl std::fmt::Display for Format {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Format::Json => "json",
            Format::Csv => "csv",
            Format::Text => "text",
        })
    }
}

#[derive(Debug, Serialize)]
pub struct Envelope<T: Serialize> {
    pub library_version: &'static str,
    pub config: RunConfig,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub adopted_convention: Option<Convention>,
    pub report: T,
}

impl<T: Serialize> Envelope<T> {
    pub fn new(config: RunConfig, report: T) -> Self {
        Envelope {
            library_version: crate::VERSION,
            config,
            adopted_convention: None,
            report,
        }
    }

    pub fn with_adopted(mut self, adopted: Option<Convention>) -> Self {
        self.adopted_convention = adopted;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }
}

/// Row-oriented view used by the CSV and text renderings.
#[derive(Clone, Debug, Default)]
pub struct Table {
    pub headers: Vec<String>,
    pub rows: Vec<Vec<String>>,
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_string()
    }
}

impl Table {
    pub fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|h| h.to_string()).collect(), rows: Vec::new() }
    }

    pub fn push(&mut self, row: Vec<String>) {
        debug_assert_eq!(row.len(), self.headers.len());
        self.rows.push(row);
    }

    pub fn csv(&self) -> String {
        let mut out = String::new();
        let line = |cells: &[String]| {
            let joined: Vec<String> = cells.iter().map(|c| csv_field(c)).collect();
            joined.join(",") + "\n"
        };
        out.push_str(&line(&self.headers));
        for row in &self.rows {
            out.push_str(&line(row));
        }
        out
    }

    pub fn text(&self) -> String {
        let ncols = self.headers.len();
        let mut widths: Vec<usize> = self.headers.iter().map(|h| h.chars().count()).collect();
        for row in &self.rows {
            for (i, cell) in row.iter().enumerate().take(ncols) {
                widths[i] = widths[i].max(cell.chars().count());
            }
        }
        let render = |cells: &[String]| {
            let mut line = String::new();
            for (i, cell) in cells.iter().enumerate().take(ncols) {
                if i > 0 {
                    line.push_str("  ");
                }
                let pad = widths[i] - cell.chars().count();
                line.push_str(cell);
                if i + 1 < ncols {
                    line.push_str(&" ".repeat(pad));
                }
            }
            line.trim_end().to_string() + "\n"
        };
        let mut out = render(&self.headers);
        out.push_str(&"-".repeat(widths.iter().sum::<usize>() + 2 * (ncols - 1)));
        out.push('\n');
        for row in &self.rows {
            out.push_str(&render(row));
        }
        out
    }
}

/// Write to the given path, or to stdout when there is none.
pub fn write_out(out: Option<&Path>, content: &str) -> std::io::Result<()> {
    match out {
        Some(path) => std::fs::write(path, content),
        None => {
            let stdout = std::io::stdout();
            let mut lock = stdout.lock();
            lock.write_all(content.as_bytes())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_escapes_only_what_needs_escaping() {
        let mut t = Table::new(&["a", "b"]);
        t.push(vec!["plain".into(), "with,comma".into()]);
        t.push(vec!["with \"quote\"".into(), "multi\nline".into()]);
        let csv = t.csv();
        assert_eq!(
            csv,
            "a,b\nplain,\"with,comma\"\n\"with \"\"quote\"\"\",\"multi\nline\"\n"
        );
    }

    #[test]
    fn text_columns_align() {
        let mut t = Table::new(&["mode", "status"]);
        t.push(vec!["-1".into(), "PASS".into()]);
        t.push(vec!["10".into(), "PASS".into()]);
        let text = t.text();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "mode  status");
        assert_eq!(lines[2], "-1    PASS");
        assert_eq!(lines[3], "10    PASS");
    }

    #[test]
    fn envelope_carries_version_and_config() {
        let cfg = RunConfig::new("chars");
        let env = Envelope::new(cfg, vec![1u32, 2, 3]);
        let json = env.to_json();
        assert!(json.contains("\"library_version\""));
        assert!(json.contains("\"command\": \"chars\""));
        assert!(json.contains("\"report\""));
        assert!(!json.contains("adopted_convention"));
        let with = Envelope::new(RunConfig::new("verify"), ())
            .with_adopted(Some(Convention::Anticommuting));
        assert!(with.to_json().contains("adopted_convention"));
    }
}
