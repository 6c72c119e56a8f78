//! Machine records and human-readable formatting.
//!
//! Every subcommand can write one JSON record to its `--out` path: the tool
//! version, the subcommand, a full echo of the resolved configuration, and
//! the results payload. Records contain no clocks or other ambient state,
//! so a rerun of the same invocation produces a byte-identical file.

use std::fs;
use std::io::Write;
use std::path::Path;

use serde::Serialize;

use uc_core::games::ProbValue;

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Serialize)]
pub struct RunRecord<C: Serialize, R: Serialize> {
    pub tool_version: &'static str,
    pub subcommand: &'static str,
    pub config: C,
    pub results: R,
}

impl<C: Serialize, R: Serialize> RunRecord<C, R> {
    pub fn new(subcommand: &'static str, config: C, results: R) -> Self {
        Self {
            tool_version: TOOL_VERSION,
            subcommand,
            config,
            results,
        }
    }

    pub fn write(&self, path: &Path) -> std::io::Result<()> {
        let mut text = serde_json::to_string_pretty(self).expect("record serializes");
        text.push('\n');
        fs::write(path, text)
    }
}

/// Appends one compact JSON object per line.
pub fn append_jsonl<T: Serialize>(path: &Path, items: &[T]) -> std::io::Result<()> {
    let mut file = fs::OpenOptions::new()
        .create(true)
        .append(true)
        .open(path)?;
    for item in items {
        let line = serde_json::to_string(item).expect("item serializes");
        writeln!(file, "{line}")?;
    }
    Ok(())
}

pub fn fmt_prob(p: &ProbValue) -> String {
    match *p {
        ProbValue::Point { value } => format!("{value}"),
        ProbValue::Range {
            lo,
            hi,
            lo_open,
            hi_open,
        } => format!(
            "{}{lo}, {hi}{}",
            if lo_open { "(" } else { "[" },
            if hi_open { ")" } else { "]" }
        ),
    }
}
