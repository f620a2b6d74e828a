//! CSV assembly and atomic output.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};

/// A CSV document: `#` header lines, one column row, data rows, and
/// optional trailing `#` notes.
pub struct Document {
    header: Vec<String>,
    columns: Vec<&'static str>,
    rows: Vec<Vec<String>>,
    notes: Vec<String>,
}

impl Document {
    pub fn new(command: &str, config: &str, cache: &str, generator: Option<&str>) -> Self {
        let mut header = vec![
            format!("chaosnorm {}", env!("CARGO_PKG_VERSION")),
            format!("command: {command}"),
            format!("config: {config}"),
            format!("cache: {cache}"),
        ];
        if let Some(g) = generator {
            header.push(format!("generator: {g}"));
        }
        header.push(format!("created: unix={}", created_timestamp()));
        Self {
            header,
            columns: Vec::new(),
            rows: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn columns(&mut self, columns: &[&'static str]) {
        self.columns = columns.to_vec();
    }

    pub fn row(&mut self, fields: Vec<String>) {
        debug_assert_eq!(fields.len(), self.columns.len());
        self.rows.push(fields);
    }

    pub fn note(&mut self, note: String) {
        self.notes.push(note);
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        for line in &self.header {
            writeln!(out, "# {line}").unwrap();
        }
        writeln!(out, "{}", self.columns.join(",")).unwrap();
        for row in &self.rows {
            writeln!(out, "{}", row.join(",")).unwrap();
        }
        for note in &self.notes {
            writeln!(out, "# {note}").unwrap();
        }
        out
    }
}

/// Seconds since the epoch, or `SOURCE_DATE_EPOCH` when set.
fn created_timestamp() -> u64 {
    std::env::var("SOURCE_DATE_EPOCH")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or_else(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map(|d| d.as_secs())
                .unwrap_or(0)
        })
}

/// Shortest round-trip decimal.
pub fn num(x: f64) -> String {
    format!("{x:?}")
}

pub fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

/// A field quoted per RFC 4180.
pub fn quoted(s: &str) -> String {
    format!("\"{}\"", s.replace('"', "\"\""))
}

/// Writes to stdout, or to `path` through a temporary file and a rename so
/// a failed run never leaves a partial file.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    let Some(path) = path else {
        let mut stdout = std::io::stdout().lock();
        stdout
            .write_all(text.as_bytes())
            .context("writing to stdout")?;
        return stdout.flush().context("writing to stdout");
    };
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    let name = path
        .file_name()
        .with_context(|| format!("output path {} has no file name", path.display()))?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        name.to_string_lossy(),
        std::process::id()
    ));
    fs::write(&tmp, text).with_context(|| format!("writing {}", tmp.display()))?;
    fs::rename(&tmp, path)
        .with_context(|| format!("renaming {} to {}", tmp.display(), path.display()))
}
