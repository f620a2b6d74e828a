//! Coefficient tables keyed by `(n, pattern)`, with a per-`n` text cache.
//!
//! Cache file format, one file per dimension:
//!
//! ```text
//! chaosnorm-cache v1 n=<n>
//! <pattern>;<value>
//! ...
//! ```
//!
//! Entry lines are sorted by pattern text and values are shortest
//! round-trip decimals. A file that fails any structural check is ignored
//! and rewritten from freshly computed values.

use std::collections::BTreeMap;
use std::fs;
use std::io::ErrorKind;
use std::path::{Path, PathBuf};

use rayon::prelude::*;

use super::coefficient;
use crate::error::{Error, Result};
use crate::patterns::{enumerate_patterns_up_to, MultiplicityPattern};

pub const CACHE_DIR_ENV: &str = "CHAOSNORM_CACHE_DIR";
pub const DEFAULT_CACHE_DIR: &str = "./.chaosnorm-cache";
const FORMAT_VERSION: u32 = 1;

/// Cache directory from the environment, or the default.
pub fn cache_dir_from_env() -> PathBuf {
    std::env::var_os(CACHE_DIR_ENV)
        .map(PathBuf::from)
        .unwrap_or_else(|| PathBuf::from(DEFAULT_CACHE_DIR))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CachePolicy {
    /// Compute everything in memory; touch no files.
    Disabled,
    /// Reuse valid cache entries and write back anything computed.
    ReadWrite(PathBuf),
    /// Ignore existing files, recompute, and overwrite them.
    Refresh(PathBuf),
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct CacheStats {
    /// Entries served from cache files.
    pub hits: usize,
    /// Entries computed.
    pub misses: usize,
    /// Cache files rejected as malformed.
    pub corrupt_files: usize,
    pub files_written: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableMetadata {
    pub format_version: u32,
    pub n_list: Vec<usize>,
    pub max_k: u32,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CoefficientTable {
    entries: BTreeMap<usize, BTreeMap<MultiplicityPattern, f64>>,
    metadata: TableMetadata,
    stats: CacheStats,
}

impl CoefficientTable {
    pub fn metadata(&self) -> &TableMetadata {
        &self.metadata
    }

    pub fn cache_stats(&self) -> CacheStats {
        self.stats
    }

    /// Coefficient for `(n, p)`. Vanishing patterns are implicit zeros;
    /// anything else must have been built into the table.
    pub fn get(&self, n: usize, p: &MultiplicityPattern) -> Result<f64> {
        if p.is_vanishing() {
            return Ok(0.0);
        }
        self.entries
            .get(&n)
            .and_then(|m| m.get(p))
            .copied()
            .ok_or_else(|| Error::MissingCoefficient {
                n,
                pattern: p.to_string(),
            })
    }

    /// Stored entries for one dimension, in enumeration order.
    pub fn entries_for(&self, n: usize) -> impl Iterator<Item = (&MultiplicityPattern, f64)> {
        self.entries
            .get(&n)
            .into_iter()
            .flat_map(|m| m.iter().map(|(p, v)| (p, *v)))
    }

    pub fn len(&self) -> usize {
        self.entries.values().map(BTreeMap::len).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn contains(&self, n: usize, p: &MultiplicityPattern) -> bool {
        self.entries.get(&n).is_some_and(|m| m.contains_key(p))
    }
}

/// Builds the table of every non-vanishing pattern of order `<= 2*max_k+1`
/// with at most `n` parts, for each `n` in `n_list`.
pub fn table_build(n_list: &[usize], max_k: u32, policy: &CachePolicy) -> Result<CoefficientTable> {
    let mut dims: Vec<usize> = n_list.to_vec();
    dims.sort_unstable();
    dims.dedup();
    if let Some(&bad) = dims.iter().find(|&&n| n < 2) {
        return Err(Error::domain(format!(
            "table dimensions need n >= 2, got {bad}"
        )));
    }
    let mut stats = CacheStats::default();
    let mut entries = BTreeMap::new();
    for &n in &dims {
        let required = enumerate_patterns_up_to(max_k, n);
        let cached = match policy {
            CachePolicy::ReadWrite(dir) => match read_cache(&cache_path(dir, n), n)? {
                CacheRead::Missing => BTreeMap::new(),
                CacheRead::Corrupt => {
                    stats.corrupt_files += 1;
                    BTreeMap::new()
                }
                CacheRead::Valid(m) => m,
            },
            _ => BTreeMap::new(),
        };
        let missing: Vec<&MultiplicityPattern> = required
            .iter()
            .filter(|p| !cached.contains_key(*p))
            .collect();
        let computed: Vec<f64> = missing
            .par_iter()
            .map(|p| coefficient(p, n))
            .collect::<Result<_>>()?;
        stats.hits += required.len() - missing.len();
        stats.misses += missing.len();

        let mut for_n = BTreeMap::new();
        for p in &required {
            if let Some(v) = cached.get(p) {
                for_n.insert(p.clone(), *v);
            }
        }
        for (p, v) in missing.iter().zip(&computed) {
            for_n.insert((*p).clone(), *v);
        }

        let write_dir = match policy {
            CachePolicy::ReadWrite(dir) if !missing.is_empty() => Some(dir),
            CachePolicy::Refresh(dir) => Some(dir),
            _ => None,
        };
        if let Some(dir) = write_dir {
            // Keep entries a previous, larger build left behind.
            let mut union = cached;
            union.extend(for_n.iter().map(|(p, v)| (p.clone(), *v)));
            write_cache(dir, n, &union)?;
            stats.files_written += 1;
        }
        entries.insert(n, for_n);
    }
    Ok(CoefficientTable {
        entries,
        metadata: TableMetadata {
            format_version: FORMAT_VERSION,
            n_list: dims,
            max_k,
        },
        stats,
    })
}

pub(crate) fn cache_path(dir: &Path, n: usize) -> PathBuf {
    dir.join(format!("coefficients-n{n}.txt"))
}

fn header(n: usize) -> String {
    format!("chaosnorm-cache v{FORMAT_VERSION} n={n}")
}

enum CacheRead {
    Missing,
    Corrupt,
    Valid(BTreeMap<MultiplicityPattern, f64>),
}

fn read_cache(path: &Path, n: usize) -> Result<CacheRead> {
    let text = match fs::read_to_string(path) {
        Ok(t) => t,
        Err(e) if e.kind() == ErrorKind::NotFound => return Ok(CacheRead::Missing),
        Err(e) if e.kind() == ErrorKind::InvalidData => return Ok(CacheRead::Corrupt),
        Err(e) => return Err(Error::io(path, e)),
    };
    Ok(parse_cache(&text, n).map_or(CacheRead::Corrupt, CacheRead::Valid))
}

fn parse_cache(text: &str, n: usize) -> Option<BTreeMap<MultiplicityPattern, f64>> {
    let body = text.strip_suffix('\n')?;
    let mut lines = body.split('\n');
    if lines.next()? != header(n) {
        return None;
    }
    let mut out = BTreeMap::new();
    let mut previous: Option<&str> = None;
    for line in lines {
        let (pattern_text, value_text) = line.split_once(';')?;
        if previous.is_some_and(|prev| prev >= pattern_text) {
            return None;
        }
        previous = Some(pattern_text);
        let p: MultiplicityPattern = pattern_text.parse().ok()?;
        if p.is_vanishing() || p.part_count() > n {
            return None;
        }
        let value: f64 = value_text.parse().ok()?;
        // Only shortest round-trip text is ever written.
        if !value.is_finite() || format!("{value:?}") != value_text {
            return None;
        }
        out.insert(p, value);
    }
    Some(out)
}

fn render_cache(n: usize, entries: &BTreeMap<MultiplicityPattern, f64>) -> String {
    let mut lines: Vec<(String, f64)> = entries.iter().map(|(p, v)| (p.to_string(), *v)).collect();
    lines.sort_by(|a, b| a.0.cmp(&b.0));
    let mut out = header(n);
    out.push('\n');
    for (p, v) in lines {
        out.push_str(&format!("{p};{v:?}\n"));
    }
    out
}

fn write_cache(dir: &Path, n: usize, entries: &BTreeMap<MultiplicityPattern, f64>) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let path = cache_path(dir, n);
    let tmp = dir.join(format!(".coefficients-n{n}.txt.{}.tmp", std::process::id()));
    fs::write(&tmp, render_cache(n, entries)).map_err(|e| Error::io(&tmp, e))?;
    fs::rename(&tmp, &path).map_err(|e| Error::io(&path, e))
}
