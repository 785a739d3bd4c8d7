use std::collections::BTreeMap;
use std::io::Write;
use std::path::Path;

use anyhow::{Context, Result};
use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use gradus::format::{to_json, AlgebraFile};

#[derive(Serialize, Debug)]
pub struct CommandEcho {
    pub verb: String,
    pub options: BTreeMap<String, Value>,
}

/// Everything needed to re-run the command.
#[derive(Serialize, Debug)]
pub struct InputEcho {
    pub path: String,
    pub sha256: String,
    pub algebra: AlgebraFile,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub attachments: BTreeMap<String, Value>,
}

#[derive(Serialize, Debug)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: CommandEcho,
    pub input: InputEcho,
    pub field: String,
    /// `ok`, or `rejected` when the input fails a mathematical check.
    pub status: &'static str,
    pub payload: Value,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

/// Writes to `path` through a temporary file in the same directory, or to stdout.
pub fn emit(text: &str, path: Option<&Path>) -> Result<()> {
    match path {
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())?;
            out.flush()?;
        }
        Some(p) => {
            let dir = p.parent().filter(|d| !d.as_os_str().is_empty()).unwrap_or(Path::new("."));
            let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("creating a temporary file in {}", dir.display()))?;
            tmp.write_all(text.as_bytes())?;
            tmp.persist(p).with_context(|| format!("writing {}", p.display()))?;
        }
    }
    Ok(())
}

pub fn write_report(report: &Report, path: Option<&Path>) -> Result<()> {
    emit(&to_json(report), path)
}
