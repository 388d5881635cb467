//! Output files: every CSV starts with a provenance comment and gets a JSON
//! sidecar; every JSON report carries the same provenance fields.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::{CliError, CliResult};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// First 16 hex digits of the SHA-256 of the canonical config JSON.
pub fn config_hash(config: &Value) -> String {
    let canonical = serde_json::to_string(config).expect("config serializes");
    let digest = Sha256::digest(canonical.as_bytes());
    digest.iter().take(8).map(|b| format!("{b:02x}")).collect()
}

pub fn header(config: &Value) -> String {
    format!("# magspec {VERSION} config={}\n", config_hash(config))
}

/// Sidecar path: the output path with `.json` appended.
pub fn sidecar_path(out: &Path) -> PathBuf {
    let mut s = out.as_os_str().to_owned();
    s.push(".json");
    PathBuf::from(s)
}

fn write(path: &Path, content: &str) -> CliResult<()> {
    fs::write(path, content).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn provenance(config: &Value) -> Value {
    json!({
        "magspec_version": VERSION,
        "config_hash": config_hash(config),
        "config": config,
    })
}

/// Writes `body` (CSV with its column header) to `out` or stdout.
pub fn emit_csv(out: Option<&Path>, config: &Value, body: &str, summary: Value) -> CliResult<()> {
    let content = format!("{}{body}", header(config));
    match out {
        Some(path) => {
            write(path, &content)?;
            let mut meta = provenance(config);
            meta["summary"] = summary;
            write(&sidecar_path(path), &pretty(&meta))
        }
        None => stdout(&content),
    }
}

/// Writes a JSON report with provenance fields to `out` or stdout.
pub fn emit_json(out: Option<&Path>, config: &Value, report: Value) -> CliResult<()> {
    let mut doc = provenance(config);
    doc["report"] = report;
    let text = pretty(&doc);
    match out {
        Some(path) => write(path, &text),
        None => stdout(&text),
    }
}

/// A closed pipe (`magspec ... | head`) is not an error.
fn stdout(text: &str) -> CliResult<()> {
    let mut lock = std::io::stdout().lock();
    match lock.write_all(text.as_bytes()).and_then(|_| lock.flush()) {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => Err(CliError::Io(format!("stdout: {e}"))),
        _ => Ok(()),
    }
}

fn pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("report serializes");
    s.push('\n');
    s
}
