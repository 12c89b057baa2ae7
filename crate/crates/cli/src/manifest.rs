//! Run manifests: what was run, on which inputs, producing which files.
//!
//! The digest covers the command, configuration, input digests, seed and tool
//! version only. Argument order, paths and wall-clock timestamps are recorded
//! but kept out of the digest so identical runs stay byte-identical.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const TOOL: &str = env!("CARGO_PKG_NAME");
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Clone, Serialize)]
pub struct InputRecord {
    pub role: String,
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct OutputRecord {
    pub file: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    pub config: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<InputRecord>,
    pub digest: String,
    pub outputs: Vec<OutputRecord>,
    pub argv: Vec<String>,
    pub started_at: String,
    pub finished_at: String,
}

impl RunManifest {
    pub fn new(command: &str, config: Value, seed: Option<u64>, inputs: Vec<InputRecord>) -> Self {
        let stable = json!({
            "tool": TOOL,
            "version": VERSION,
            "command": command,
            "config": config,
            "seed": seed,
            "inputs": inputs.iter().map(|i| json!({"role": i.role, "sha256": i.sha256})).collect::<Vec<_>>(),
        });
        let digest = sha256_hex(stable.to_string().as_bytes());
        RunManifest {
            tool: TOOL,
            version: VERSION,
            command: command.to_owned(),
            config,
            seed,
            inputs,
            digest,
            outputs: Vec::new(),
            argv: std::env::args().collect(),
            started_at: now(),
            finished_at: String::new(),
        }
    }

    /// Writes `bytes` to `dir/name` and records its digest.
    pub fn emit(&mut self, dir: &Path, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = dir.join(name);
        fs::write(&path, bytes).map_err(|e| CliError::io(format!("writing {}", path.display()), e))?;
        self.outputs.push(OutputRecord {
            file: name.to_owned(),
            sha256: sha256_hex(bytes),
        });
        Ok(path)
    }

    pub fn finish(mut self, path: &Path) -> Result<(), CliError> {
        self.finished_at = now();
        let mut text = serde_json::to_string_pretty(&self)?;
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::io(format!("writing {}", path.display()), e))
    }
}

fn now() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}
