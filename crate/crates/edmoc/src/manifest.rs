use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::cli::Command;
use crate::error::{CliError, CliResult};
use crate::io::write_json;

pub const MANIFEST_FILE: &str = "manifest.json";

/// A written file and a digest of its reproducible content.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct OutputRecord {
    /// Relative to the output directory.
    pub file: String,
    pub sha256: String,
}

/// Everything needed to re-run a command and check its outputs.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub invocation: Command,
    pub config: Value,
    pub seed: Option<u64>,
    pub inputs: Vec<PathBuf>,
    pub out_dir: PathBuf,
    pub outputs: Vec<OutputRecord>,
    pub wall_seconds: f64,
}

/// Drops timing fields, which are the only run-to-run differences in JSON
/// outputs.
fn strip_timings(v: &mut Value) {
    match v {
        Value::Object(map) => {
            map.retain(|k, _| !(k.starts_with("t_") || k == "wall_seconds"));
            map.values_mut().for_each(strip_timings);
        }
        Value::Array(items) => items.iter_mut().for_each(strip_timings),
        _ => {}
    }
}

/// SHA-256 of a file; JSON files are hashed without their timing fields.
pub fn fingerprint(path: &Path) -> CliResult<String> {
    let bytes = std::fs::read(path).map_err(|e| CliError::io(path, e))?;
    let digest = if path.extension().is_some_and(|e| e == "json") {
        let mut v: Value = serde_json::from_slice(&bytes).map_err(|e| CliError::Json { path: path.into(), source: e })?;
        strip_timings(&mut v);
        Sha256::digest(v.to_string().as_bytes())
    } else {
        Sha256::digest(&bytes)
    };
    Ok(digest.iter().map(|b| format!("{b:02x}")).collect())
}

impl RunManifest {
    pub fn new(invocation: &Command, config: Value, seed: Option<u64>, inputs: Vec<PathBuf>) -> Self {
        Self {
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            command: invocation.name().to_string(),
            invocation: invocation.clone(),
            config,
            seed,
            inputs,
            out_dir: invocation.out_dir().map(Path::to_path_buf).unwrap_or_default(),
            outputs: Vec::new(),
            wall_seconds: 0.0,
        }
    }

    /// Records files written under the output directory.
    pub fn record(&mut self, files: &[PathBuf]) -> CliResult<()> {
        for f in files {
            let rel = f.strip_prefix(&self.out_dir).unwrap_or(f);
            self.outputs.push(OutputRecord { file: rel.to_string_lossy().into_owned(), sha256: fingerprint(f)? });
        }
        Ok(())
    }

    pub fn write(&self) -> CliResult<PathBuf> {
        let path = self.out_dir.join(MANIFEST_FILE);
        write_json(&path, self)?;
        Ok(path)
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(|e| CliError::Json { path: path.into(), source: e })
    }

    /// Files whose fingerprint differs from `other` or that are missing there.
    pub fn mismatches(&self, other: &RunManifest) -> Vec<String> {
        self.outputs
            .iter()
            .filter(|r| !other.outputs.iter().any(|o| o.file == r.file && o.sha256 == r.sha256))
            .map(|r| r.file.clone())
            .collect()
    }
}
