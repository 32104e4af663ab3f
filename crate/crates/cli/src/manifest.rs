//! Provenance sidecar written next to every output file.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::Instant;

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

#[derive(Debug, Serialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileDigest {
    pub fn of(path: &Path) -> Result<Self> {
        let bytes = fs::read(path).with_context(|| format!("cannot read {}", path.display()))?;
        Ok(FileDigest { path: path.to_path_buf(), sha256: hex::encode(Sha256::digest(&bytes)) })
    }
}

/// Everything needed to rerun a command and compare its outputs.
#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub schema_version: u32,
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub parameters: serde_json::Value,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub seed: Option<u64>,
    pub wall_time_ms: u128,
}

/// Collects inputs and outputs of one invocation.
pub struct Recorder {
    command: &'static str,
    parameters: serde_json::Value,
    seed: Option<u64>,
    inputs: Vec<PathBuf>,
    started: Instant,
}

impl Recorder {
    pub fn new(command: &'static str, parameters: &impl Serialize, seed: Option<u64>) -> Self {
        let parameters = serde_json::to_value(parameters).expect("arguments serialize");
        Recorder { command, parameters, seed, inputs: Vec::new(), started: Instant::now() }
    }

    pub fn input(&mut self, path: &Path) {
        self.inputs.push(path.to_path_buf());
    }

    /// Writes `contents` to `path` and `<path>.manifest.json` beside it.
    pub fn write(&self, path: &Path, contents: &str) -> Result<()> {
        fs::write(path, contents).with_context(|| format!("cannot write {}", path.display()))?;
        let manifest = RunManifest {
            schema_version: iabc::SCHEMA_VERSION,
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: self.command,
            parameters: self.parameters.clone(),
            inputs: self.inputs.iter().map(|p| FileDigest::of(p)).collect::<Result<_>>()?,
            outputs: vec![FileDigest::of(path)?],
            seed: self.seed,
            wall_time_ms: self.started.elapsed().as_millis(),
        };
        let mut sidecar = path.as_os_str().to_owned();
        sidecar.push(".manifest.json");
        let text = serde_json::to_string_pretty(&manifest)? + "\n";
        fs::write(&sidecar, text).with_context(|| format!("cannot write {}", Path::new(&sidecar).display()))?;
        Ok(())
    }
}
