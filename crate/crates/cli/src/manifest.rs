//! `manifest.json`: what ran, on which inputs, and what it produced.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::CliResult;
use crate::formats::{read_json, FORMAT_VERSION};
use crate::output::{result_digest, sha256_file, OutputDir};

pub const MANIFEST_FILE: &str = "manifest.json";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FileEntry {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub version: u32,
    /// Subcommand name.
    pub command: String,
    /// Effective flags after config-file merging.
    pub config: Value,
    pub seeds: BTreeMap<String, u64>,
    /// Input paths as given, relative to the working directory of the run.
    pub inputs: Vec<FileEntry>,
    /// Output paths relative to the artifact directory.
    pub outputs: Vec<FileEntry>,
    pub tool_version: String,
    pub wall_clock_seconds: f64,
    /// SHA-256 over the sorted `(path, sha256)` output list, excluding this
    /// manifest.
    pub digest: String,
    /// A time budget cut the run short; outputs then depend on timing.
    #[serde(default)]
    pub interrupted: bool,
}

impl RunManifest {
    pub fn read(path: &Path) -> CliResult<Self> {
        read_json(path)
    }
}

/// Bookkeeping for one command invocation.
pub struct Session {
    pub out: OutputDir,
    command: &'static str,
    config: Value,
    seeds: BTreeMap<String, u64>,
    inputs: Vec<FileEntry>,
    started: Instant,
    pub interrupted: bool,
}

impl Session {
    pub fn new(command: &'static str, config: Value, out: OutputDir) -> Self {
        Session {
            out,
            command,
            config,
            seeds: BTreeMap::new(),
            inputs: Vec::new(),
            started: Instant::now(),
            interrupted: false,
        }
    }

    pub fn seed(&mut self, name: &str, value: u64) {
        self.seeds.insert(name.to_string(), value);
    }

    pub fn input(&mut self, path: &Path) -> CliResult<()> {
        let entry = FileEntry {
            path: path.display().to_string(),
            sha256: sha256_file(path)?,
        };
        if !self.inputs.contains(&entry) {
            self.inputs.push(entry);
        }
        Ok(())
    }

    pub fn elapsed(&self) -> f64 {
        self.started.elapsed().as_secs_f64()
    }

    /// Writes the manifest and returns it.
    pub fn finish(mut self) -> CliResult<RunManifest> {
        let files = self.out.files();
        let manifest = RunManifest {
            version: FORMAT_VERSION,
            command: self.command.to_string(),
            config: self.config,
            seeds: self.seeds,
            inputs: self.inputs,
            outputs: files
                .iter()
                .map(|(p, h)| FileEntry {
                    path: p.clone(),
                    sha256: h.clone(),
                })
                .collect(),
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            wall_clock_seconds: self.started.elapsed().as_secs_f64(),
            digest: result_digest(&files),
            interrupted: self.interrupted,
        };
        self.out.write_json(MANIFEST_FILE, &manifest)?;
        Ok(manifest)
    }
}
