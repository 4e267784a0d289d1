//! Artifact directories: atomic file writes with a running list of what was
//! written, for the manifest.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult};

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    let bytes = fs::read(path).map_err(|e| CliError::read(path, e))?;
    Ok(sha256_hex(&bytes))
}

/// Writes `bytes` to `path` through a temporary file in the same directory.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> CliResult<()> {
    let dir = path
        .parent()
        .filter(|p| !p.as_os_str().is_empty())
        .unwrap_or(Path::new("."));
    fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| CliError::io(dir, e))?;
    tmp.write_all(bytes).map_err(|e| CliError::io(path, e))?;
    tmp.persist(path).map_err(|e| CliError::io(path, e.error))?;
    Ok(())
}

/// An output directory and the files written into it so far.
#[derive(Debug)]
pub struct OutputDir {
    root: PathBuf,
    written: Vec<(String, String)>,
}

impl OutputDir {
    pub fn create(root: &Path) -> CliResult<Self> {
        fs::create_dir_all(root).map_err(|e| CliError::io(root, e))?;
        Ok(OutputDir {
            root: root.to_path_buf(),
            written: Vec::new(),
        })
    }

    pub fn root(&self) -> &Path {
        &self.root
    }

    /// Writes `rel` (a `/`-separated path inside the directory).
    pub fn write(&mut self, rel: &str, bytes: &[u8]) -> CliResult<()> {
        write_atomic(&self.root.join(rel), bytes)?;
        let hash = sha256_hex(bytes);
        match self.written.iter_mut().find(|e| e.0 == rel) {
            Some(e) => e.1 = hash,
            None => self.written.push((rel.to_string(), hash)),
        }
        Ok(())
    }

    pub fn write_json<T: serde::Serialize>(&mut self, rel: &str, value: &T) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(value)?;
        text.push('\n');
        self.write(rel, text.as_bytes())
    }

    /// `(relative path, sha256)` of every file written, sorted by path.
    pub fn files(&self) -> Vec<(String, String)> {
        let mut v = self.written.clone();
        v.sort();
        v
    }
}

/// Host-independent digest over `(path, sha256)` pairs.
pub fn result_digest(files: &[(String, String)]) -> String {
    let mut h = Sha256::new();
    for (p, d) in files {
        h.update(p.as_bytes());
        h.update(b"\t");
        h.update(d.as_bytes());
        h.update(b"\n");
    }
    hex::encode(h.finalize())
}
