// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

/// Write through a temp file in the same directory, then rename.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let mut tmp = tempfile::NamedTempFile::new_in(dir).with_context(|| format!("temp file in {}", dir.display()))?;
    tmp.write_all(contents)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).with_context(|| format!("writing {}", path.display()))?;
    Ok(())
}

pub fn read_input(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))
}

fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

#[derive(Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub argv: Vec<String>,
    pub config_paths: Vec<String>,
    pub seed: Option<u64>,
    pub tool_version: String,
    /// sha256 of every input file, keyed by path as given.
    pub input_hashes: BTreeMap<String, String>,
    /// sha256 of every artifact written by the run.
    pub output_hashes: BTreeMap<String, String>,
    pub timestamp_unix: u64,
}

/// Collects inputs and outputs of one command, then writes them all.
pub struct Run {
    out_dir: PathBuf,
    stem: String,
    manifest: RunManifest,
    outputs: Vec<(PathBuf, Vec<u8>)>,
}

impl Run {
    pub fn new(command: &str, out_dir: &Path, stem: &str) -> Self {
        Self {
            out_dir: out_dir.to_path_buf(),
            stem: stem.to_owned(),
            manifest: RunManifest {
                command: command.to_owned(),
                argv: std::env::args().collect(),
                config_paths: Vec::new(),
                seed: None,
                tool_version: env!("CARGO_PKG_VERSION").to_owned(),
                input_hashes: BTreeMap::new(),
                output_hashes: BTreeMap::new(),
                timestamp_unix: SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_secs()).unwrap_or(0),
            },
            outputs: Vec::new(),
        }
    }

    pub fn seed(&mut self, seed: u64) {
        self.manifest.seed = Some(seed);
    }

    /// Read an input file and record its hash.
    pub fn input(&mut self, path: &Path, is_config: bool) -> Result<String> {
        let text = read_input(path)?;
        let key = path.display().to_string();
        if is_config {
            self.manifest.config_paths.push(key.clone());
        }
        self.manifest.input_hashes.insert(key, sha256_hex(text.as_bytes()));
        Ok(text)
    }

    /// Queue `<out_dir>/<stem><suffix>`; returns the path it will get.
    pub fn output(&mut self, suffix: &str, contents: impl Into<Vec<u8>>) -> PathBuf {
        let path = self.out_dir.join(format!("{}{suffix}", self.stem));
        self.outputs.push((path.clone(), contents.into()));
        path
    }

    pub fn finish(mut self) -> Result<Vec<PathBuf>> {
        let mut written = Vec::new();
        for (path, bytes) in &self.outputs {
            write_atomic(path, bytes)?;
            self.manifest.output_hashes.insert(path.display().to_string(), sha256_hex(bytes));
            written.push(path.clone());
        }
        let manifest_path = self.out_dir.join(format!("{}.manifest.json", self.stem));
        let json = serde_json::to_string_pretty(&self.manifest)?;
        write_atomic(&manifest_path, format!("{json}\n").as_bytes())?;
        written.push(manifest_path);
        for p in &written {
            log::info!("wrote {}", p.display());
        }
        Ok(written)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn atomic_write_replaces_contents() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("nested/out.txt");
        write_atomic(&p, b"one").unwrap();
        write_atomic(&p, b"two").unwrap();
        assert_eq!(fs::read(&p).unwrap(), b"two");
        assert_eq!(fs::read_dir(p.parent().unwrap()).unwrap().count(), 1);
    }

    #[test]
    fn sha256_of_empty_input() {
        assert_eq!(sha256_hex(b""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
    }
}
