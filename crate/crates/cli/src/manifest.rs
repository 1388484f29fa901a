//! Run manifests: what a command read and wrote, with content hashes.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliResult;

#[derive(Debug, Serialize)]
pub struct FileHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Serialize)]
pub struct Manifest {
    pub command: String,
    pub version: &'static str,
    pub seed: u64,
    pub config: serde_json::Value,
    pub inputs: Vec<FileHash>,
    pub outputs: Vec<FileHash>,
}

pub fn sha256_file(path: &Path) -> CliResult<String> {
    Ok(hex::encode(Sha256::digest(fs::read(path)?)))
}

fn display(path: &Path, base: &Path) -> String {
    path.strip_prefix(base).unwrap_or(path).display().to_string()
}

pub fn hashes(paths: &[PathBuf], base: &Path) -> CliResult<Vec<FileHash>> {
    let mut files = Vec::new();
    for p in paths {
        if p.is_dir() {
            let mut inner: Vec<PathBuf> = fs::read_dir(p)?
                .filter_map(|e| e.ok().map(|e| e.path()))
                .filter(|p| p.is_file())
                .collect();
            inner.sort();
            files.extend(inner);
        } else {
            files.push(p.clone());
        }
    }
    files
        .iter()
        .map(|f| {
            Ok(FileHash {
                path: display(f, base),
                sha256: sha256_file(f)?,
            })
        })
        .collect()
}

impl Manifest {
    /// Writes `<command>.manifest.json` into `out`. Output paths are shown
    /// relative to `out`.
    pub fn write(
        command: &str,
        seed: u64,
        config: serde_json::Value,
        inputs: &[PathBuf],
        outputs: &[PathBuf],
        out: &Path,
    ) -> CliResult<PathBuf> {
        let manifest = Manifest {
            command: command.to_string(),
            version: env!("CARGO_PKG_VERSION"),
            seed,
            config,
            inputs: hashes(inputs, Path::new(""))?,
            outputs: hashes(outputs, out)?,
        };
        fs::create_dir_all(out)?;
        let path = out.join(format!("{command}.manifest.json"));
        fs::write(&path, serde_json::to_string_pretty(&manifest)? + "\n")?;
        Ok(path)
    }
}
