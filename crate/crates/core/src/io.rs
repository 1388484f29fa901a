//! JSONL and template-directory I/O.

use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::model::{parse_template, PremiseTemplate};

pub const TEMPLATE_EXTENSION: &str = "tmpl";

pub fn write_jsonl<T: Serialize>(path: &Path, items: &[T]) -> Result<()> {
    if let Some(parent) = path.parent() {
        fs::create_dir_all(parent)?;
    }
    let mut w = BufWriter::new(File::create(path)?);
    for item in items {
        serde_json::to_writer(&mut w, item)?;
        w.write_all(b"\n")?;
    }
    w.flush()?;
    Ok(())
}

pub fn read_jsonl<T: DeserializeOwned>(path: &Path) -> Result<Vec<T>> {
    let reader = BufReader::new(File::open(path)?);
    let mut out = Vec::new();
    for line in reader.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        out.push(serde_json::from_str(&line)?);
    }
    Ok(out)
}

/// Template files in a directory, sorted by file name.
pub fn template_files(dir: &Path) -> Result<Vec<PathBuf>> {
    let mut files: Vec<PathBuf> = fs::read_dir(dir)?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|e| e == TEMPLATE_EXTENSION))
        .collect();
    files.sort();
    Ok(files)
}

/// Loads every template in `dir`, or a single file. Parse errors name the file.
pub fn load_templates(path: &Path) -> Result<Vec<PremiseTemplate>> {
    let files = if path.is_dir() {
        template_files(path)?
    } else {
        vec![path.to_path_buf()]
    };
    let mut templates = Vec::with_capacity(files.len());
    for file in files {
        let text = fs::read_to_string(&file)?;
        let t = parse_template(&text).map_err(|e| Error::InvalidTemplate {
            id: file.display().to_string(),
            reason: e.to_string(),
        })?;
        templates.push(t);
    }
    let mut seen = std::collections::BTreeSet::new();
    for t in &templates {
        if !seen.insert(t.id()) {
            return Err(Error::InvalidTemplate {
                id: t.id().to_string(),
                reason: "template id used by more than one file".into(),
            });
        }
    }
    templates.sort_by(|a, b| a.id().cmp(b.id()));
    Ok(templates)
}
