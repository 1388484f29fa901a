//! Files exchanged with adapters.
//!
//! Train files carry gold labels, test files do not. A predictions file has
//! one `{"id", "label"}` line per test id.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use phenom_core::{Complexity, Label, NliExample};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AdapterRecord {
    pub id: String,
    pub premise: String,
    pub hypothesis: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub label: Option<Label>,
}

impl AdapterRecord {
    pub fn labeled(e: &NliExample) -> Self {
        Self {
            id: e.id.to_string(),
            premise: e.premise.clone(),
            hypothesis: e.hypothesis.clone(),
            label: Some(e.label),
        }
    }

    pub fn unlabeled(&self) -> Self {
        Self {
            label: None,
            ..self.clone()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Prediction {
    pub id: String,
    pub label: Label,
}

/// An evaluation item: the record sent to the adapter plus what is scored.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalItem {
    pub record: AdapterRecord,
    pub gold: Label,
    pub complexity: Option<Complexity>,
}

impl EvalItem {
    pub fn from_example(e: &NliExample) -> Self {
        Self {
            record: AdapterRecord::labeled(e),
            gold: e.label,
            complexity: Some(e.complexity),
        }
    }

    /// Items of an external labeled set, e.g. a regression dev file.
    pub fn from_record(r: AdapterRecord) -> Result<Self> {
        let gold = r
            .label
            .ok_or_else(|| Error::Data(format!("record `{}` has no gold label", r.id)))?;
        Ok(Self {
            record: r,
            gold,
            complexity: None,
        })
    }
}

pub fn write_train_file(path: &Path, records: &[AdapterRecord]) -> Result<()> {
    phenom_core::io::write_jsonl(path, records)?;
    Ok(())
}

pub fn write_test_file(path: &Path, items: &[EvalItem]) -> Result<()> {
    let records: Vec<AdapterRecord> = items.iter().map(|i| i.record.unlabeled()).collect();
    phenom_core::io::write_jsonl(path, &records)?;
    Ok(())
}

pub fn read_records(path: &Path) -> Result<Vec<AdapterRecord>> {
    Ok(phenom_core::io::read_jsonl(path)?)
}

/// Fails unless no id is on both sides.
pub fn check_no_leak<'a>(
    train: impl IntoIterator<Item = &'a str>,
    test: impl IntoIterator<Item = &'a str>,
) -> Result<()> {
    let train: BTreeSet<&str> = train.into_iter().collect();
    let shared: Vec<&str> = test.into_iter().filter(|id| train.contains(id)).collect();
    match shared.first() {
        Some(first) => Err(Error::Leak {
            count: shared.len(),
            first: first.to_string(),
        }),
        None => Ok(()),
    }
}

/// Reads and checks a predictions file: every line parses, labels are in
/// the enum, and the ids are exactly `expected`, each once.
pub fn read_predictions(adapter: &str, path: &Path, expected: &[&str]) -> Result<BTreeMap<String, Label>> {
    let fail = |detail: String| Error::protocol(adapter, "predict", detail);
    let text = fs::read_to_string(path)
        .map_err(|e| fail(format!("cannot read predictions {}: {e}", path.display())))?;
    let wanted: BTreeSet<&str> = expected.iter().copied().collect();
    let mut out = BTreeMap::new();
    for (n, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let p: Prediction = serde_json::from_str(line)
            .map_err(|e| fail(format!("line {}: {e}", n + 1)))?;
        if !wanted.contains(p.id.as_str()) {
            return Err(fail(format!("line {}: unknown id `{}`", n + 1, p.id)));
        }
        if out.insert(p.id.clone(), p.label).is_some() {
            return Err(fail(format!("line {}: id `{}` predicted twice", n + 1, p.id)));
        }
    }
    if out.len() != wanted.len() {
        let missing = wanted.iter().find(|id| !out.contains_key(**id)).expect("count differs");
        return Err(fail(format!(
            "{} of {} ids missing, first `{missing}`",
            wanted.len() - out.len(),
            wanted.len()
        )));
    }
    Ok(out)
}

pub fn write_predictions(path: &Path, predictions: &[Prediction]) -> Result<()> {
    phenom_core::io::write_jsonl(path, predictions)?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn read(text: &str, expected: &[&str]) -> Result<BTreeMap<String, Label>> {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.jsonl");
        fs::write(&path, text).unwrap();
        read_predictions("t", &path, expected)
    }

    #[test]
    fn accepts_complete_predictions() {
        let got = read(
            "{\"id\":\"a\",\"label\":\"entailment\"}\n\n{\"id\":\"b\",\"label\":\"neutral\"}\n",
            &["a", "b"],
        )
        .unwrap();
        assert_eq!(got["b"], Label::Neutral);
    }

    #[test]
    fn rejects_bad_predictions() {
        for text in [
            "{\"id\":\"a\",\"label\":\"yes\"}\n{\"id\":\"b\",\"label\":\"neutral\"}",
            "{\"id\":\"a\",\"label\":\"neutral\"}",
            "{\"id\":\"a\",\"label\":\"neutral\"}\n{\"id\":\"a\",\"label\":\"neutral\"}",
            "{\"id\":\"a\",\"label\":\"neutral\"}\n{\"id\":\"c\",\"label\":\"neutral\"}",
            "not json",
        ] {
            let err = read(text, &["a", "b"]).unwrap_err();
            assert!(matches!(err, Error::Protocol { verb: "predict", .. }), "{text}: {err}");
        }
    }

    #[test]
    fn missing_file_is_protocol_failure() {
        let err = read_predictions("t", Path::new("/nonexistent/p.jsonl"), &["a"]).unwrap_err();
        assert!(matches!(err, Error::Protocol { .. }));
    }

    #[test]
    fn leak_check() {
        assert!(check_no_leak(["a", "b"], ["c"]).is_ok());
        assert!(matches!(
            check_no_leak(["a", "b"], ["c", "b"]),
            Err(Error::Leak { count: 1, .. })
        ));
    }

    #[test]
    fn test_files_omit_labels() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("t.jsonl");
        let item = EvalItem::from_record(AdapterRecord {
            id: "x".into(),
            premise: "p".into(),
            hypothesis: "h".into(),
            label: Some(Label::Contradiction),
        })
        .unwrap();
        write_test_file(&path, &[item]).unwrap();
        assert_eq!(
            fs::read_to_string(&path).unwrap(),
            "{\"id\":\"x\",\"premise\":\"p\",\"hypothesis\":\"h\"}\n"
        );
    }
}
