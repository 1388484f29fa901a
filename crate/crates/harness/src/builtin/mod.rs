//! Reference adapters. They run in process through the same file protocol
//! as external models, and as subprocess entry points via the CLI.

mod features;
mod perceptron;

use std::collections::BTreeMap;
use std::fmt;
use std::fs;
use std::path::Path;
use std::str::FromStr;

use phenom_core::text::lower_words;
use phenom_core::Label;
use serde::{Deserialize, Serialize};

use crate::adapter::Adapter;
use crate::error::{Error, Result};
use crate::protocol::{read_records, write_predictions, AdapterRecord, Prediction};

pub use features::features;
pub use perceptron::Perceptron;

pub const MODEL_FILE: &str = "model.json";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Builtin {
    #[serde(alias = "overlap_baseline")]
    Overlap,
    #[serde(alias = "majority_baseline")]
    Majority,
    #[serde(alias = "memorizing_baseline")]
    Memorizing,
    DiffFeatureLearner,
}

impl Builtin {
    pub const ALL: [Builtin; 4] = [
        Builtin::Overlap,
        Builtin::Majority,
        Builtin::Memorizing,
        Builtin::DiffFeatureLearner,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Builtin::Overlap => "overlap",
            Builtin::Majority => "majority",
            Builtin::Memorizing => "memorizing",
            Builtin::DiffFeatureLearner => "diff_feature_learner",
        }
    }
}

impl fmt::Display for Builtin {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Builtin {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.strip_suffix("_baseline").unwrap_or(s);
        Builtin::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown builtin adapter `{s}`")))
    }
}

/// Words ignored by the overlap test.
const STOPWORDS: &[&str] = &[
    "a", "an", "the", "to", "of", "for", "in", "on", "at", "by", "with", "and", "or", "is", "are",
    "was", "were", "be", "been", "has", "have", "had", "do", "does", "did",
];

/// Entailment iff every non-stopword of the hypothesis occurs in the premise
/// at least as often.
pub fn overlap_label(premise: &str, hypothesis: &str) -> Label {
    let counts = |s: &str| {
        let mut m: BTreeMap<String, usize> = BTreeMap::new();
        for w in lower_words(s) {
            if !STOPWORDS.contains(&w.as_str()) {
                *m.entry(w).or_default() += 1;
            }
        }
        m
    };
    let p = counts(premise);
    let contained = counts(hypothesis)
        .into_iter()
        .all(|(w, n)| p.get(&w).is_some_and(|&m| m >= n));
    if contained {
        Label::Entailment
    } else {
        Label::Contradiction
    }
}

fn majority_of(records: &[AdapterRecord]) -> Option<Label> {
    let mut counts: BTreeMap<Label, usize> = BTreeMap::new();
    for l in records.iter().filter_map(|r| r.label) {
        *counts.entry(l).or_default() += 1;
    }
    // Ties go to the earlier label in enum order.
    Label::ALL
        .into_iter()
        .filter(|l| counts.contains_key(l))
        .max_by(|a, b| counts[a].cmp(&counts[b]).then(b.cmp(a)))
}

fn pair_key(r: &AdapterRecord) -> String {
    format!("{}\t{}", r.premise, r.hypothesis)
}

/// What a builtin leaves in its model directory. Predicting from a missing
/// model file behaves exactly like a model trained on no examples.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum TrainedModel {
    Overlap,
    Majority { label: Label },
    Memorizing { table: BTreeMap<String, Label>, fallback: Label },
    DiffFeatureLearner(Perceptron),
}

impl TrainedModel {
    pub fn fit(kind: Builtin, records: &[AdapterRecord], seed: u64) -> Result<Self> {
        if let Some(r) = records.iter().find(|r| r.label.is_none()) {
            return Err(Error::Data(format!("training record `{}` has no label", r.id)));
        }
        let fallback = majority_of(records).unwrap_or(Label::Entailment);
        Ok(match kind {
            Builtin::Overlap => TrainedModel::Overlap,
            Builtin::Majority => TrainedModel::Majority { label: fallback },
            Builtin::Memorizing => TrainedModel::Memorizing {
                table: records
                    .iter()
                    .map(|r| (pair_key(r), r.label.expect("checked")))
                    .collect(),
                fallback,
            },
            Builtin::DiffFeatureLearner => {
                TrainedModel::DiffFeatureLearner(Perceptron::fit(records, seed))
            }
        })
    }

    pub fn kind(&self) -> Builtin {
        match self {
            TrainedModel::Overlap => Builtin::Overlap,
            TrainedModel::Majority { .. } => Builtin::Majority,
            TrainedModel::Memorizing { .. } => Builtin::Memorizing,
            TrainedModel::DiffFeatureLearner(_) => Builtin::DiffFeatureLearner,
        }
    }

    pub fn predict(&self, r: &AdapterRecord) -> Label {
        match self {
            TrainedModel::Overlap => overlap_label(&r.premise, &r.hypothesis),
            TrainedModel::Majority { label } => *label,
            TrainedModel::Memorizing { table, fallback } => {
                table.get(&pair_key(r)).copied().unwrap_or(*fallback)
            }
            TrainedModel::DiffFeatureLearner(p) => p.predict(&r.premise, &r.hypothesis),
        }
    }

    pub fn load(kind: Builtin, model_dir: &Path) -> Result<Self> {
        let path = model_dir.join(MODEL_FILE);
        if !path.exists() {
            return TrainedModel::fit(kind, &[], 0);
        }
        let model: TrainedModel = serde_json::from_str(&fs::read_to_string(&path)?)?;
        if model.kind() != kind {
            return Err(Error::Data(format!(
                "{} holds a {} model, not {kind}",
                path.display(),
                model.kind()
            )));
        }
        Ok(model)
    }
}

/// `train` verb of a builtin.
pub fn train_builtin(kind: Builtin, train: &Path, model_dir: &Path, seed: u64) -> Result<()> {
    let records = read_records(train)?;
    let model = TrainedModel::fit(kind, &records, seed)?;
    fs::create_dir_all(model_dir)?;
    fs::write(model_dir.join(MODEL_FILE), serde_json::to_string(&model)?)?;
    Ok(())
}

/// `predict` verb of a builtin.
pub fn predict_builtin(kind: Builtin, model_dir: &Path, test: &Path, output: &Path) -> Result<()> {
    let model = TrainedModel::load(kind, model_dir)?;
    let predictions: Vec<Prediction> = read_records(test)?
        .iter()
        .map(|r| Prediction {
            id: r.id.clone(),
            label: model.predict(r),
        })
        .collect();
    write_predictions(output, &predictions)
}

#[derive(Debug, Clone)]
pub struct BuiltinAdapter {
    kind: Builtin,
    name: String,
}

impl BuiltinAdapter {
    pub fn new(kind: Builtin) -> Self {
        Self::named(kind, kind.as_str())
    }

    pub fn named(kind: Builtin, name: &str) -> Self {
        Self {
            kind,
            name: name.to_string(),
        }
    }

    pub fn kind(&self) -> Builtin {
        self.kind
    }
}

impl Adapter for BuiltinAdapter {
    fn name(&self) -> &str {
        &self.name
    }

    fn train(&self, train: &Path, model_dir: &Path, seed: u64) -> Result<()> {
        train_builtin(self.kind, train, model_dir, seed)
            .map_err(|e| Error::protocol(&self.name, "train", e.to_string()))
    }

    fn predict(&self, model_dir: &Path, test: &Path, output: &Path) -> Result<()> {
        predict_builtin(self.kind, model_dir, test, output)
            .map_err(|e| Error::protocol(&self.name, "predict", e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(p: &str, h: &str, label: Option<Label>) -> AdapterRecord {
        AdapterRecord {
            id: format!("{p}|{h}"),
            premise: p.into(),
            hypothesis: h.into(),
            label,
        }
    }

    #[test]
    fn overlap_definition() {
        let p = "The allies have promised to lend Italy some of their land.";
        assert_eq!(overlap_label(p, "The allies have promised to lend Italy."), Label::Entailment);
        assert_eq!(
            overlap_label(p, "The allies have promised to lend some of their land to Italy."),
            Label::Entailment
        );
        assert_eq!(overlap_label(p, "The allies have promised to lend Spain."), Label::Contradiction);
        assert_eq!(
            overlap_label("It lasted more than 7 years.", "It lasted more than 2 years."),
            Label::Contradiction
        );
        assert_eq!(overlap_label("Italy Italy", "Italy Italy Italy"), Label::Contradiction);
    }

    #[test]
    fn majority_picks_most_frequent_train_label() {
        let mut train = vec![rec("a", "b", Some(Label::Contradiction)); 5];
        train.extend(vec![rec("a", "b", Some(Label::Entailment)); 10]);
        let m = TrainedModel::fit(Builtin::Majority, &train, 0).unwrap();
        assert_eq!(m, TrainedModel::Majority { label: Label::Entailment });
        let tie = [rec("a", "b", Some(Label::Contradiction)), rec("a", "b", Some(Label::Neutral))];
        assert_eq!(
            TrainedModel::fit(Builtin::Majority, &tie, 0).unwrap().predict(&rec("x", "y", None)),
            Label::Neutral
        );
    }

    #[test]
    fn memorizer_recalls_pairs() {
        let train = [
            rec("p1", "h1", Some(Label::Neutral)),
            rec("p2", "h2", Some(Label::Contradiction)),
            rec("p3", "h3", Some(Label::Contradiction)),
        ];
        let m = TrainedModel::fit(Builtin::Memorizing, &train, 0).unwrap();
        assert_eq!(m.predict(&rec("p1", "h1", None)), Label::Neutral);
        assert_eq!(m.predict(&rec("p9", "h9", None)), Label::Contradiction);
    }

    #[test]
    fn missing_model_equals_empty_training() {
        let dir = tempfile::tempdir().unwrap();
        for kind in Builtin::ALL {
            let loaded = TrainedModel::load(kind, &dir.path().join("none")).unwrap();
            assert_eq!(loaded, TrainedModel::fit(kind, &[], 7).unwrap());
        }
    }

    #[test]
    fn names_parse() {
        assert_eq!("overlap_baseline".parse::<Builtin>().unwrap(), Builtin::Overlap);
        assert_eq!("diff_feature_learner".parse::<Builtin>().unwrap(), Builtin::DiffFeatureLearner);
        assert!("bert".parse::<Builtin>().is_err());
    }
}
