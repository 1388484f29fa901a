use std::collections::{BTreeMap, BTreeSet};

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::model::{Complexity, Label, NliExample};

use super::{balance_labels, ids, shuffled, DatasetSplit};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainTestSpec {
    pub train_fraction: f64,
    pub seed: u64,
}

impl Default for TrainTestSpec {
    fn default() -> Self {
        Self {
            train_fraction: 0.77,
            seed: 0,
        }
    }
}

/// Template-disjoint split whose example share approximates the train
/// fraction. Each complexity class with two or more templates puts one on
/// each side; the rest go largest first to whichever side is further below
/// its target. Both sides are then label balanced exactly.
pub fn make_train_test(examples: &[NliExample], spec: &TrainTestSpec) -> Result<DatasetSplit> {
    let f = spec.train_fraction;
    if !(f > 0.0 && f < 1.0) {
        return Err(Error::InvalidConfig(format!(
            "train fraction {f} must lie strictly between 0 and 1"
        )));
    }
    let mut sizes: BTreeMap<&str, (Complexity, usize)> = BTreeMap::new();
    for e in examples {
        sizes.entry(&e.template_id).or_insert((e.complexity, 0)).1 += 1;
    }
    if sizes.len() < 2 {
        return Err(Error::Split(format!(
            "a template-disjoint split needs at least 2 templates, found {}",
            sizes.len()
        )));
    }
    let total: usize = sizes.values().map(|v| v.1).sum();
    let names: Vec<&str> = sizes.keys().copied().collect();
    let order = shuffled(&names, spec.seed, &["train_test"]);

    let mut train: BTreeSet<&str> = BTreeSet::new();
    let mut test: BTreeSet<&str> = BTreeSet::new();
    let (mut n_train, mut n_test) = (0usize, 0usize);
    for class in Complexity::ALL {
        let members: Vec<&str> = order.iter().copied().filter(|t| sizes[t].0 == class).collect();
        if let [a, b, ..] = members[..] {
            train.insert(a);
            n_train += sizes[a].1;
            test.insert(b);
            n_test += sizes[b].1;
        }
    }
    let mut rest: Vec<&str> = order
        .iter()
        .copied()
        .filter(|t| !train.contains(t) && !test.contains(t))
        .collect();
    rest.sort_by_key(|t| std::cmp::Reverse(sizes[t].1));
    for t in rest {
        let want_train = f * total as f64 - n_train as f64;
        let want_test = (1.0 - f) * total as f64 - n_test as f64;
        if want_train >= want_test {
            train.insert(t);
            n_train += sizes[t].1;
        } else {
            test.insert(t);
            n_test += sizes[t].1;
        }
    }
    if test.is_empty() {
        // No class had two templates and everything went to train.
        let moved = *train.iter().min_by_key(|t| sizes[*t].1).expect("two templates");
        train.remove(moved);
        n_train -= sizes[moved].1;
        test.insert(moved);
    }

    let labels: Vec<Label> = Label::ALL
        .into_iter()
        .filter(|l| examples.iter().any(|e| e.label == *l))
        .collect();
    let side = |names: &BTreeSet<&str>, which: &str| -> Result<Vec<NliExample>> {
        let chosen: Vec<NliExample> = examples
            .iter()
            .filter(|e| names.contains(e.template_id.as_str()))
            .cloned()
            .collect();
        balance_labels(chosen, &labels, crate::seed::derive(spec.seed, &[which]))
            .map_err(|e| Error::Split(format!("{which} side: {e}")))
    };
    let train_examples = side(&train, "train")?;
    let test_examples = side(&test, "test")?;

    let mut split = DatasetSplit::new("train_test", spec.seed).tag("templates", "train", "test");
    split.template_disjoint = true;
    split.metadata.insert("train_fraction".into(), json!(f));
    split.metadata.insert(
        "template_train_share".into(),
        json!(n_train as f64 / total as f64),
    );
    split.metadata.insert("train_templates".into(), json!(train));
    split.metadata.insert("test_templates".into(), json!(test));
    split.train = ids(&train_examples);
    split.test = ids(&test_examples);
    Ok(split)
}
