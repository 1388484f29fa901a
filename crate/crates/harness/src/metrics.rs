//! Accuracy per complexity and label slice.

use std::collections::BTreeMap;
use std::path::Path;

use phenom_core::{Complexity, Label};
use serde::{Deserialize, Serialize};

use crate::adapter::Adapter;
use crate::error::Result;
use crate::protocol::{read_predictions, EvalItem};

/// Slice name covering every complexity or, as a label, micro-averaged
/// over all examples.
pub const ALL: &str = "all";
/// Label slice averaging the per-label accuracies with equal weight.
pub const MACRO: &str = "macro";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SliceAccuracy {
    pub complexity: String,
    pub label: String,
    pub n: usize,
    pub accuracy: f64,
}

fn slice_rows(complexity: &str, pairs: &[(Label, Label)], out: &mut Vec<SliceAccuracy>) {
    let mut per: BTreeMap<Label, (usize, usize)> = BTreeMap::new();
    for &(gold, pred) in pairs {
        let e = per.entry(gold).or_default();
        e.0 += usize::from(gold == pred);
        e.1 += 1;
    }
    let mut label_acc = Vec::new();
    for (label, (correct, n)) in &per {
        let acc = *correct as f64 / *n as f64;
        label_acc.push(acc);
        out.push(SliceAccuracy {
            complexity: complexity.to_string(),
            label: label.to_string(),
            n: *n,
            accuracy: acc,
        });
    }
    let correct: usize = per.values().map(|v| v.0).sum();
    out.push(SliceAccuracy {
        complexity: complexity.to_string(),
        label: ALL.to_string(),
        n: pairs.len(),
        accuracy: correct as f64 / pairs.len() as f64,
    });
    out.push(SliceAccuracy {
        complexity: complexity.to_string(),
        label: MACRO.to_string(),
        n: pairs.len(),
        accuracy: label_acc.iter().sum::<f64>() / label_acc.len() as f64,
    });
}

/// Rows for every complexity present, then `all`; within each, every gold
/// label present, then `all` and `macro`.
pub fn score(items: &[EvalItem], predictions: &BTreeMap<String, Label>) -> Vec<SliceAccuracy> {
    let mut by_class: BTreeMap<Complexity, Vec<(Label, Label)>> = BTreeMap::new();
    let mut all = Vec::with_capacity(items.len());
    for item in items {
        let pred = predictions[&item.record.id];
        all.push((item.gold, pred));
        if let Some(c) = item.complexity {
            by_class.entry(c).or_default().push((item.gold, pred));
        }
    }
    let mut out = Vec::new();
    if all.is_empty() {
        return out;
    }
    for (c, pairs) in &by_class {
        slice_rows(c.as_str(), pairs, &mut out);
    }
    slice_rows(ALL, &all, &mut out);
    out
}

/// Asks the adapter for predictions on an already written test file and
/// scores them against `items`.
pub(crate) fn evaluate(
    adapter: &dyn Adapter,
    model_dir: &Path,
    items: &[EvalItem],
    test: &Path,
    output: &Path,
) -> Result<Vec<SliceAccuracy>> {
    adapter.predict(model_dir, test, output)?;
    let ids: Vec<&str> = items.iter().map(|i| i.record.id.as_str()).collect();
    let predictions = read_predictions(adapter.name(), output, &ids)?;
    Ok(score(items, &predictions))
}
