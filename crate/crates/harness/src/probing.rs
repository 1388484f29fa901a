//! Evaluation of an untrained model on balanced per-complexity samples.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use phenom_core::splitter::{balance_labels, balanced_sample};
use phenom_core::{seed, Complexity, Label, NliExample};
use serde::{Deserialize, Serialize};

use crate::adapter::Adapter;
use crate::error::{Error, Result};
use crate::metrics::{evaluate, SliceAccuracy, ALL, MACRO};
use crate::protocol::{write_test_file, EvalItem};

pub const DEFAULT_SAMPLE_SIZE: usize = 4000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProbingReport {
    pub adapter: String,
    pub sample_size: usize,
    pub seed: u64,
    pub cells: Vec<SliceAccuracy>,
}

impl ProbingReport {
    pub fn cell(&self, complexity: &str, label: &str) -> Option<&SliceAccuracy> {
        self.cells
            .iter()
            .find(|c| c.complexity == complexity && c.label == label)
    }

    fn columns(&self) -> Vec<String> {
        let mut labels: Vec<String> = Label::ALL
            .iter()
            .map(|l| l.to_string())
            .filter(|l| self.cells.iter().any(|c| &c.label == l))
            .collect();
        labels.push(ALL.to_string());
        labels.push(MACRO.to_string());
        labels
    }

    fn rows(&self) -> Vec<String> {
        let mut rows: Vec<String> = Vec::new();
        for c in &self.cells {
            if !rows.contains(&c.complexity) {
                rows.push(c.complexity.clone());
            }
        }
        rows
    }

    /// Complexity rows by label columns; `all` is the micro average and
    /// `macro` the unweighted label mean.
    pub fn to_csv(&self) -> String {
        let cols = self.columns();
        let mut out = format!("complexity,n,{}\n", cols.join(","));
        for row in self.rows() {
            let n = self.cell(&row, ALL).map_or(0, |c| c.n);
            let _ = write!(out, "{row},{n}");
            for col in &cols {
                match self.cell(&row, col) {
                    Some(c) => {
                        let _ = write!(out, ",{:.4}", c.accuracy);
                    }
                    None => out.push(','),
                }
            }
            out.push('\n');
        }
        out
    }

    pub fn to_text(&self) -> String {
        let cols = self.columns();
        let mut out = format!(
            "probing {} (up to {} examples per class, seed {})\n{:<10}",
            self.adapter, self.sample_size, self.seed, "",
        );
        for col in &cols {
            let _ = write!(out, " {col:>13}");
        }
        out.push('\n');
        for row in self.rows() {
            let _ = write!(out, "{row:<10}");
            for col in &cols {
                match self.cell(&row, col) {
                    Some(c) => {
                        let _ = write!(out, " {:>13.2}", 100.0 * c.accuracy);
                    }
                    None => {
                        let _ = write!(out, " {:>13}", "-");
                    }
                }
            }
            out.push('\n');
        }
        out
    }
}

/// Label-balanced sample of one complexity class, at most `sample_size`.
pub fn probing_sample(examples: &[NliExample], class: Complexity, sample_size: usize, seed: u64) -> Result<Vec<NliExample>> {
    let labels: Vec<Label> = Label::ALL
        .into_iter()
        .filter(|l| examples.iter().any(|e| e.label == *l))
        .collect();
    let s = seed::derive(seed, &["probing", class.as_str()]);
    let balanced = balance_labels(examples.to_vec(), &labels, s)?;
    if balanced.len() > sample_size {
        Ok(balanced_sample(balanced, sample_size, &labels, s)?)
    } else {
        Ok(balanced)
    }
}

/// Predicts without a train step on a balanced sample of each complexity
/// class and reports accuracy per class and label.
pub fn run_probing(
    adapter: &dyn Adapter,
    test_sets: &BTreeMap<Complexity, Vec<NliExample>>,
    sample_size: usize,
    seed: u64,
    workdir: &Path,
) -> Result<ProbingReport> {
    if sample_size == 0 {
        return Err(Error::Config("probing sample size must be positive".into()));
    }
    let mut items = Vec::new();
    for (&class, examples) in test_sets {
        if examples.is_empty() {
            continue;
        }
        let sample = probing_sample(examples, class, sample_size, seed)?;
        items.extend(sample.iter().map(EvalItem::from_example));
    }
    if items.is_empty() {
        return Err(Error::Data("no probing examples".into()));
    }
    probe_items(adapter, &items, sample_size, seed, workdir)
}

/// Probing on a fixed set of items, without sampling.
pub fn probe_items(
    adapter: &dyn Adapter,
    items: &[EvalItem],
    sample_size: usize,
    seed: u64,
    workdir: &Path,
) -> Result<ProbingReport> {
    let dir = workdir.join("probing");
    if dir.exists() {
        fs::remove_dir_all(&dir)?;
    }
    let model = dir.join("model");
    fs::create_dir_all(&model)?;
    let test = dir.join("test.jsonl");
    write_test_file(&test, items)?;
    let cells = evaluate(adapter, &model, items, &test, &dir.join("predictions.jsonl"))?;
    Ok(ProbingReport {
        adapter: adapter.name().to_string(),
        sample_size,
        seed,
        cells,
    })
}
