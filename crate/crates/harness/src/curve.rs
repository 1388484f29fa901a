//! Learning curves: accuracy as a function of the number of training
//! examples, one cold-started model per schedule point.

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::{Path, PathBuf};

use phenom_core::splitter::{DatasetSplit, ExamplePool};
use phenom_core::{seed, Label, NliExample, Phenomenon};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use crate::adapter::{Adapter, AdapterSpec};
use crate::error::{Error, ErrorKind, Result};
use crate::metrics::{evaluate, SliceAccuracy};
use crate::protocol::{check_no_leak, read_records, write_test_file, write_train_file, AdapterRecord, EvalItem};

pub const DATIVE_SCHEDULE: [usize; 8] = [0, 50, 100, 250, 500, 1000, 2000, 4000];
pub const NUMERIC_SCHEDULE: [usize; 8] = [0, 100, 500, 1000, 5000, 10_000, 50_000, 100_000];

pub fn default_schedule(p: Phenomenon) -> Vec<usize> {
    match p {
        Phenomenon::DativeAlternation => DATIVE_SCHEDULE.to_vec(),
        Phenomenon::NumericalReasoning => NUMERIC_SCHEDULE.to_vec(),
    }
}

fn default_repeats() -> usize {
    5
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub adapter: AdapterSpec,
    pub train_sizes: Vec<usize>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub regression_set: Option<PathBuf>,
    #[serde(default)]
    pub seed: u64,
}

impl ExperimentConfig {
    pub fn new(adapter: AdapterSpec, train_sizes: Vec<usize>) -> Self {
        Self {
            adapter,
            train_sizes,
            repeats: default_repeats(),
            regression_set: None,
            seed: 0,
        }
    }

    /// Checks the schedule against `available` training examples.
    pub fn validate(&self, available: usize) -> Result<()> {
        self.adapter.validate()?;
        let bad = |m: String| Err(Error::Config(m));
        if self.repeats == 0 {
            return bad("repeats must be at least 1".into());
        }
        match self.train_sizes.first() {
            Some(0) => {}
            _ => return bad("the schedule must start at 0".into()),
        }
        if !self.train_sizes.windows(2).all(|w| w[0] < w[1]) {
            return bad("the schedule must be strictly ascending".into());
        }
        let max = *self.train_sizes.last().expect("non-empty");
        if max > available {
            return bad(format!("schedule reaches {max} but only {available} training examples exist"));
        }
        Ok(())
    }
}

/// One train/test pairing of a curve or matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Condition {
    pub name: String,
    pub control_tags: BTreeMap<String, (String, String)>,
    pub train: Vec<NliExample>,
    pub test: Vec<NliExample>,
}

impl Condition {
    pub fn from_split(split: &DatasetSplit, pool: &ExamplePool) -> Result<Self> {
        let (train, test) = split.materialize(pool)?;
        Ok(Self {
            name: split.name.clone(),
            control_tags: split.control_tags.clone(),
            train,
            test,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EvalSet {
    Test,
    Regression,
}

impl EvalSet {
    pub fn as_str(self) -> &'static str {
        match self {
            EvalSet::Test => "test",
            EvalSet::Regression => "regression",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CurveRow {
    pub condition: String,
    pub set: EvalSet,
    pub train_size: usize,
    pub repeat: usize,
    pub complexity: String,
    pub label: String,
    pub n: usize,
    pub accuracy: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunFailure {
    pub condition: String,
    pub repeat: usize,
    pub train_size: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionInfo {
    pub name: String,
    pub control_tags: BTreeMap<String, (String, String)>,
}

/// Mean and standard deviation over repeats of one slice at one size.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AggregateRow {
    pub condition: String,
    pub set: EvalSet,
    pub train_size: usize,
    pub complexity: String,
    pub label: String,
    pub n: usize,
    pub repeats: usize,
    pub mean: f64,
    /// Sample standard deviation; 0 with a single repeat.
    pub std: f64,
}

type AggregateKey = (EvalSet, usize, usize, usize);

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LearningCurve {
    pub adapter: String,
    pub conditions: Vec<ConditionInfo>,
    pub rows: Vec<CurveRow>,
    pub failures: Vec<RunFailure>,
}

impl LearningCurve {
    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Aggregates ordered by set, condition, train size and then slices in
    /// the order they first appear in the rows.
    pub fn aggregates(&self) -> Vec<AggregateRow> {
        let order: BTreeMap<&str, usize> = self
            .conditions
            .iter()
            .enumerate()
            .map(|(i, c)| (c.name.as_str(), i))
            .collect();
        let mut slices: Vec<(&str, &str)> = Vec::new();
        // (set, condition rank, train size, slice rank)
        let mut groups: BTreeMap<AggregateKey, (&CurveRow, Vec<f64>)> = BTreeMap::new();
        for r in &self.rows {
            let slice = (r.complexity.as_str(), r.label.as_str());
            let rank = match slices.iter().position(|s| *s == slice) {
                Some(i) => i,
                None => {
                    slices.push(slice);
                    slices.len() - 1
                }
            };
            let ci = order.get(r.condition.as_str()).copied().unwrap_or(usize::MAX);
            groups
                .entry((r.set, ci, r.train_size, rank))
                .or_insert((r, Vec::new()))
                .1
                .push(r.accuracy);
        }
        groups
            .into_values()
            .map(|(first, accs)| {
                let k = accs.len() as f64;
                let mean = accs.iter().sum::<f64>() / k;
                let std = if accs.len() > 1 {
                    (accs.iter().map(|a| (a - mean).powi(2)).sum::<f64>() / (k - 1.0)).sqrt()
                } else {
                    0.0
                };
                AggregateRow {
                    condition: first.condition.clone(),
                    set: first.set,
                    train_size: first.train_size,
                    complexity: first.complexity.clone(),
                    label: first.label.clone(),
                    n: first.n,
                    repeats: accs.len(),
                    mean,
                    std,
                }
            })
            .collect()
    }

    /// Mean accuracy of one slice per train size.
    pub fn series(&self, condition: &str, set: EvalSet, complexity: &str, label: &str) -> Vec<(usize, f64, f64)> {
        self.aggregates()
            .into_iter()
            .filter(|a| a.condition == condition && a.set == set && a.complexity == complexity && a.label == label)
            .map(|a| (a.train_size, a.mean, a.std))
            .collect()
    }
}

/// Training order for one repeat: each label's examples shuffled, then
/// interleaved so that every prefix is as balanced as possible.
pub fn balanced_order(train: &[NliExample], seed: u64) -> Vec<&NliExample> {
    let mut groups: BTreeMap<Label, Vec<&NliExample>> = BTreeMap::new();
    for e in train {
        groups.entry(e.label).or_default().push(e);
    }
    let mut queues: Vec<std::vec::IntoIter<&NliExample>> = groups
        .into_iter()
        .map(|(label, mut group)| {
            group.sort_by(|a, b| a.id.cmp(&b.id));
            group.shuffle(&mut seed::rng_for(seed, &["order", label.as_str()]));
            group.into_iter()
        })
        .collect();
    let mut out = Vec::with_capacity(train.len());
    loop {
        let before = out.len();
        for q in &mut queues {
            out.extend(q.next());
        }
        if out.len() == before {
            return out;
        }
    }
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' { c } else { '_' })
        .collect()
}

fn rows_from(
    condition: &str,
    set: EvalSet,
    train_size: usize,
    repeat: usize,
    cells: Vec<SliceAccuracy>,
) -> impl Iterator<Item = CurveRow> + '_ {
    cells.into_iter().map(move |c| CurveRow {
        condition: condition.to_string(),
        set,
        train_size,
        repeat,
        complexity: c.complexity,
        label: c.label,
        n: c.n,
        accuracy: c.accuracy,
    })
}

fn load_regression(config: &ExperimentConfig) -> Result<Vec<EvalItem>> {
    match &config.regression_set {
        None => Ok(Vec::new()),
        Some(path) => read_records(path)?.into_iter().map(EvalItem::from_record).collect(),
    }
}

struct Prepared<'a> {
    test_items: Vec<EvalItem>,
    test_path: PathBuf,
    regression: &'a [EvalItem],
    regression_path: PathBuf,
}

#[allow(clippy::too_many_arguments)]
fn run_repeat(
    adapter: &dyn Adapter,
    condition: &Condition,
    config: &ExperimentConfig,
    prepared: &Prepared<'_>,
    repeat: usize,
    dir: &Path,
    rows: &mut Vec<CurveRow>,
    at: &mut usize,
) -> Result<()> {
    let repeat_seed = seed::derive(config.seed, &["repeat", &repeat.to_string()]);
    let order = balanced_order(&condition.train, repeat_seed);
    let test_ids: BTreeSet<&str> = prepared.test_items.iter().map(|i| i.record.id.as_str()).collect();
    for &k in &config.train_sizes {
        *at = k;
        let point = dir.join(format!("r{repeat}")).join(format!("k{k}"));
        if point.exists() {
            fs::remove_dir_all(&point)?;
        }
        let model = point.join("model");
        fs::create_dir_all(&model)?;
        let records: Vec<AdapterRecord> = order[..k].iter().map(|e| AdapterRecord::labeled(e)).collect();
        check_no_leak(records.iter().map(|r| r.id.as_str()), test_ids.iter().copied())?;
        let train_path = point.join("train.jsonl");
        write_train_file(&train_path, &records)?;
        adapter.train(&train_path, &model, repeat_seed)?;
        let cells = evaluate(
            adapter,
            &model,
            &prepared.test_items,
            &prepared.test_path,
            &point.join("test.predictions.jsonl"),
        )?;
        rows.extend(rows_from(&condition.name, EvalSet::Test, k, repeat, cells));
        if !prepared.regression.is_empty() {
            let cells = evaluate(
                adapter,
                &model,
                prepared.regression,
                &prepared.regression_path,
                &point.join("regression.predictions.jsonl"),
            )?;
            rows.extend(rows_from(&condition.name, EvalSet::Regression, k, repeat, cells));
        }
    }
    Ok(())
}

fn curve_with(
    adapter: &dyn Adapter,
    condition: &Condition,
    config: &ExperimentConfig,
    regression: &[EvalItem],
    workdir: &Path,
) -> Result<LearningCurve> {
    config.validate(condition.train.len())?;
    if condition.test.is_empty() {
        return Err(Error::Data(format!("condition `{}` has no test examples", condition.name)));
    }
    let dir = workdir.join(slug(&condition.name));
    fs::create_dir_all(&dir)?;
    let test_items: Vec<EvalItem> = condition.test.iter().map(EvalItem::from_example).collect();
    let test_path = dir.join("test.jsonl");
    write_test_file(&test_path, &test_items)?;
    let regression_path = dir.join("regression.jsonl");
    if !regression.is_empty() {
        write_test_file(&regression_path, regression)?;
    }
    let prepared = Prepared {
        test_items,
        test_path,
        regression,
        regression_path,
    };
    let mut curve = LearningCurve {
        adapter: adapter.name().to_string(),
        conditions: vec![ConditionInfo {
            name: condition.name.clone(),
            control_tags: condition.control_tags.clone(),
        }],
        rows: Vec::new(),
        failures: Vec::new(),
    };
    for repeat in 0..config.repeats {
        let mut rows = Vec::new();
        let mut at = 0;
        match run_repeat(adapter, condition, config, &prepared, repeat, &dir, &mut rows, &mut at) {
            Ok(()) => curve.rows.extend(rows),
            Err(e) if e.kind() == ErrorKind::Adapter => curve.failures.push(RunFailure {
                condition: condition.name.clone(),
                repeat,
                train_size: at,
                message: e.to_string(),
            }),
            Err(e) => return Err(e),
        }
    }
    Ok(curve)
}

/// Trains on the first k examples of a label-balanced shuffle for every k
/// of the schedule, from scratch each time, and evaluates on the fixed test
/// set and the optional regression set. A repeat whose adapter fails is
/// recorded in `failures` and contributes no rows.
pub fn run_learning_curve(
    condition: &Condition,
    config: &ExperimentConfig,
    workdir: &Path,
) -> Result<LearningCurve> {
    let adapter = config.adapter.instantiate()?;
    let regression = load_regression(config)?;
    curve_with(adapter.as_ref(), condition, config, &regression, workdir)
}

/// Same as `run_learning_curve` with an already built adapter.
pub fn run_learning_curve_with(
    adapter: &dyn Adapter,
    condition: &Condition,
    config: &ExperimentConfig,
    workdir: &Path,
) -> Result<LearningCurve> {
    let regression = load_regression(config)?;
    curve_with(adapter, condition, config, &regression, workdir)
}

/// One curve per condition, all sharing adapter, schedule and repeats.
pub fn run_generalization_matrix(
    suite: &[(Condition, ExperimentConfig)],
    workdir: &Path,
) -> Result<LearningCurve> {
    let Some((_, first)) = suite.first() else {
        return Err(Error::Config("empty suite".into()));
    };
    let mut names = BTreeSet::new();
    for (c, config) in suite {
        if config.adapter != first.adapter {
            return Err(Error::Config(format!(
                "suite mixes adapters `{}` and `{}`",
                first.adapter.name, config.adapter.name
            )));
        }
        if config.train_sizes != first.train_sizes || config.repeats != first.repeats {
            return Err(Error::Config(format!("condition `{}` uses a different schedule", c.name)));
        }
        if !names.insert(c.name.as_str()) {
            return Err(Error::Config(format!("condition `{}` appears twice", c.name)));
        }
    }
    let adapter = first.adapter.instantiate()?;
    let mut out: Option<LearningCurve> = None;
    for (condition, config) in suite {
        let regression = load_regression(config)?;
        let curve = curve_with(adapter.as_ref(), condition, config, &regression, workdir)?;
        match &mut out {
            None => out = Some(curve),
            Some(acc) => {
                acc.conditions.extend(curve.conditions);
                acc.rows.extend(curve.rows);
                acc.failures.extend(curve.failures);
            }
        }
    }
    Ok(out.expect("non-empty suite"))
}
