//! Controlled train/test splits along syntax, lexical content, dative verb
//! and number range, and the template-disjoint fine-tuning split.

mod lexical;
mod suite;
mod train_test;

use std::collections::{BTreeMap, BTreeSet, HashMap};

use rand::seq::{index, SliceRandom};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Complexity, ExampleId, Label, NliExample, Phenomenon};
use crate::seed;

pub use lexical::{
    apply_verb_swap, make_lexical_partition, make_range_datasets, materialize_partition,
    LexicalPartition,
};
pub use suite::{make_generalization_suite, Axis, SplitSuite, SuiteSpec};
pub use train_test::{make_train_test, TrainTestSpec};

/// Train and test id lists plus the dimensions they were controlled on.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DatasetSplit {
    pub name: String,
    /// Dimension name to (train value, test value).
    pub control_tags: BTreeMap<String, (String, String)>,
    pub seed: u64,
    pub template_disjoint: bool,
    /// Largest allowed difference between label counts on one side.
    pub balance_tolerance: usize,
    #[serde(default)]
    pub metadata: BTreeMap<String, serde_json::Value>,
    pub train: Vec<ExampleId>,
    pub test: Vec<ExampleId>,
}

impl DatasetSplit {
    pub fn new(name: impl Into<String>, seed: u64) -> Self {
        Self {
            name: name.into(),
            control_tags: BTreeMap::new(),
            seed,
            template_disjoint: false,
            balance_tolerance: 0,
            metadata: BTreeMap::new(),
            train: Vec::new(),
            test: Vec::new(),
        }
    }

    pub fn tag(mut self, dimension: &str, train: &str, test: &str) -> Self {
        self.control_tags
            .insert(dimension.to_string(), (train.to_string(), test.to_string()));
        self
    }

    /// Resolves both sides against the pool.
    pub fn materialize(&self, pool: &ExamplePool) -> Result<(Vec<NliExample>, Vec<NliExample>)> {
        Ok((pool.resolve(&self.train)?, pool.resolve(&self.test)?))
    }

    /// Checks disjointness, template disjointness where declared, and
    /// label balance.
    pub fn check(&self, pool: &ExamplePool) -> Result<()> {
        let fail = |m: String| Err(Error::Split(format!("{}: {m}", self.name)));
        let train_ids: BTreeSet<&ExampleId> = self.train.iter().collect();
        if train_ids.len() != self.train.len() {
            return fail("train repeats an id".into());
        }
        if let Some(id) = self.test.iter().find(|id| train_ids.contains(id)) {
            return fail(format!("`{id}` is on both sides"));
        }
        let (train, test) = self.materialize(pool)?;
        if self.template_disjoint {
            let train_t: BTreeSet<&str> = train.iter().map(|e| e.template_id.as_str()).collect();
            if let Some(e) = test.iter().find(|e| train_t.contains(e.template_id.as_str())) {
                return fail(format!("template `{}` is on both sides", e.template_id));
            }
        }
        for (side, examples) in [("train", &train), ("test", &test)] {
            let counts = label_counts(examples);
            let present: Vec<usize> = counts.values().copied().filter(|&c| c > 0).collect();
            let (lo, hi) = (
                present.iter().min().copied().unwrap_or(0),
                present.iter().max().copied().unwrap_or(0),
            );
            if hi - lo > self.balance_tolerance {
                return fail(format!("{side} labels unbalanced: {counts:?}"));
            }
        }
        Ok(())
    }
}

/// Examples addressable by id.
#[derive(Debug, Clone, Default)]
pub struct ExamplePool {
    examples: Vec<NliExample>,
    index: HashMap<ExampleId, usize>,
}

impl ExamplePool {
    pub fn new(examples: Vec<NliExample>) -> Result<Self> {
        let mut index = HashMap::with_capacity(examples.len());
        for (i, e) in examples.iter().enumerate() {
            if index.insert(e.id.clone(), i).is_some() {
                return Err(Error::Split(format!("example id `{}` occurs twice", e.id)));
            }
        }
        Ok(Self { examples, index })
    }

    pub fn get(&self, id: &ExampleId) -> Option<&NliExample> {
        self.index.get(id).map(|&i| &self.examples[i])
    }

    pub fn resolve(&self, ids: &[ExampleId]) -> Result<Vec<NliExample>> {
        ids.iter()
            .map(|id| {
                self.get(id)
                    .cloned()
                    .ok_or_else(|| Error::Split(format!("unknown example id `{id}`")))
            })
            .collect()
    }

    pub fn examples(&self) -> &[NliExample] {
        &self.examples
    }

    pub fn into_examples(self) -> Vec<NliExample> {
        self.examples
    }

    pub fn len(&self) -> usize {
        self.examples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.examples.is_empty()
    }
}

/// Labels a phenomenon can produce; dative rules yield no neutral pairs.
pub fn phenomenon_labels(p: Phenomenon) -> &'static [Label] {
    match p {
        Phenomenon::DativeAlternation => &[Label::Entailment, Label::Contradiction],
        Phenomenon::NumericalReasoning => &Label::ALL,
    }
}

pub fn label_counts(examples: &[NliExample]) -> BTreeMap<Label, usize> {
    let mut counts: BTreeMap<Label, usize> = Label::ALL.iter().map(|&l| (l, 0)).collect();
    for e in examples {
        *counts.entry(e.label).or_default() += 1;
    }
    counts
}

/// Partition by complexity tag; every class is present, possibly empty.
pub fn split_by_complexity(examples: &[NliExample]) -> BTreeMap<Complexity, Vec<NliExample>> {
    let mut out: BTreeMap<Complexity, Vec<NliExample>> =
        Complexity::ALL.iter().map(|&c| (c, Vec::new())).collect();
    for e in examples {
        out.entry(e.complexity).or_default().push(e.clone());
    }
    out
}

fn by_label(examples: Vec<NliExample>) -> BTreeMap<Label, Vec<NliExample>> {
    let mut groups: BTreeMap<Label, Vec<NliExample>> = BTreeMap::new();
    for e in examples {
        groups.entry(e.label).or_default().push(e);
    }
    groups
}

fn take_sample(
    mut group: Vec<NliExample>,
    k: usize,
    seed: u64,
    label: Label,
) -> Vec<NliExample> {
    group.sort_by(|a, b| a.id.cmp(&b.id));
    if k >= group.len() {
        return group;
    }
    let mut rng = seed::rng_for(seed, &["sample", label.as_str()]);
    let mut picks = index::sample(&mut rng, group.len(), k).into_vec();
    picks.sort_unstable();
    let mut slots: Vec<Option<NliExample>> = group.into_iter().map(Some).collect();
    picks.into_iter().map(|i| slots[i].take().expect("distinct")).collect()
}

/// Downsamples every label to the count of the rarest one. Each of `labels`
/// must be present. Output is sorted by id.
pub fn balance_labels(examples: Vec<NliExample>, labels: &[Label], seed: u64) -> Result<Vec<NliExample>> {
    let mut groups = by_label(examples);
    let minority = labels
        .iter()
        .map(|l| groups.get(l).map_or(0, Vec::len))
        .min()
        .unwrap_or(0);
    if let Some(missing) = labels.iter().find(|l| groups.get(l).map_or(0, Vec::len) == 0) {
        return Err(Error::Split(format!("no {missing} examples to balance")));
    }
    let mut out = Vec::with_capacity(minority * labels.len());
    for &l in labels {
        out.extend(take_sample(groups.remove(&l).unwrap_or_default(), minority, seed, l));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Label-balanced sample of `k` examples; with `k` not divisible by the
/// label count the first labels get one extra.
pub fn balanced_sample(
    examples: Vec<NliExample>,
    k: usize,
    labels: &[Label],
    seed: u64,
) -> Result<Vec<NliExample>> {
    if labels.is_empty() {
        return Err(Error::EmptyInput("label set"));
    }
    let mut groups = by_label(examples);
    let mut out = Vec::with_capacity(k);
    for (i, &l) in labels.iter().enumerate() {
        let want = k / labels.len() + usize::from(i < k % labels.len());
        let group = groups.remove(&l).unwrap_or_default();
        if group.len() < want {
            return Err(Error::SampleTooLarge {
                requested: want as u64,
                available: group.len() as u64,
            });
        }
        out.extend(take_sample(group, want, seed, l));
    }
    out.sort_by(|a, b| a.id.cmp(&b.id));
    Ok(out)
}

/// Seeded permutation of `items`, starting from their given order.
pub(crate) fn shuffled<T: Clone>(items: &[T], seed: u64, parts: &[&str]) -> Vec<T> {
    let mut v = items.to_vec();
    v.shuffle(&mut seed::rng_for(seed, parts));
    v
}

pub(crate) fn ids(examples: &[NliExample]) -> Vec<ExampleId> {
    examples.iter().map(|e| e.id.clone()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::Assignment;

    fn ex(t: &str, i: usize, label: Label) -> NliExample {
        NliExample {
            id: ExampleId::new(t, Assignment::new(vec![i]), "h"),
            premise: format!("p{i}"),
            hypothesis: "h".into(),
            label,
            template_id: t.into(),
            rule_id: "r".into(),
            complexity: Complexity::Simple,
            lexical_group: None,
            range_tag: None,
            numeric_info: None,
        }
    }

    #[test]
    fn balancing_downsamples_to_minority() {
        let labels = [Label::Entailment, Label::Contradiction];
        let data: Vec<_> = (0..30)
            .map(|i| ex("t", i, if i % 3 == 0 { Label::Contradiction } else { Label::Entailment }))
            .collect();
        let b = balance_labels(data.clone(), &labels, 4).unwrap();
        let c = label_counts(&b);
        assert_eq!(c[&Label::Entailment], 10);
        assert_eq!(c[&Label::Contradiction], 10);
        assert_eq!(b, balance_labels(data.clone(), &labels, 4).unwrap());
        assert!(balance_labels(data, &Label::ALL, 4).is_err());
    }

    #[test]
    fn complexity_partition_keeps_every_class() {
        let parts = split_by_complexity(&[]);
        assert_eq!(parts.len(), 3);
        assert!(parts.values().all(Vec::is_empty));
    }

    #[test]
    fn split_check_catches_overlap() {
        let pool = ExamplePool::new(vec![ex("a", 0, Label::Entailment), ex("b", 0, Label::Entailment)]).unwrap();
        let mut s = DatasetSplit::new("x", 0);
        s.train = vec![pool.examples()[0].id.clone()];
        s.test = s.train.clone();
        assert!(s.check(&pool).is_err());
        s.test = vec![pool.examples()[1].id.clone()];
        assert!(s.check(&pool).is_ok());
    }
}
