use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::error::{Error, Result};
use crate::generator::{GenerationConfig, NumberRange, Variant};
use crate::model::{Complexity, Label, LexicalGroup, NliExample, Phenomenon, PremiseTemplate};
use crate::seed;

use super::{
    apply_verb_swap, balance_labels, balanced_sample, ids, make_lexical_partition,
    make_range_datasets, materialize_partition, phenomenon_labels, shuffled, DatasetSplit,
    ExamplePool,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Syntax,
    Lexical,
    Verb,
    Range,
}

impl Axis {
    pub const ALL: [Axis; 4] = [Axis::Syntax, Axis::Lexical, Axis::Verb, Axis::Range];

    pub fn as_str(self) -> &'static str {
        match self {
            Axis::Syntax => "syntax",
            Axis::Lexical => "lexical",
            Axis::Verb => "verb",
            Axis::Range => "range",
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Axis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Axis::ALL
            .into_iter()
            .find(|a| a.as_str() == s)
            .ok_or_else(|| Error::InvalidConfig(format!("unknown axis `{s}`")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct SuiteSpec {
    pub seed: u64,
    /// Templates per complexity class on the lexical and verb axes.
    pub templates_per_category: usize,
    /// Lex1 training examples drawn from each chosen template.
    pub examples_per_template: usize,
    /// Explicit template choice per class; the largest templates otherwise.
    pub chosen_templates: BTreeMap<Complexity, Vec<String>>,
    pub train_range: NumberRange,
    pub test_ranges: Vec<NumberRange>,
    /// Label-balanced caps on side sizes.
    pub train_cap: Option<usize>,
    pub test_cap: Option<usize>,
}

impl Default for SuiteSpec {
    fn default() -> Self {
        Self {
            seed: 0,
            templates_per_category: 5,
            examples_per_template: 256,
            chosen_templates: BTreeMap::new(),
            train_range: NumberRange { lo: 30, hi: 49 },
            test_ranges: vec![
                NumberRange { lo: 30, hi: 49 },
                NumberRange { lo: 60, hi: 79 },
                NumberRange { lo: 200, hi: 299 },
            ],
            train_cap: None,
            test_cap: None,
        }
    }
}

/// Splits of one axis and the examples they refer to.
#[derive(Debug, Clone)]
pub struct SplitSuite {
    pub axis: Axis,
    pub phenomenon: Phenomenon,
    pub splits: Vec<DatasetSplit>,
    pub examples: Vec<NliExample>,
}

impl SplitSuite {
    pub fn pool(&self) -> Result<ExamplePool> {
        ExamplePool::new(self.examples.clone())
    }
}

struct Collector {
    examples: BTreeMap<String, NliExample>,
}

impl Collector {
    fn add(&mut self, examples: &[NliExample]) {
        for e in examples {
            self.examples.entry(e.id.to_string()).or_insert_with(|| e.clone());
        }
    }

    fn finish(self) -> Vec<NliExample> {
        let mut v: Vec<NliExample> = self.examples.into_values().collect();
        v.sort_by(|a, b| a.id.cmp(&b.id));
        v
    }
}

fn cap(examples: Vec<NliExample>, cap: Option<usize>, labels: &[Label], seed: u64) -> Result<Vec<NliExample>> {
    match cap {
        Some(k) if k < examples.len() => balanced_sample(examples, k, labels, seed),
        _ => Ok(examples),
    }
}

fn cap_tolerance(cap: Option<usize>, labels: &[Label]) -> usize {
    usize::from(cap.is_some_and(|k| k % labels.len() != 0))
}

/// Builds every split of one generalization axis.
pub fn make_generalization_suite(
    templates: &[PremiseTemplate],
    dataset: &[NliExample],
    axis: Axis,
    spec: &SuiteSpec,
    generation: &GenerationConfig,
) -> Result<SplitSuite> {
    let first = templates.first().ok_or(Error::EmptyInput("templates"))?;
    let phenomenon = first.phenomenon();
    if let Some(t) = templates.iter().find(|t| t.phenomenon() != phenomenon) {
        return Err(Error::MixedPhenomena(phenomenon, t.phenomenon()));
    }
    match axis {
        Axis::Syntax => syntax_suite(templates, dataset, phenomenon, spec),
        Axis::Lexical | Axis::Verb => lexical_suite(templates, phenomenon, axis, spec, generation),
        Axis::Range => range_suite(templates, phenomenon, spec, generation),
    }
}

const SYNTAX_TRAIN: [Complexity; 3] = Complexity::ALL;
const SYNTAX_TEST: [Complexity; 2] = [Complexity::Simple, Complexity::Complex];

fn syntax_suite(
    templates: &[PremiseTemplate],
    dataset: &[NliExample],
    phenomenon: Phenomenon,
    spec: &SuiteSpec,
) -> Result<SplitSuite> {
    if dataset.is_empty() {
        return Err(Error::EmptyInput("dataset"));
    }
    let labels = phenomenon_labels(phenomenon);
    // Each class is halved so that same-class train and test stay
    // template-disjoint; the test halves are shared by all train classes.
    let mut halves: BTreeMap<Complexity, (BTreeSet<String>, BTreeSet<String>)> = BTreeMap::new();
    for class in Complexity::ALL {
        let mut names: Vec<String> = templates
            .iter()
            .filter(|t| t.complexity() == class)
            .map(|t| t.id().to_string())
            .collect();
        names.sort();
        let order = shuffled(&names, spec.seed, &["syntax", class.as_str()]);
        let (a, b) = order.split_at(order.len().div_ceil(2));
        halves.insert(class, (a.iter().cloned().collect(), b.iter().cloned().collect()));
    }
    let side = |names: &BTreeSet<String>, class: Complexity, which: &str, limit: Option<usize>| {
        if names.is_empty() {
            return Err(Error::Split(format!(
                "syntax axis: no {class} templates for the {which} side"
            )));
        }
        let chosen: Vec<NliExample> = dataset
            .iter()
            .filter(|e| names.contains(&e.template_id))
            .cloned()
            .collect();
        let s = seed::derive(spec.seed, &["syntax", which, class.as_str()]);
        cap(balance_labels(chosen, labels, s)?, limit, labels, s)
    };

    let mut tests = BTreeMap::new();
    for class in SYNTAX_TEST {
        tests.insert(class, side(&halves[&class].1, class, "test", spec.test_cap)?);
    }
    let mut pool = Collector {
        examples: BTreeMap::new(),
    };
    let mut splits = Vec::new();
    for train_class in SYNTAX_TRAIN {
        let train = side(&halves[&train_class].0, train_class, "train", spec.train_cap)?;
        pool.add(&train);
        for test_class in SYNTAX_TEST {
            let test = &tests[&test_class];
            let mut split = DatasetSplit::new(
                format!("syntax/{}-{}", train_class, test_class),
                spec.seed,
            )
            .tag("syntax", train_class.as_str(), test_class.as_str());
            split.template_disjoint = true;
            split.balance_tolerance = cap_tolerance(spec.train_cap, labels)
                .max(cap_tolerance(spec.test_cap, labels));
            split.metadata.insert(
                "train_templates".into(),
                json!(halves[&train_class].0),
            );
            split
                .metadata
                .insert("test_templates".into(), json!(halves[&test_class].1));
            split.train = ids(&train);
            split.test = ids(test);
            splits.push(split);
        }
    }
    for test in tests.values() {
        pool.add(test);
    }
    Ok(SplitSuite {
        axis: Axis::Syntax,
        phenomenon,
        splits,
        examples: pool.finish(),
    })
}

fn choose_templates<'a>(
    templates: &'a [PremiseTemplate],
    class: Complexity,
    spec: &SuiteSpec,
) -> Result<(Vec<&'a PremiseTemplate>, &'static str)> {
    let n = spec.templates_per_category;
    if let Some(names) = spec.chosen_templates.get(&class) {
        let chosen = names
            .iter()
            .map(|name| {
                templates
                    .iter()
                    .find(|t| t.id() == name)
                    .ok_or_else(|| Error::UnknownTemplate(name.clone()))
            })
            .collect::<Result<Vec<_>>>()?;
        return Ok((chosen, "configured"));
    }
    let mut of_class: Vec<&PremiseTemplate> =
        templates.iter().filter(|t| t.complexity() == class).collect();
    if of_class.len() < n {
        return Err(Error::Split(format!(
            "{n} {class} templates requested, {} available",
            of_class.len()
        )));
    }
    of_class.sort_by(|a, b| {
        b.assignment_count()
            .cmp(&a.assignment_count())
            .then_with(|| a.id().cmp(b.id()))
    });
    of_class.truncate(n);
    Ok((of_class, "largest"))
}

fn lexical_suite(
    templates: &[PremiseTemplate],
    phenomenon: Phenomenon,
    axis: Axis,
    spec: &SuiteSpec,
    generation: &GenerationConfig,
) -> Result<SplitSuite> {
    let swap = match (axis, phenomenon) {
        (Axis::Verb, Phenomenon::NumericalReasoning) => {
            return Err(Error::WrongPhenomenon {
                template: templates[0].id().to_string(),
                expected: Phenomenon::DativeAlternation,
                found: phenomenon,
            })
        }
        (_, Phenomenon::DativeAlternation) => true,
        _ => false,
    };
    let labels = phenomenon_labels(phenomenon);
    let partition_seed = seed::derive(spec.seed, &["partition"]);
    let mut pool = Collector {
        examples: BTreeMap::new(),
    };
    let mut splits = Vec::new();
    for class in [Complexity::Simple, Complexity::Complex] {
        let (chosen, how) = choose_templates(templates, class, spec)?;
        let mut train = Vec::new();
        let mut lex2 = Vec::new();
        for t in &chosen {
            let partition = make_lexical_partition(t, partition_seed)?;
            let g1 = materialize_partition(t, &partition, LexicalGroup::Lex1, generation, &Variant::default())?;
            let s = seed::derive(spec.seed, &["lex1", t.id()]);
            train.extend(balanced_sample(g1, spec.examples_per_template, labels, s)?);
            lex2.extend(materialize_partition(
                t,
                &partition,
                LexicalGroup::Lex2,
                generation,
                &Variant::default(),
            )?);
        }
        train.sort_by(|a, b| a.id.cmp(&b.id));
        let s = seed::derive(spec.seed, &["lex2", class.as_str()]);
        let lex2 = cap(balance_labels(lex2, labels, s)?, spec.test_cap, labels, s)?;
        let swapped = if swap {
            apply_verb_swap(&lex2, templates, None)?
        } else {
            Vec::new()
        };
        pool.add(&train);
        pool.add(&lex2);
        pool.add(&swapped);

        let names: Vec<&str> = chosen.iter().map(|t| t.id()).collect();
        let train_tol = if spec.examples_per_template.is_multiple_of(labels.len()) {
            0
        } else {
            chosen.len()
        };
        let mut tests: Vec<(&str, &str, &[NliExample])> = Vec::new();
        if axis == Axis::Lexical {
            tests.push(("lex2", "same", &lex2));
        }
        if swap {
            tests.push(("lex2_swapped", "swapped", &swapped));
        }
        for (name, verb, test) in tests {
            let mut split = DatasetSplit::new(
                format!("{axis}/{class}/{name}"),
                spec.seed,
            )
            .tag("syntax", class.as_str(), class.as_str())
            .tag("lexical", "lex1", "lex2")
            .tag("verb", "same", verb);
            split.balance_tolerance = train_tol.max(cap_tolerance(spec.test_cap, labels));
            split.metadata.insert("templates".into(), json!(names));
            split.metadata.insert("template_choice".into(), json!(how));
            split.train = ids(&train);
            split.test = ids(test);
            splits.push(split);
        }
    }
    Ok(SplitSuite {
        axis,
        phenomenon,
        splits,
        examples: pool.finish(),
    })
}

fn range_suite(
    templates: &[PremiseTemplate],
    phenomenon: Phenomenon,
    spec: &SuiteSpec,
    generation: &GenerationConfig,
) -> Result<SplitSuite> {
    if phenomenon != Phenomenon::NumericalReasoning {
        return Err(Error::WrongPhenomenon {
            template: templates[0].id().to_string(),
            expected: Phenomenon::NumericalReasoning,
            found: phenomenon,
        });
    }
    if spec.test_ranges.is_empty() {
        return Err(Error::EmptyInput("test ranges"));
    }
    let labels = phenomenon_labels(phenomenon);
    let config = GenerationConfig {
        seed: seed::derive(spec.seed, &["range"]),
        ..generation.clone()
    };
    let mut train_sets = make_range_datasets(templates, &[spec.train_range], LexicalGroup::Lex1, &config)?;
    let train = train_sets.remove(&spec.train_range).unwrap_or_default();
    let s = seed::derive(spec.seed, &["range", "train"]);
    let train = cap(balance_labels(train, labels, s)?, spec.train_cap, labels, s)?;
    let tests = make_range_datasets(templates, &spec.test_ranges, LexicalGroup::Lex2, &config)?;

    let mut pool = Collector {
        examples: BTreeMap::new(),
    };
    pool.add(&train);
    let mut splits = Vec::new();
    for range in &spec.test_ranges {
        let s = seed::derive(spec.seed, &["range", "test", &range.tag()]);
        let test = cap(balance_labels(tests[range].clone(), labels, s)?, spec.test_cap, labels, s)?;
        pool.add(&test);
        let mut split = DatasetSplit::new(
            format!("range/{}/{}", spec.train_range, range),
            spec.seed,
        )
        .tag("range", &spec.train_range.tag(), &range.tag())
        .tag("lexical", "lex1", "lex2");
        split.balance_tolerance =
            cap_tolerance(spec.train_cap, labels).max(cap_tolerance(spec.test_cap, labels));
        split.train = ids(&train);
        split.test = ids(&test);
        splits.push(split);
    }
    Ok(SplitSuite {
        axis: Axis::Range,
        phenomenon,
        splits,
        examples: pool.finish(),
    })
}
