//! Premise enumeration and hypothesis generation.

mod dative;
mod enumerate;
mod numeric;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

pub use dative::{gen_dative_hypotheses, rule_segments, DativeRule};
pub use enumerate::{enumerate_assignments, enumerate_premises, enumerate_restricted, PremiseMode};
pub use numeric::{
    denote, label_numeric_pair, label_numeric_pair_with, IntRange, IntegerDomain, NumberRange,
    NumericRecipe, Quotas, Semantics,
};

use crate::error::{Error, Result};
use crate::model::{
    Assignment, Complexity, ExampleId, Label, LexicalGroup, NliExample, NumericInfo, Phenomenon,
    PremiseTemplate,
};
use crate::seed;

/// Redraws of an infeasible premise expression before giving up.
const PREMISE_ATTEMPTS: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct GenerationConfig {
    pub premises: PremiseMode,
    pub numeric: NumericRecipe,
    pub seed: u64,
}

impl Default for GenerationConfig {
    fn default() -> Self {
        Self {
            premises: PremiseMode::All,
            numeric: NumericRecipe::default(),
            seed: 0,
        }
    }
}

/// Tags stamped on regenerated copies of a premise.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Variant {
    pub id_tag: Option<String>,
    pub lexical_group: Option<LexicalGroup>,
    pub range_tag: Option<String>,
}

/// One numeric premise: the expression is drawn uniformly; if its
/// hypotheses cannot fill the quotas another expression is drawn.
pub fn gen_numeric_hypotheses(
    t: &PremiseTemplate,
    assignment: &Assignment,
    recipe: &NumericRecipe,
) -> Result<Vec<NliExample>> {
    if t.phenomenon() != Phenomenon::NumericalReasoning {
        return Err(Error::WrongPhenomenon {
            template: t.id().to_string(),
            expected: Phenomenon::NumericalReasoning,
            found: t.phenomenon(),
        });
    }
    let mut rng = seed::rng(recipe.seed);
    let mut last = None;
    for _ in 0..PREMISE_ATTEMPTS {
        let premise = recipe.sample_premise(&mut rng);
        match recipe.draw_hypotheses(premise, &mut rng) {
            Ok(hyps) => return numeric_examples(t, assignment, premise, hyps),
            Err(e @ (Error::QuotaUnsatisfiable { .. } | Error::EmptyDenotation(_))) => {
                last = Some(e)
            }
            Err(e) => return Err(e),
        }
    }
    Err(last.expect("at least one attempt"))
}

/// Hypotheses for a fixed premise expression.
pub fn gen_numeric_hypotheses_for(
    t: &PremiseTemplate,
    assignment: &Assignment,
    premise: crate::model::NumericExpression,
    recipe: &NumericRecipe,
) -> Result<Vec<NliExample>> {
    let hyps = recipe.draw_hypotheses(premise, &mut seed::rng(recipe.seed))?;
    numeric_examples(t, assignment, premise, hyps)
}

fn numeric_examples(
    t: &PremiseTemplate,
    assignment: &Assignment,
    premise: crate::model::NumericExpression,
    hyps: Vec<(crate::model::NumericExpression, Label)>,
) -> Result<Vec<NliExample>> {
    let premise_text = t.render_assignment(assignment, Some(premise))?;
    hyps.into_iter()
        .enumerate()
        .map(|(k, (h, label))| {
            Ok(NliExample {
                id: ExampleId::new(t.id(), assignment.clone(), &format!("h{k:02}")),
                premise: premise_text.clone(),
                hypothesis: t.render_assignment(assignment, Some(h))?,
                label,
                template_id: t.id().to_string(),
                rule_id: format!("numeric.{}", h.rel.as_str()),
                complexity: t.complexity(),
                lexical_group: None,
                range_tag: None,
                numeric_info: Some(NumericInfo {
                    premise,
                    hypothesis: h,
                }),
            })
        })
        .collect()
}

/// All hypotheses for the given assignments of one template.
pub fn generate_for_assignments(
    t: &PremiseTemplate,
    assignments: &[Assignment],
    config: &GenerationConfig,
    variant: &Variant,
) -> Result<Vec<NliExample>> {
    let mut out = Vec::new();
    for a in assignments {
        let mut batch = match t.phenomenon() {
            Phenomenon::DativeAlternation => gen_dative_hypotheses(t, a)?,
            Phenomenon::NumericalReasoning => {
                let tag = variant.id_tag.as_deref().unwrap_or("");
                let recipe = NumericRecipe {
                    seed: seed::derive(config.seed, &[t.id(), &a.to_string(), tag]),
                    ..config.numeric.clone()
                };
                gen_numeric_hypotheses(t, a, &recipe)?
            }
        };
        for ex in &mut batch {
            if let Some(tag) = &variant.id_tag {
                ex.id = ex.id.clone().with_variant(tag);
            }
            ex.lexical_group = variant.lexical_group;
            ex.range_tag.clone_from(&variant.range_tag);
        }
        out.append(&mut batch);
    }
    Ok(out)
}

/// Every example of one template under the configured premise mode.
pub fn generate_template(t: &PremiseTemplate, config: &GenerationConfig) -> Result<Vec<NliExample>> {
    t.ensure_valid()?;
    let mode = match config.premises {
        PremiseMode::Sample { count, seed } => PremiseMode::Sample {
            count,
            seed: seed::derive(seed, &[t.id()]),
        },
        PremiseMode::All => PremiseMode::All,
    };
    let assignments = enumerate_assignments(t, mode)?;
    generate_for_assignments(t, &assignments, config, &Variant::default())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub total_templates: usize,
    pub total_examples: usize,
    pub templates: BTreeMap<Complexity, usize>,
    pub examples: BTreeMap<Complexity, usize>,
    pub labels: BTreeMap<Label, usize>,
    pub by_complexity: BTreeMap<Complexity, BTreeMap<Label, usize>>,
    /// Examples whose (premise, hypothesis) text repeats an earlier one.
    pub duplicate_pairs: usize,
}

pub fn dataset_stats(templates: &[PremiseTemplate], examples: &[NliExample]) -> DatasetStats {
    let zero_labels = || Label::ALL.iter().map(|&l| (l, 0)).collect::<BTreeMap<_, _>>();
    let mut stats = DatasetStats {
        total_templates: templates.len(),
        total_examples: examples.len(),
        templates: Complexity::ALL.iter().map(|&c| (c, 0)).collect(),
        examples: Complexity::ALL.iter().map(|&c| (c, 0)).collect(),
        labels: zero_labels(),
        by_complexity: Complexity::ALL.iter().map(|&c| (c, zero_labels())).collect(),
        duplicate_pairs: 0,
    };
    for t in templates {
        *stats.templates.entry(t.complexity()).or_default() += 1;
    }
    let mut seen: HashMap<(&str, &str), ()> = HashMap::with_capacity(examples.len());
    for ex in examples {
        *stats.examples.entry(ex.complexity).or_default() += 1;
        *stats.labels.entry(ex.label).or_default() += 1;
        *stats
            .by_complexity
            .entry(ex.complexity)
            .or_default()
            .entry(ex.label)
            .or_default() += 1;
        if seen.insert((&ex.premise, &ex.hypothesis), ()).is_some() {
            stats.duplicate_pairs += 1;
        }
    }
    stats
}

#[derive(Debug, Clone)]
pub struct GeneratedDataset {
    pub phenomenon: Phenomenon,
    pub examples: Vec<NliExample>,
    pub stats: DatasetStats,
}

/// Generates every template of one phenomenon; examples are sorted by id.
pub fn generate_dataset(templates: &[PremiseTemplate], config: &GenerationConfig) -> Result<GeneratedDataset> {
    let first = templates.first().ok_or(Error::EmptyInput("templates"))?;
    let phenomenon = first.phenomenon();
    if let Some(other) = templates.iter().find(|t| t.phenomenon() != phenomenon) {
        return Err(Error::MixedPhenomena(phenomenon, other.phenomenon()));
    }
    if phenomenon == Phenomenon::NumericalReasoning {
        config.numeric.validate()?;
    }
    let mut examples = Vec::new();
    for t in templates {
        examples.extend(generate_template(t, config)?);
    }
    examples.sort_by(|a, b| a.id.cmp(&b.id));
    let stats = dataset_stats(templates, &examples);
    Ok(GeneratedDataset {
        phenomenon,
        examples,
        stats,
    })
}
