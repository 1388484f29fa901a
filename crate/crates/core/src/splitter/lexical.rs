use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::generator::{
    enumerate_restricted, generate_for_assignments, gen_dative_hypotheses, GenerationConfig,
    NumberRange, PremiseMode, Variant,
};
use crate::model::{LexicalGroup, NliExample, Phenomenon, PremiseTemplate};
use crate::seed;

use super::shuffled;

/// Per-slot split of a template's candidates into two disjoint groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct LexicalPartition {
    pub template_id: String,
    pub group1: Vec<Vec<usize>>,
    pub group2: Vec<Vec<usize>>,
}

impl LexicalPartition {
    pub fn group(&self, g: LexicalGroup) -> &[Vec<usize>] {
        match g {
            LexicalGroup::Lex1 => &self.group1,
            LexicalGroup::Lex2 | LexicalGroup::Lex2VerbSwapped => &self.group2,
        }
    }
}

/// Shuffles each slot's candidates and halves them; with an odd count
/// group 1 gets the extra candidate.
pub fn make_lexical_partition(t: &PremiseTemplate, seed: u64) -> Result<LexicalPartition> {
    let mut group1 = Vec::new();
    let mut group2 = Vec::new();
    for slot in t.slots() {
        let n = slot.candidates.len();
        if n < 2 {
            return Err(Error::TooFewCandidates {
                template: t.id().to_string(),
                slot: slot.slot_id.clone(),
                found: n,
            });
        }
        let order: Vec<usize> = (0..n).collect();
        let order = shuffled(&order, seed, &["lexical", t.id(), &slot.slot_id]);
        let (a, b) = order.split_at(n.div_ceil(2));
        let (mut a, mut b) = (a.to_vec(), b.to_vec());
        a.sort_unstable();
        b.sort_unstable();
        group1.push(a);
        group2.push(b);
    }
    Ok(LexicalPartition {
        template_id: t.id().to_string(),
        group1,
        group2,
    })
}

/// Examples of one lexical group, every premise of the group's assignment
/// space included.
pub fn materialize_partition(
    t: &PremiseTemplate,
    partition: &LexicalPartition,
    group: LexicalGroup,
    config: &GenerationConfig,
    variant: &Variant,
) -> Result<Vec<NliExample>> {
    if partition.template_id != t.id() {
        return Err(Error::UnknownTemplate(partition.template_id.clone()));
    }
    let assignments = enumerate_restricted(partition.group(group), PremiseMode::All)?;
    let variant = Variant {
        lexical_group: Some(group),
        ..variant.clone()
    };
    generate_for_assignments(t, &assignments, config, &variant)
}

/// Regenerates dative examples with each template's alternate verb. Labels
/// and assignments are kept; ids gain a `swap` variant.
pub fn apply_verb_swap(
    examples: &[NliExample],
    templates: &[PremiseTemplate],
    verbs: Option<&BTreeMap<String, String>>,
) -> Result<Vec<NliExample>> {
    let by_id: BTreeMap<&str, &PremiseTemplate> = templates.iter().map(|t| (t.id(), t)).collect();
    let mut swapped: BTreeMap<&str, PremiseTemplate> = BTreeMap::new();
    let mut out = Vec::with_capacity(examples.len());
    for ex in examples {
        let tid = ex.template_id.as_str();
        if !swapped.contains_key(tid) {
            let t = by_id
                .get(tid)
                .ok_or_else(|| Error::UnknownTemplate(tid.to_string()))?;
            if t.phenomenon() != Phenomenon::DativeAlternation {
                return Err(Error::WrongPhenomenon {
                    template: tid.to_string(),
                    expected: Phenomenon::DativeAlternation,
                    found: t.phenomenon(),
                });
            }
            let verb = verbs
                .and_then(|m| m.get(tid).map(String::as_str))
                .or_else(|| t.alternate_verb())
                .ok_or_else(|| Error::MissingAlternateVerb(tid.to_string()))?;
            swapped.insert(tid, t.with_verb(verb)?);
        }
        let t = &swapped[tid];
        let regenerated = gen_dative_hypotheses(t, ex.assignment())?;
        let twin = regenerated
            .into_iter()
            .find(|e| e.id.hypothesis == ex.id.hypothesis)
            .ok_or_else(|| Error::InvalidExampleId(ex.id.to_string()))?;
        let mut id = ex.id.clone().with_variant("swap");
        id.hypothesis.clone_from(&twin.id.hypothesis);
        out.push(NliExample {
            id,
            premise: twin.premise,
            hypothesis: twin.hypothesis,
            lexical_group: Some(LexicalGroup::Lex2VerbSwapped),
            ..ex.clone()
        });
    }
    Ok(out)
}

/// One dataset per range, numbers drawn only from that range. Each template
/// keeps the same lexical partition across ranges and only `group` is used.
pub fn make_range_datasets(
    templates: &[PremiseTemplate],
    ranges: &[NumberRange],
    group: LexicalGroup,
    config: &GenerationConfig,
) -> Result<BTreeMap<NumberRange, Vec<NliExample>>> {
    if templates.is_empty() {
        return Err(Error::EmptyInput("templates"));
    }
    if let Some(t) = templates
        .iter()
        .find(|t| t.phenomenon() != Phenomenon::NumericalReasoning)
    {
        return Err(Error::WrongPhenomenon {
            template: t.id().to_string(),
            expected: Phenomenon::NumericalReasoning,
            found: t.phenomenon(),
        });
    }
    let partitions = templates
        .iter()
        .map(|t| make_lexical_partition(t, seed::derive(config.seed, &["partition"])))
        .collect::<Result<Vec<_>>>()?;
    let mut out = BTreeMap::new();
    for &range in ranges {
        let ranged = GenerationConfig {
            numeric: config.numeric.with_range(range),
            ..config.clone()
        };
        ranged.numeric.validate()?;
        let variant = Variant {
            id_tag: Some(range.tag()),
            lexical_group: None,
            range_tag: Some(range.tag()),
        };
        let mut examples = Vec::new();
        for (t, p) in templates.iter().zip(&partitions) {
            examples.extend(materialize_partition(t, p, group, &ranged, &variant)?);
        }
        out.insert(range, examples);
    }
    Ok(out)
}
