//! Set semantics of relational numeric expressions and the labeling rule
//! derived from it: entailment is containment of denotations, contradiction
//! is disjointness, anything else is neutral.

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::Rng as _;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Label, NumericExpression, Rel};
use crate::seed::Rng;

/// Universe over which expressions denote.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegerDomain {
    pub min: u64,
    pub max: u64,
}

impl Default for IntegerDomain {
    fn default() -> Self {
        Self {
            min: 1,
            max: 1_000_000,
        }
    }
}

impl IntegerDomain {
    pub fn new(min: u64, max: u64) -> Result<Self> {
        if max <= min {
            return Err(Error::InvalidConfig(format!(
                "integer domain [{min}, {max}] needs max > min"
            )));
        }
        Ok(Self { min, max })
    }
}

/// Inclusive, non-empty integer interval.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IntRange {
    pub lo: u64,
    pub hi: u64,
}

impl IntRange {
    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn is_subset_of(&self, other: &IntRange) -> bool {
        other.lo <= self.lo && self.hi <= other.hi
    }

    pub fn is_disjoint(&self, other: &IntRange) -> bool {
        self.hi < other.lo || other.hi < self.lo
    }
}

/// Whether numbers range over integers or over the reals of the domain.
/// Under dense semantics "more than 4" and "less than 5" overlap.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Semantics {
    #[default]
    Discrete,
    Dense,
}

/// Integer denotation of `expr`, clipped to the domain.
pub fn denote(expr: NumericExpression, domain: IntegerDomain) -> Result<IntRange> {
    let n = expr.value;
    let (lo, hi) = match expr.rel {
        Rel::MoreThan => (n.saturating_add(1).max(domain.min), domain.max),
        Rel::LessThan => match n.checked_sub(1) {
            Some(top) => (domain.min, top.min(domain.max)),
            None => return Err(Error::EmptyDenotation(expr)),
        },
        Rel::Exact => (n, n),
    };
    if lo > hi || lo < domain.min || hi > domain.max {
        return Err(Error::EmptyDenotation(expr));
    }
    Ok(IntRange { lo, hi })
}

/// Label under integer semantics.
pub fn label_numeric_pair(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    domain: IntegerDomain,
) -> Result<Label> {
    let p = denote(premise, domain)?;
    let h = denote(hypothesis, domain)?;
    Ok(if p.is_subset_of(&h) {
        Label::Entailment
    } else if p.is_disjoint(&h) {
        Label::Contradiction
    } else {
        Label::Neutral
    })
}

pub fn label_numeric_pair_with(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    domain: IntegerDomain,
    semantics: Semantics,
) -> Result<Label> {
    match semantics {
        Semantics::Discrete => label_numeric_pair(premise, hypothesis, domain),
        Semantics::Dense => dense::label(premise, hypothesis, domain),
    }
}

mod dense {
    use super::*;

    #[derive(Clone, Copy)]
    struct Bound {
        value: u64,
        closed: bool,
    }

    #[derive(Clone, Copy)]
    struct Interval {
        lo: Bound,
        hi: Bound,
    }

    fn denote(expr: NumericExpression, domain: IntegerDomain) -> Result<Interval> {
        let open = |value| Bound {
            value,
            closed: false,
        };
        let closed = |value| Bound {
            value,
            closed: true,
        };
        let n = expr.value;
        let iv = match expr.rel {
            Rel::MoreThan if n < domain.min => Interval {
                lo: closed(domain.min),
                hi: closed(domain.max),
            },
            Rel::MoreThan => Interval {
                lo: open(n),
                hi: closed(domain.max),
            },
            Rel::LessThan if n > domain.max => Interval {
                lo: closed(domain.min),
                hi: closed(domain.max),
            },
            Rel::LessThan => Interval {
                lo: closed(domain.min),
                hi: open(n),
            },
            Rel::Exact => Interval {
                lo: closed(n),
                hi: closed(n),
            },
        };
        let empty = iv.lo.value > iv.hi.value
            || (iv.lo.value == iv.hi.value && !(iv.lo.closed && iv.hi.closed))
            || iv.lo.value < domain.min
            || iv.hi.value > domain.max;
        if empty {
            return Err(Error::EmptyDenotation(expr));
        }
        Ok(iv)
    }

    fn subset(a: Interval, b: Interval) -> bool {
        let lower = a.lo.value > b.lo.value
            || (a.lo.value == b.lo.value && (b.lo.closed || !a.lo.closed));
        let upper = a.hi.value < b.hi.value
            || (a.hi.value == b.hi.value && (b.hi.closed || !a.hi.closed));
        lower && upper
    }

    fn ends_before(a: Interval, b: Interval) -> bool {
        a.hi.value < b.lo.value || (a.hi.value == b.lo.value && !(a.hi.closed && b.lo.closed))
    }

    pub(super) fn label(
        premise: NumericExpression,
        hypothesis: NumericExpression,
        domain: IntegerDomain,
    ) -> Result<Label> {
        let p = denote(premise, domain)?;
        let h = denote(hypothesis, domain)?;
        Ok(if subset(p, h) {
            Label::Entailment
        } else if ends_before(p, h) || ends_before(h, p) {
            Label::Contradiction
        } else {
            Label::Neutral
        })
    }
}

/// Inclusive range numbers are sampled from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct NumberRange {
    pub lo: u64,
    pub hi: u64,
}

impl NumberRange {
    pub fn new(lo: u64, hi: u64) -> Result<Self> {
        if hi < lo {
            return Err(Error::InvalidConfig(format!("empty number range [{lo}, {hi}]")));
        }
        Ok(Self { lo, hi })
    }

    pub fn width(&self) -> u64 {
        self.hi - self.lo + 1
    }

    pub fn contains(&self, x: u64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn tag(&self) -> String {
        self.to_string()
    }
}

impl fmt::Display for NumberRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}-{}", self.lo, self.hi)
    }
}

impl FromStr for NumberRange {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidConfig(format!("range `{s}` is not `lo-hi`"));
        let (lo, hi) = s.split_once('-').ok_or_else(bad)?;
        NumberRange::new(
            lo.trim().parse().map_err(|_| bad())?,
            hi.trim().parse().map_err(|_| bad())?,
        )
    }
}

impl Serialize for NumberRange {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        [self.lo, self.hi].serialize(s)
    }
}

impl<'de> Deserialize<'de> for NumberRange {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let [lo, hi] = <[u64; 2]>::deserialize(d)?;
        NumberRange::new(lo, hi).map_err(serde::de::Error::custom)
    }
}

/// Number of hypotheses wanted per label for each premise.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Quotas(pub BTreeMap<Label, usize>);

impl Default for Quotas {
    fn default() -> Self {
        Self(BTreeMap::from([
            (Label::Entailment, 4),
            (Label::Neutral, 6),
            (Label::Contradiction, 12),
        ]))
    }
}

impl Quotas {
    pub fn get(&self, label: Label) -> usize {
        self.0.get(&label).copied().unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.0.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct NumericRecipe {
    /// Range premise and hypothesis numbers are drawn from.
    pub range: NumberRange,
    pub quotas: Quotas,
    pub hypothesis_rels: Vec<Rel>,
    pub premise_rels: Vec<Rel>,
    pub universe: IntegerDomain,
    pub semantics: Semantics,
    pub seed: u64,
}

impl Default for NumericRecipe {
    fn default() -> Self {
        Self {
            range: NumberRange { lo: 2, hi: 999 },
            quotas: Quotas::default(),
            hypothesis_rels: Rel::ALL.to_vec(),
            premise_rels: vec![Rel::MoreThan, Rel::LessThan],
            universe: IntegerDomain::default(),
            semantics: Semantics::Discrete,
            seed: 0,
        }
    }
}

impl NumericRecipe {
    pub fn with_range(&self, range: NumberRange) -> Self {
        Self {
            range,
            ..self.clone()
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidConfig(m));
        if self.range.lo < 1 {
            return bad("number range must start at 1 or above".into());
        }
        if self.range.lo < self.universe.min || self.range.hi > self.universe.max {
            return bad(format!(
                "range {} lies outside the domain [{}, {}]",
                self.range, self.universe.min, self.universe.max
            ));
        }
        if self.universe.max <= self.universe.min {
            return bad("domain needs max > min".into());
        }
        if self.hypothesis_rels.is_empty() || self.premise_rels.is_empty() {
            return bad("relation sets must be non-empty".into());
        }
        if self.premise_rels.contains(&Rel::Exact) && self.quotas.get(Label::Neutral) > 0 {
            return bad("exact premises cannot yield neutral hypotheses; drop `exact` from premise_rels or set the neutral quota to 0".into());
        }
        Ok(())
    }

    pub(crate) fn label(&self, p: NumericExpression, h: NumericExpression) -> Result<Label> {
        label_numeric_pair_with(p, h, self.universe, self.semantics)
    }

    /// Uniform draw of a premise expression from the premise relations and range.
    pub(crate) fn sample_premise(&self, rng: &mut Rng) -> NumericExpression {
        let rel = self.premise_rels[rng.gen_range(0..self.premise_rels.len())];
        NumericExpression::new(rel, rng.gen_range(self.range.lo..=self.range.hi))
    }

    /// Draws hypothesis expressions without replacement from
    /// `hypothesis_rels x range` until every quota is filled. The premise
    /// expression itself is never drawn.
    pub(crate) fn draw_hypotheses(
        &self,
        premise: NumericExpression,
        rng: &mut Rng,
    ) -> Result<Vec<(NumericExpression, Label)>> {
        denote(premise, self.universe)?;
        let width = self.range.width();
        let pool = width * self.hypothesis_rels.len() as u64;
        let mut remaining: BTreeMap<Label, usize> =
            Label::ALL.iter().map(|&l| (l, self.quotas.get(l))).collect();
        let mut left: usize = remaining.values().sum();
        let mut out = Vec::with_capacity(left);
        // Sparse Fisher-Yates over the implicit pool.
        let mut swapped: HashMap<u64, u64> = HashMap::new();
        let mut i = 0u64;
        while left > 0 && i < pool {
            let j = rng.gen_range(i..pool);
            let at_j = swapped.get(&j).copied().unwrap_or(j);
            let at_i = swapped.get(&i).copied().unwrap_or(i);
            swapped.insert(j, at_i);
            i += 1;

            let rel = self.hypothesis_rels[(at_j / width) as usize];
            let hyp = NumericExpression::new(rel, self.range.lo + at_j % width);
            if hyp == premise {
                continue;
            }
            let label = self.label(premise, hyp)?;
            let slot = remaining.get_mut(&label).expect("all labels present");
            if *slot > 0 {
                *slot -= 1;
                left -= 1;
                out.push((hyp, label));
            }
        }
        if let Some((&label, &missing)) = remaining.iter().find(|(_, &m)| m > 0) {
            let needed = self.quotas.get(label);
            return Err(Error::QuotaUnsatisfiable {
                label,
                needed,
                found: needed - missing,
            });
        }
        Ok(out)
    }
}
