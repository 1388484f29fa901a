//! Domain types: phenomena, labels, numeric expressions, premise templates
//! and generated examples.

mod dsl;
mod example;
mod template;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

pub use dsl::{parse_template, serialize_template};
pub use example::{Assignment, ExampleId, NliExample, NumericInfo};
pub use template::{
    validate_instantiation, ArgumentSlot, Instantiation, PhenomenonAnchor, PremiseTemplate, Role,
    Segment, TemplateDraft, Violation, MIN_SLOTS,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Phenomenon {
    DativeAlternation,
    NumericalReasoning,
}

impl Phenomenon {
    pub fn short_name(self) -> &'static str {
        match self {
            Phenomenon::DativeAlternation => "datives",
            Phenomenon::NumericalReasoning => "numbers",
        }
    }
}

impl FromStr for Phenomenon {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().as_str() {
            "datives" | "dative" | "dative_alternation" => Ok(Phenomenon::DativeAlternation),
            "numbers" | "numeric" | "numerical_reasoning" => Ok(Phenomenon::NumericalReasoning),
            other => Err(format!("unknown phenomenon `{other}`")),
        }
    }
}

impl fmt::Display for Phenomenon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.short_name())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Label {
    Entailment,
    Neutral,
    Contradiction,
}

impl Label {
    pub const ALL: [Label; 3] = [Label::Entailment, Label::Neutral, Label::Contradiction];

    pub fn as_str(self) -> &'static str {
        match self {
            Label::Entailment => "entailment",
            Label::Neutral => "neutral",
            Label::Contradiction => "contradiction",
        }
    }
}

impl FromStr for Label {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "entailment" => Ok(Label::Entailment),
            "neutral" => Ok(Label::Neutral),
            "contradiction" => Ok(Label::Contradiction),
            other => Err(format!("unknown label `{other}`")),
        }
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Complexity {
    Simple,
    Medium,
    Complex,
}

impl Complexity {
    pub const ALL: [Complexity; 3] = [Complexity::Simple, Complexity::Medium, Complexity::Complex];

    pub fn as_str(self) -> &'static str {
        match self {
            Complexity::Simple => "simple",
            Complexity::Medium => "medium",
            Complexity::Complex => "complex",
        }
    }
}

impl FromStr for Complexity {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "simple" | "s" => Ok(Complexity::Simple),
            "medium" | "m" => Ok(Complexity::Medium),
            "complex" | "c" => Ok(Complexity::Complex),
            other => Err(format!("unknown complexity `{other}`")),
        }
    }
}

impl fmt::Display for Complexity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum LexicalGroup {
    Lex1,
    Lex2,
    Lex2VerbSwapped,
}

impl LexicalGroup {
    pub fn as_str(self) -> &'static str {
        match self {
            LexicalGroup::Lex1 => "lex1",
            LexicalGroup::Lex2 => "lex2",
            LexicalGroup::Lex2VerbSwapped => "lex2_verb_swapped",
        }
    }
}

/// Relational phrase preceding a number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Rel {
    MoreThan,
    LessThan,
    Exact,
}

impl Rel {
    pub const ALL: [Rel; 3] = [Rel::MoreThan, Rel::LessThan, Rel::Exact];

    /// Surface phrase; empty for an exact number.
    pub fn phrase(self) -> &'static str {
        match self {
            Rel::MoreThan => "more than",
            Rel::LessThan => "less than",
            Rel::Exact => "",
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Rel::MoreThan => "more_than",
            Rel::LessThan => "less_than",
            Rel::Exact => "exact",
        }
    }
}

impl FromStr for Rel {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.trim().to_ascii_lowercase().replace(' ', "_").as_str() {
            "more_than" | "more" | "gt" => Ok(Rel::MoreThan),
            "less_than" | "less" | "lt" => Ok(Rel::LessThan),
            "exact" | "eq" | "none" => Ok(Rel::Exact),
            other => Err(format!("unknown relation `{other}`")),
        }
    }
}

/// A relational phrase over a unitless integer count.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NumericExpression {
    pub rel: Rel,
    pub value: u64,
}

impl NumericExpression {
    pub const fn new(rel: Rel, value: u64) -> Self {
        Self { rel, value }
    }

    pub const fn more_than(value: u64) -> Self {
        Self::new(Rel::MoreThan, value)
    }

    pub const fn less_than(value: u64) -> Self {
        Self::new(Rel::LessThan, value)
    }

    pub const fn exact(value: u64) -> Self {
        Self::new(Rel::Exact, value)
    }
}

impl fmt::Display for NumericExpression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.rel {
            Rel::Exact => write!(f, "{}", self.value),
            rel => write!(f, "{} {}", rel.phrase(), self.value),
        }
    }
}

/// Syntactic complexity class from source length and anchor depth.
///
/// Simple needs fewer than 16 words and depth below 4; complex needs more
/// than 25 words and depth above 6; everything else is medium.
pub fn classify_complexity(word_count: usize, parse_depth: u32) -> Complexity {
    if word_count < 16 && parse_depth < 4 {
        Complexity::Simple
    } else if word_count > 25 && parse_depth > 6 {
        Complexity::Complex
    } else {
        Complexity::Medium
    }
}
