use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::template::valid_id;
use super::{Complexity, Label, LexicalGroup, NumericExpression};
use crate::error::Error;

/// Candidate index per slot, in the template's slot order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Assignment(Vec<usize>);

impl Assignment {
    pub fn new(indices: Vec<usize>) -> Self {
        Self(indices)
    }

    /// Every slot takes its original span.
    pub fn original(slots: usize) -> Self {
        Self(vec![0; slots])
    }

    pub fn indices(&self) -> &[usize] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Display for Assignment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(ToString::to_string).collect();
        f.write_str(&parts.join("-"))
    }
}

impl FromStr for Assignment {
    type Err = std::num::ParseIntError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.split('-')
            .map(str::parse)
            .collect::<Result<Vec<_>, _>>()
            .map(Assignment)
    }
}

/// Provenance-bearing example id: `[variant/]template:assignment:hypothesis`.
///
/// The variant distinguishes regenerated copies of the same assignment, e.g.
/// a number range or a verb swap.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct ExampleId {
    pub variant: Option<String>,
    pub template_id: String,
    pub assignment: Assignment,
    pub hypothesis: String,
}

impl ExampleId {
    pub fn new(template_id: &str, assignment: Assignment, hypothesis: &str) -> Self {
        Self {
            variant: None,
            template_id: template_id.to_string(),
            assignment,
            hypothesis: hypothesis.to_string(),
        }
    }

    /// Prepends a variant tag; nested variants are joined with `+`.
    pub fn with_variant(mut self, variant: &str) -> Self {
        self.variant = Some(match self.variant.take() {
            Some(prev) => format!("{prev}+{variant}"),
            None => variant.to_string(),
        });
        self
    }
}

impl fmt::Display for ExampleId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(v) = &self.variant {
            write!(f, "{v}/")?;
        }
        write!(f, "{}:{}:{}", self.template_id, self.assignment, self.hypothesis)
    }
}

impl FromStr for ExampleId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || Error::InvalidExampleId(s.to_string());
        let (variant, rest) = match s.rsplit_once('/') {
            Some((v, rest)) if !v.is_empty() && !v.contains(':') => (Some(v.to_string()), rest),
            Some(_) => return Err(bad()),
            None => (None, s),
        };
        let mut parts = rest.split(':');
        let (Some(template), Some(assignment), Some(hypothesis), None) =
            (parts.next(), parts.next(), parts.next(), parts.next())
        else {
            return Err(bad());
        };
        if !valid_id(template) || hypothesis.is_empty() {
            return Err(bad());
        }
        Ok(ExampleId {
            variant,
            template_id: template.to_string(),
            assignment: assignment.parse().map_err(|_| bad())?,
            hypothesis: hypothesis.to_string(),
        })
    }
}

impl Serialize for ExampleId {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for ExampleId {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct NumericInfo {
    pub premise: NumericExpression,
    pub hypothesis: NumericExpression,
}

/// A labeled premise/hypothesis pair. Field order is the JSONL order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NliExample {
    pub id: ExampleId,
    pub premise: String,
    pub hypothesis: String,
    pub label: Label,
    pub template_id: String,
    pub rule_id: String,
    pub complexity: Complexity,
    pub lexical_group: Option<LexicalGroup>,
    pub range_tag: Option<String>,
    pub numeric_info: Option<NumericInfo>,
}

impl NliExample {
    pub fn assignment(&self) -> &Assignment {
        &self.id.assignment
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn example_id_round_trips() {
        let id = ExampleId::new("lend-01", Assignment::new(vec![0, 3, 2, 1]), "e1");
        assert_eq!(id.to_string(), "lend-01:0-3-2-1:e1");
        assert_eq!(id.to_string().parse::<ExampleId>().unwrap(), id);
        let ranged = id.clone().with_variant("30-49").with_variant("swap");
        assert_eq!(ranged.to_string(), "30-49+swap/lend-01:0-3-2-1:e1");
        assert_eq!(ranged.to_string().parse::<ExampleId>().unwrap(), ranged);
    }

    #[test]
    fn example_id_rejects_garbage() {
        for bad in ["", "a:b", "lend:0-x:e1", "/lend:0:e1", "a b:0:e1", "t:0:h:extra"] {
            assert!(bad.parse::<ExampleId>().is_err(), "{bad}");
        }
    }

    #[test]
    fn jsonl_field_order_is_fixed() {
        let ex = NliExample {
            id: ExampleId::new("t", Assignment::new(vec![0]), "e1"),
            premise: "p".into(),
            hypothesis: "h".into(),
            label: Label::Entailment,
            template_id: "t".into(),
            rule_id: "r".into(),
            complexity: Complexity::Simple,
            lexical_group: None,
            range_tag: None,
            numeric_info: None,
        };
        let json = serde_json::to_string(&ex).unwrap();
        assert_eq!(
            json,
            r#"{"id":"t:0:e1","premise":"p","hypothesis":"h","label":"entailment","template_id":"t","rule_id":"r","complexity":"simple","lexical_group":null,"range_tag":null,"numeric_info":null}"#
        );
        let back: NliExample = serde_json::from_str(&json).unwrap();
        assert_eq!(back, ex);
    }
}
