use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};

use super::{classify_complexity, Assignment, Complexity, NumericExpression, Phenomenon};
use crate::error::{Error, Result};
use crate::text::{join_pieces, word_count};

/// Minimum number of argument slots in a premise template.
pub const MIN_SLOTS: usize = 4;

/// One piece of a template body.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Segment {
    Literal(String),
    Slot(String),
    /// Relational phrase placeholder of a numeric template.
    Rel,
    /// Number placeholder of a numeric template.
    Num,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Role {
    Generic,
    /// First object after the dative verb.
    DativeRecipient,
    /// Second object after the dative verb.
    DativeTheme,
}

impl Role {
    pub(crate) fn from_dsl(s: &str) -> Option<Role> {
        match s {
            "generic" => Some(Role::Generic),
            "recipient" => Some(Role::DativeRecipient),
            "theme" => Some(Role::DativeTheme),
            _ => None,
        }
    }

    pub(crate) fn as_dsl(self) -> &'static str {
        match self {
            Role::Generic => "generic",
            Role::DativeRecipient => "recipient",
            Role::DativeTheme => "theme",
        }
    }
}

/// A replacement string for one slot. The original span is kept as the
/// first candidate and flagged.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Instantiation {
    pub text: String,
    pub original: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArgumentSlot {
    pub slot_id: String,
    pub original_span: String,
    pub role: Role,
    pub candidates: Vec<Instantiation>,
}

impl ArgumentSlot {
    /// Builds a slot whose candidate list is the original span followed by
    /// the collected instantiations.
    pub fn new<I, S>(slot_id: &str, original_span: &str, role: Role, collected: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut candidates = vec![Instantiation {
            text: original_span.to_string(),
            original: true,
        }];
        candidates.extend(collected.into_iter().map(|text| Instantiation {
            text: text.into(),
            original: false,
        }));
        Self {
            slot_id: slot_id.to_string(),
            original_span: original_span.to_string(),
            role,
            candidates,
        }
    }

    pub fn candidate(&self, index: usize) -> Option<&str> {
        self.candidates.get(index).map(|c| c.text.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum PhenomenonAnchor {
    Dative {
        /// Surface form of the verb as it appears in the template body.
        verb: String,
        lemma: String,
        /// Surface form of a replacement verb for verb-swap splits.
        alternate: Option<String>,
        /// Preposition introducing the recipient in the alternate construction.
        preposition: String,
    },
    Numeric {
        /// Relational expression of the extracted sentence.
        original: NumericExpression,
    },
}

/// A reported problem with a template or an instantiation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Violation {
    pub template_id: String,
    pub slot_id: Option<String>,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.slot_id {
            Some(slot) => write!(f, "{}/{}: {}", self.template_id, slot, self.message),
            None => write!(f, "{}: {}", self.template_id, self.message),
        }
    }
}

/// Checks a candidate against the length rule: at most one word longer or
/// shorter than the slot's original span, and free of slot markers.
pub fn validate_instantiation(slot: &ArgumentSlot, candidate: &str) -> Result<(), Violation> {
    let violation = |message: String| Violation {
        template_id: String::new(),
        slot_id: Some(slot.slot_id.clone()),
        message,
    };
    let candidate = candidate.trim();
    if candidate.is_empty() {
        return Err(violation("empty instantiation".into()));
    }
    if candidate.contains(['{', '}']) {
        return Err(violation(format!("`{candidate}` contains a slot marker")));
    }
    let original = word_count(&slot.original_span);
    let found = word_count(candidate);
    if found.abs_diff(original) > 1 {
        return Err(violation(format!(
            "`{candidate}` has {found} words, original span has {original}"
        )));
    }
    Ok(())
}

/// Unvalidated template parts. `build` checks the structural invariants.
#[derive(Debug, Clone)]
pub struct TemplateDraft {
    pub id: String,
    pub phenomenon: Phenomenon,
    pub segments: Vec<Segment>,
    pub slots: Vec<ArgumentSlot>,
    pub anchor: PhenomenonAnchor,
    pub source_sentence: String,
    pub parse_depth: u32,
}

/// A premise skeleton with typed argument slots. Immutable once built.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseTemplate {
    id: String,
    phenomenon: Phenomenon,
    segments: Vec<Segment>,
    slots: Vec<ArgumentSlot>,
    anchor: PhenomenonAnchor,
    source_sentence: String,
    word_count: usize,
    parse_depth: u32,
    complexity: Complexity,
}

pub(crate) fn valid_id(id: &str) -> bool {
    !id.is_empty()
        && id
            .chars()
            .all(|c| c.is_ascii_alphanumeric() || matches!(c, '_' | '-' | '.'))
}

pub(crate) fn valid_slot_id(id: &str) -> bool {
    !id.is_empty()
        && id != "REL"
        && id != "NUM"
        && id.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

fn literal_has_token(literal: &str, token: &str) -> bool {
    literal.split_whitespace().any(|w| w == token)
}

impl TemplateDraft {
    pub fn build(self) -> Result<PremiseTemplate> {
        let invalid = |reason: String| Error::InvalidTemplate {
            id: self.id.clone(),
            reason,
        };
        if !valid_id(&self.id) {
            return Err(invalid("id must be non-empty [A-Za-z0-9_.-]".into()));
        }
        if self.slots.len() < MIN_SLOTS {
            return Err(Error::TooFewSlots {
                found: self.slots.len(),
                required: MIN_SLOTS,
            });
        }
        let mut declared = BTreeSet::new();
        for slot in &self.slots {
            if !valid_slot_id(&slot.slot_id) {
                return Err(invalid(format!("bad slot id `{}`", slot.slot_id)));
            }
            if !declared.insert(slot.slot_id.as_str()) {
                return Err(Error::DuplicateSlot(slot.slot_id.clone()));
            }
            if slot.original_span.trim().is_empty() {
                return Err(invalid(format!("slot `{}` has an empty span", slot.slot_id)));
            }
            if slot.candidates.is_empty() {
                return Err(invalid(format!("slot `{}` has no candidates", slot.slot_id)));
            }
        }
        let mut referenced = BTreeSet::new();
        for seg in &self.segments {
            if let Segment::Slot(id) = seg {
                if !declared.contains(id.as_str()) {
                    return Err(invalid(format!("body references undeclared slot `{id}`")));
                }
                if !referenced.insert(id.as_str()) {
                    return Err(Error::DuplicateSlot(id.clone()));
                }
            }
        }
        if let Some(unused) = declared.difference(&referenced).next() {
            return Err(invalid(format!("slot `{unused}` is not referenced in the body")));
        }

        let count_role = |role: Role| self.slots.iter().filter(|s| s.role == role).count();
        let rels = self.segments.iter().filter(|s| **s == Segment::Rel).count();
        let nums = self.segments.iter().filter(|s| **s == Segment::Num).count();
        match (&self.anchor, self.phenomenon) {
            (
                PhenomenonAnchor::Dative {
                    verb,
                    lemma,
                    alternate,
                    preposition,
                },
                Phenomenon::DativeAlternation,
            ) => {
                if verb.is_empty() || verb.contains(char::is_whitespace) {
                    return Err(invalid("anchor verb must be a single word".into()));
                }
                if preposition.trim().is_empty() {
                    return Err(invalid("empty preposition".into()));
                }
                let in_literal = self.segments.iter().any(|s| match s {
                    Segment::Literal(text) => literal_has_token(text, verb),
                    _ => false,
                });
                if !in_literal {
                    return Err(invalid(format!(
                        "anchor verb `{verb}` must appear as literal text in the body"
                    )));
                }
                if let Some(alt) = alternate {
                    if alt == verb || alt == lemma {
                        return Err(invalid("alternate verb equals the anchor verb".into()));
                    }
                }
                if rels + nums > 0 {
                    return Err(invalid("dative templates take no {REL}/{NUM}".into()));
                }
                if count_role(Role::DativeRecipient) > 1 || count_role(Role::DativeTheme) > 1 {
                    return Err(invalid("at most one recipient and one theme slot".into()));
                }
            }
            (PhenomenonAnchor::Numeric { original }, Phenomenon::NumericalReasoning) => {
                if original.value == 0 {
                    return Err(invalid("numeric anchor must be positive".into()));
                }
                if rels != 1 || nums != 1 {
                    return Err(invalid("numeric templates need exactly one {REL} and one {NUM}".into()));
                }
                let rel_at = self.segments.iter().position(|s| *s == Segment::Rel);
                let num_at = self.segments.iter().position(|s| *s == Segment::Num);
                if rel_at.map(|i| i + 1) != num_at {
                    return Err(invalid("{REL} must immediately precede {NUM}".into()));
                }
                if count_role(Role::DativeRecipient) + count_role(Role::DativeTheme) > 0 {
                    return Err(invalid("numeric templates take no dative roles".into()));
                }
            }
            _ => return Err(invalid("anchor does not match the phenomenon".into())),
        }

        let word_count = word_count(&self.source_sentence);
        let complexity = classify_complexity(word_count, self.parse_depth);
        Ok(PremiseTemplate {
            id: self.id,
            phenomenon: self.phenomenon,
            segments: self.segments,
            slots: self.slots,
            anchor: self.anchor,
            source_sentence: self.source_sentence,
            word_count,
            parse_depth: self.parse_depth,
            complexity,
        })
    }
}

impl PremiseTemplate {
    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn phenomenon(&self) -> Phenomenon {
        self.phenomenon
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    pub fn slots(&self) -> &[ArgumentSlot] {
        &self.slots
    }

    pub fn anchor(&self) -> &PhenomenonAnchor {
        &self.anchor
    }

    pub fn source_sentence(&self) -> &str {
        &self.source_sentence
    }

    pub fn word_count(&self) -> usize {
        self.word_count
    }

    pub fn parse_depth(&self) -> u32 {
        self.parse_depth
    }

    pub fn complexity(&self) -> Complexity {
        self.complexity
    }

    pub fn slot(&self, slot_id: &str) -> Option<&ArgumentSlot> {
        self.slots.iter().find(|s| s.slot_id == slot_id)
    }

    pub fn slot_index(&self, slot_id: &str) -> Option<usize> {
        self.slots.iter().position(|s| s.slot_id == slot_id)
    }

    /// Size of the full cartesian product of candidates.
    pub fn assignment_count(&self) -> u64 {
        self.slots
            .iter()
            .map(|s| s.candidates.len() as u64)
            .fold(1u64, u64::saturating_mul)
    }

    /// The numeric expression of the extracted sentence, for numeric templates.
    pub fn original_expression(&self) -> Option<NumericExpression> {
        match self.anchor {
            PhenomenonAnchor::Numeric { original } => Some(original),
            PhenomenonAnchor::Dative { .. } => None,
        }
    }

    pub fn alternate_verb(&self) -> Option<&str> {
        match &self.anchor {
            PhenomenonAnchor::Dative { alternate, .. } => alternate.as_deref(),
            PhenomenonAnchor::Numeric { .. } => None,
        }
    }

    /// Renders the template with slot strings keyed by slot id. Numeric
    /// templates use the anchor's own expression.
    pub fn render(&self, assignment: &BTreeMap<String, String>) -> Result<String> {
        self.render_segments_with(
            &self.segments,
            |id| assignment.get(id).map(String::as_str),
            None,
        )
    }

    /// Renders every slot with its original span.
    pub fn render_original(&self) -> Result<String> {
        self.render_segments_with(
            &self.segments,
            |id| self.slot(id).map(|s| s.original_span.as_str()),
            None,
        )
    }

    /// Renders a candidate-index assignment, optionally with a numeric
    /// expression in place of the anchor's.
    pub fn render_assignment(
        &self,
        assignment: &Assignment,
        numeric: Option<NumericExpression>,
    ) -> Result<String> {
        self.render_segments(&self.segments, assignment, numeric)
    }

    pub(crate) fn render_segments(
        &self,
        segments: &[Segment],
        assignment: &Assignment,
        numeric: Option<NumericExpression>,
    ) -> Result<String> {
        if assignment.len() != self.slots.len() {
            return Err(Error::InvalidTemplate {
                id: self.id.clone(),
                reason: format!(
                    "assignment has {} indices for {} slots",
                    assignment.len(),
                    self.slots.len()
                ),
            });
        }
        self.render_segments_with(
            segments,
            |id| {
                let i = self.slot_index(id)?;
                self.slots[i].candidate(assignment.indices()[i])
            },
            numeric,
        )
    }

    fn render_segments_with<'a, F>(
        &'a self,
        segments: &'a [Segment],
        fill: F,
        numeric: Option<NumericExpression>,
    ) -> Result<String>
    where
        F: Fn(&str) -> Option<&'a str>,
    {
        let expr = numeric.or_else(|| self.original_expression());
        let number;
        let mut pieces: Vec<&str> = Vec::with_capacity(segments.len());
        let mut num_piece: Option<usize> = None;
        for seg in segments {
            match seg {
                Segment::Literal(text) => pieces.push(text),
                Segment::Slot(id) => {
                    pieces.push(fill(id).ok_or_else(|| Error::MissingAssignment(id.clone()))?)
                }
                Segment::Rel => pieces.push(expr.map(|e| e.rel.phrase()).unwrap_or("")),
                Segment::Num => {
                    num_piece = Some(pieces.len());
                    pieces.push("");
                }
            }
        }
        if let (Some(i), Some(e)) = (num_piece, expr) {
            number = e.value.to_string();
            pieces[i] = &number;
        }
        Ok(join_pieces(pieces))
    }

    /// Every invariant that parsing does not enforce: the original spans
    /// reproduce the source sentence, candidates are distinct and pass the
    /// length rule.
    pub fn violations(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        match self.render_original() {
            Ok(rendered) if rendered == self.source_sentence => {}
            Ok(rendered) => out.push(Violation {
                template_id: self.id.clone(),
                slot_id: None,
                message: format!(
                    "original spans render `{rendered}`, source is `{}`",
                    self.source_sentence
                ),
            }),
            Err(e) => out.push(Violation {
                template_id: self.id.clone(),
                slot_id: None,
                message: e.to_string(),
            }),
        }
        for slot in &self.slots {
            let mut seen = BTreeSet::new();
            for cand in &slot.candidates {
                if !seen.insert(cand.text.as_str()) {
                    out.push(Violation {
                        template_id: self.id.clone(),
                        slot_id: Some(slot.slot_id.clone()),
                        message: format!("duplicate candidate `{}`", cand.text),
                    });
                }
                if let Err(mut v) = validate_instantiation(slot, &cand.text) {
                    v.template_id = self.id.clone();
                    out.push(v);
                }
            }
        }
        out
    }

    /// Fails with every violation if the template is not fit for generation.
    pub fn ensure_valid(&self) -> Result<()> {
        let violations = self.violations();
        if violations.is_empty() {
            Ok(())
        } else {
            Err(Error::TemplateViolations {
                id: self.id.clone(),
                violations: violations.iter().map(ToString::to_string).collect(),
            })
        }
    }

    /// Copy of a dative template whose anchor verb is replaced by `verb`.
    pub fn with_verb(&self, verb: &str) -> Result<PremiseTemplate> {
        let PhenomenonAnchor::Dative {
            verb: old,
            preposition,
            ..
        } = &self.anchor
        else {
            return Err(Error::WrongPhenomenon {
                template: self.id.clone(),
                expected: Phenomenon::DativeAlternation,
                found: self.phenomenon,
            });
        };
        let mut replaced = false;
        let segments = self
            .segments
            .iter()
            .map(|seg| match seg {
                Segment::Literal(text) if !replaced && literal_has_token(text, old) => {
                    replaced = true;
                    let words: Vec<&str> = text
                        .split_whitespace()
                        .map(|w| if w == old { verb } else { w })
                        .collect();
                    Segment::Literal(words.join(" "))
                }
                other => other.clone(),
            })
            .collect();
        let mut swapped = TemplateDraft {
            id: self.id.clone(),
            phenomenon: self.phenomenon,
            segments,
            slots: self.slots.clone(),
            anchor: PhenomenonAnchor::Dative {
                verb: verb.to_string(),
                lemma: verb.to_string(),
                alternate: None,
                preposition: preposition.clone(),
            },
            source_sentence: String::new(),
            parse_depth: self.parse_depth,
        }
        .build()?;
        swapped.source_sentence = swapped.render_original()?;
        // Class stays with the source template so swapped sets remain aligned.
        swapped.word_count = self.word_count;
        swapped.complexity = self.complexity;
        Ok(swapped)
    }

    pub(crate) fn into_draft(self) -> TemplateDraft {
        TemplateDraft {
            id: self.id,
            phenomenon: self.phenomenon,
            segments: self.segments,
            slots: self.slots,
            anchor: self.anchor,
            source_sentence: self.source_sentence,
            parse_depth: self.parse_depth,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_template;

    pub(crate) const LEND: &str = "\
id: lend-01
phenomenon: datives
anchor: verb=lend lemma=lend alternate=rent
depth: 3
source: Even our noble Saudi allies aren't willing to lend us their air bases.
template: {ARG1} {ARG2} lend {ARG3} {ARG4}.

slot: ARG1
original: Even our noble Saudi allies
candidate: The allies across the sea

slot: ARG2
original: aren't willing to
candidate: have promised to

slot: ARG3 recipient
original: us
candidate: Italy

slot: ARG4 theme
original: their air bases
candidate: some of their land
";

    fn lend() -> PremiseTemplate {
        parse_template(LEND).unwrap()
    }

    #[test]
    fn renders_generated_premise() {
        let t = lend();
        let a: BTreeMap<String, String> = [
            ("ARG1", "The allies across the sea"),
            ("ARG2", "have promised to"),
            ("ARG3", "Italy"),
            ("ARG4", "some of their land"),
        ]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v.to_string()))
        .collect();
        assert_eq!(
            t.render(&a).unwrap(),
            "The allies across the sea have promised to lend Italy some of their land."
        );
    }

    #[test]
    fn original_spans_reproduce_source() {
        let t = lend();
        assert_eq!(
            t.render_original().unwrap(),
            "Even our noble Saudi allies aren't willing to lend us their air bases."
        );
        assert!(t.violations().is_empty());
    }

    #[test]
    fn render_reports_missing_slot() {
        let t = lend();
        let mut a = BTreeMap::new();
        for id in ["ARG1", "ARG3", "ARG4"] {
            a.insert(id.to_string(), "x".to_string());
        }
        assert!(matches!(t.render(&a), Err(Error::MissingAssignment(s)) if s == "ARG2"));
    }

    #[test]
    fn length_rule() {
        let t = lend();
        let theme = t.slot("ARG4").unwrap();
        assert!(validate_instantiation(theme, "some of their land").is_ok());
        assert!(validate_instantiation(theme, "their air bases").is_ok());
        let recipient = t.slot("ARG3").unwrap();
        assert!(validate_instantiation(recipient, "the entire allied coalition").is_err());
        assert!(validate_instantiation(recipient, "{ARG1}").is_err());
        assert!(validate_instantiation(recipient, "   ").is_err());
    }

    #[test]
    fn complexity_thresholds() {
        assert_eq!(classify_complexity(12, 3), Complexity::Simple);
        assert_eq!(classify_complexity(27, 7), Complexity::Complex);
        assert_eq!(classify_complexity(12, 7), Complexity::Medium);
        assert_eq!(classify_complexity(16, 3), Complexity::Medium);
        assert_eq!(classify_complexity(26, 6), Complexity::Medium);
        assert_eq!(lend().complexity(), Complexity::Simple);
    }

    #[test]
    fn violations_catch_bad_source_and_long_candidate() {
        let text = LEND
            .replace("lend us their air bases.", "lend us their bases.")
            .replace("candidate: Italy", "candidate: the entire allied coalition");
        let t = parse_template(&text).unwrap();
        let v = t.violations();
        assert_eq!(v.len(), 2, "{v:?}");
        assert!(v[0].message.contains("source"));
        assert_eq!(v[1].slot_id.as_deref(), Some("ARG3"));
        assert!(t.ensure_valid().is_err());
    }

    #[test]
    fn verb_swap_replaces_only_the_anchor() {
        let t = lend();
        let swapped = t.with_verb("rent").unwrap();
        assert_eq!(
            swapped.source_sentence(),
            "Even our noble Saudi allies aren't willing to rent us their air bases."
        );
        assert_eq!(swapped.complexity(), t.complexity());
    }

    #[test]
    fn build_rejects_verb_inside_slot() {
        let text = LEND.replace("template: {ARG1} {ARG2} lend {ARG3} {ARG4}.", "template: {ARG1} {ARG2} {ARG3} {ARG4}.");
        assert!(matches!(parse_template(&text), Err(Error::InvalidTemplate { .. })));
    }

    #[test]
    fn assignment_count_is_product() {
        assert_eq!(lend().assignment_count(), 16);
    }
}
