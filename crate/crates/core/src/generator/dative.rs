//! Hypothesis rules for the dative alternation. From a double-object
//! premise `V REC THEME` the alternate construction `V THEME to REC` and the
//! recipient-less `V THEME` are entailed; dropping the theme is not.

use crate::error::{Error, Result};
use crate::model::{
    Assignment, ExampleId, Label, NliExample, Phenomenon, PhenomenonAnchor, PremiseTemplate,
    Role, Segment,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum DativeRule {
    Alternate,
    DropRecipient,
    DropTheme,
}

impl DativeRule {
    pub const ALL: [DativeRule; 3] = [
        DativeRule::Alternate,
        DativeRule::DropRecipient,
        DativeRule::DropTheme,
    ];

    pub fn rule_id(self) -> &'static str {
        match self {
            DativeRule::Alternate => "dative.alternate",
            DativeRule::DropRecipient => "dative.drop_recipient",
            DativeRule::DropTheme => "dative.drop_theme",
        }
    }

    /// Hypothesis tag used in example ids.
    pub fn tag(self) -> &'static str {
        match self {
            DativeRule::Alternate => "e1",
            DativeRule::DropRecipient => "e2",
            DativeRule::DropTheme => "c1",
        }
    }

    pub fn label(self) -> Label {
        match self {
            DativeRule::Alternate | DativeRule::DropRecipient => Label::Entailment,
            DativeRule::DropTheme => Label::Contradiction,
        }
    }
}

struct Positions<'a> {
    recipient: usize,
    theme: usize,
    preposition: &'a str,
}

fn positions(t: &PremiseTemplate) -> Result<Positions<'_>> {
    let PhenomenonAnchor::Dative {
        verb, preposition, ..
    } = t.anchor()
    else {
        return Err(Error::WrongPhenomenon {
            template: t.id().to_string(),
            expected: Phenomenon::DativeAlternation,
            found: t.phenomenon(),
        });
    };
    let slot_position = |role: Role| -> Result<usize> {
        let slot = t
            .slots()
            .iter()
            .find(|s| s.role == role)
            .ok_or_else(|| Error::MissingRole {
                template: t.id().to_string(),
                role,
            })?;
        Ok(t.segments()
            .iter()
            .position(|s| matches!(s, Segment::Slot(id) if *id == slot.slot_id))
            .expect("built templates reference every slot"))
    };
    let recipient = slot_position(Role::DativeRecipient)?;
    let theme = slot_position(Role::DativeTheme)?;
    let verb_at = t
        .segments()
        .iter()
        .position(|s| matches!(s, Segment::Literal(l) if l.split_whitespace().any(|w| w == verb)));
    let ordered = matches!(verb_at, Some(v) if v < recipient) && recipient < theme;
    if !ordered {
        return Err(Error::InvalidTemplate {
            id: t.id().to_string(),
            reason: "expected verb, recipient and theme in that order".into(),
        });
    }
    Ok(Positions {
        recipient,
        theme,
        preposition,
    })
}

/// Segments of the hypothesis produced by `rule`.
pub fn rule_segments(t: &PremiseTemplate, rule: DativeRule) -> Result<Vec<Segment>> {
    let p = positions(t)?;
    let segs = t.segments();
    let mut out = Vec::with_capacity(segs.len() + 1);
    for (i, seg) in segs.iter().enumerate() {
        match rule {
            DativeRule::Alternate if i == p.recipient => out.push(segs[p.theme].clone()),
            DativeRule::Alternate if i == p.theme => {
                out.push(Segment::Literal(p.preposition.to_string()));
                out.push(segs[p.recipient].clone());
            }
            DativeRule::DropRecipient if i == p.recipient => {}
            DativeRule::DropTheme if i == p.theme => {}
            _ => out.push(seg.clone()),
        }
    }
    Ok(out)
}

/// The three hypotheses of one premise: two entailments, one contradiction.
pub fn gen_dative_hypotheses(t: &PremiseTemplate, assignment: &Assignment) -> Result<Vec<NliExample>> {
    let premise = t.render_assignment(assignment, None)?;
    DativeRule::ALL
        .iter()
        .map(|&rule| {
            let hypothesis = t.render_segments(&rule_segments(t, rule)?, assignment, None)?;
            Ok(NliExample {
                id: ExampleId::new(t.id(), assignment.clone(), rule.tag()),
                premise: premise.clone(),
                hypothesis,
                label: rule.label(),
                template_id: t.id().to_string(),
                rule_id: rule.rule_id().to_string(),
                complexity: t.complexity(),
                lexical_group: None,
                range_tag: None,
                numeric_info: None,
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::model::parse_template;

    const LEND: &str = "\
id: lend-min
phenomenon: datives
anchor: verb=lend
depth: 3
source: Can you lend me a pen before class?
template: {ARG0} you lend {ARG1} {ARG2} before {ARG3} ?
slot: ARG0
original: Can
candidate: Could
slot: ARG1 recipient
original: me
candidate: her
slot: ARG2 theme
original: a pen
candidate: a pencil
slot: ARG3
original: class
candidate: lunch
";

    #[test]
    fn three_hypotheses_with_fixed_labels() {
        let t = parse_template(LEND).unwrap();
        let a = Assignment::new(vec![1, 0, 1, 0]);
        let hyps = gen_dative_hypotheses(&t, &a).unwrap();
        let got: Vec<_> = hyps.iter().map(|e| (e.hypothesis.as_str(), e.label)).collect();
        assert_eq!(
            got,
            [
                ("Could you lend a pencil to me before class?", Label::Entailment),
                ("Could you lend a pencil before class?", Label::Entailment),
                ("Could you lend me before class?", Label::Contradiction),
            ]
        );
        assert!(hyps.iter().all(|e| e.premise == "Could you lend me a pencil before class?"));
        assert_eq!(hyps[0].id.to_string(), "lend-min:1-0-1-0:e1");
    }
}
