//! Line-oriented template file format.
//!
//! ```text
//! id: lend-01
//! phenomenon: datives
//! anchor: verb=lend lemma=lend alternate=rent
//! depth: 3
//! source: Even our noble Saudi allies aren't willing to lend us their air bases.
//! template: {ARG1} {ARG2} lend {ARG3} {ARG4}.
//!
//! slot: ARG3 recipient
//! original: us
//! candidate: Italy
//! ```
//!
//! Numeric templates declare `anchor: rel=less_than num=5` and use `{REL}`
//! and `{NUM}` markers. Lines starting with `#` are comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::template::{valid_slot_id, ArgumentSlot, Instantiation, PhenomenonAnchor, Role, Segment};
use super::{NumericExpression, Phenomenon, PremiseTemplate, Rel, TemplateDraft};
use crate::error::{Error, Result};
use crate::text::join_pieces;

fn syntax(line: usize, message: impl Into<String>) -> Error {
    Error::TemplateSyntax {
        line,
        message: message.into(),
    }
}

#[derive(Default)]
struct SlotBlock {
    line: usize,
    id: String,
    role: Option<Role>,
    original: Option<String>,
    candidates: Vec<String>,
}

/// Parses one template file.
pub fn parse_template(text: &str) -> Result<PremiseTemplate> {
    let mut header: BTreeMap<&str, (usize, &str)> = BTreeMap::new();
    let mut blocks: Vec<SlotBlock> = Vec::new();

    for (i, raw) in text.lines().enumerate() {
        let lineno = i + 1;
        let line = raw.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            continue;
        }
        let (key, value) = line
            .split_once(':')
            .ok_or_else(|| syntax(lineno, "expected `key: value`"))?;
        let key = key.trim();
        let value = value.trim();
        match key {
            "slot" => {
                let mut words = value.split_whitespace();
                let id = words
                    .next()
                    .ok_or_else(|| syntax(lineno, "slot block without an id"))?;
                let role = match words.next() {
                    None => None,
                    Some(r) => Some(
                        Role::from_dsl(r)
                            .ok_or_else(|| syntax(lineno, format!("unknown role `{r}`")))?,
                    ),
                };
                if words.next().is_some() {
                    return Err(syntax(lineno, "slot line takes an id and an optional role"));
                }
                if blocks.iter().any(|b| b.id == id) {
                    return Err(Error::DuplicateSlot(id.to_string()));
                }
                blocks.push(SlotBlock {
                    line: lineno,
                    id: id.to_string(),
                    role,
                    ..SlotBlock::default()
                });
            }
            "original" | "candidate" => {
                let block = blocks
                    .last_mut()
                    .ok_or_else(|| syntax(lineno, format!("`{key}` outside a slot block")))?;
                if value.is_empty() {
                    return Err(syntax(lineno, format!("empty `{key}`")));
                }
                if key == "original" {
                    if block.original.is_some() {
                        return Err(syntax(lineno, "slot has two `original` lines"));
                    }
                    block.original = Some(value.to_string());
                } else {
                    block.candidates.push(value.to_string());
                }
            }
            "id" | "phenomenon" | "anchor" | "depth" | "source" | "template" => {
                if !blocks.is_empty() {
                    return Err(syntax(lineno, format!("header `{key}` after slot blocks")));
                }
                if header.insert(key, (lineno, value)).is_some() {
                    return Err(syntax(lineno, format!("duplicate header `{key}`")));
                }
            }
            other => return Err(syntax(lineno, format!("unknown key `{other}`"))),
        }
    }

    let required = |key: &str| {
        header
            .get(key)
            .copied()
            .ok_or_else(|| syntax(0, format!("missing header `{key}`")))
    };
    let (_, id) = required("id")?;
    let (pline, phen) = required("phenomenon")?;
    let phenomenon: Phenomenon = phen.parse().map_err(|e: String| syntax(pline, e))?;
    let (dline, depth) = required("depth")?;
    let parse_depth: u32 = depth
        .parse()
        .map_err(|_| syntax(dline, format!("bad depth `{depth}`")))?;
    let (_, source) = required("source")?;
    let (bline, body) = required("template")?;
    let segments = parse_body(body, bline)?;
    let (aline, anchor_text) = header.get("anchor").copied().ok_or(Error::MissingAnchor)?;
    let anchor = parse_anchor(anchor_text, aline, phenomenon)?;

    let mut slots = Vec::with_capacity(blocks.len());
    for block in blocks {
        let original = block
            .original
            .ok_or_else(|| syntax(block.line, format!("slot `{}` has no `original`", block.id)))?;
        let slot = ArgumentSlot::new(
            &block.id,
            &original,
            block.role.unwrap_or(Role::Generic),
            block.candidates,
        );
        if slot.candidates.len() < 2 {
            return Err(Error::TooFewCandidates {
                template: id.to_string(),
                slot: block.id,
                found: slot.candidates.len(),
            });
        }
        slots.push(slot);
    }

    TemplateDraft {
        id: id.to_string(),
        phenomenon,
        segments,
        slots,
        anchor,
        source_sentence: source.to_string(),
        parse_depth,
    }
    .build()
}

fn parse_body(body: &str, line: usize) -> Result<Vec<Segment>> {
    let mut segments = Vec::new();
    let mut literal = String::new();
    let flush = |literal: &mut String, segments: &mut Vec<Segment>| {
        let words: Vec<&str> = literal.split_whitespace().collect();
        if !words.is_empty() {
            segments.push(Segment::Literal(words.join(" ")));
        }
        literal.clear();
    };
    let mut chars = body.chars();
    while let Some(c) = chars.next() {
        match c {
            '{' => {
                flush(&mut literal, &mut segments);
                let mut name = String::new();
                loop {
                    match chars.next() {
                        Some('}') => break,
                        Some('{') | None => return Err(syntax(line, "malformed slot marker")),
                        Some(ch) => name.push(ch),
                    }
                }
                let name = name.trim();
                segments.push(match name {
                    "REL" => Segment::Rel,
                    "NUM" => Segment::Num,
                    id if valid_slot_id(id) => Segment::Slot(id.to_string()),
                    id => return Err(syntax(line, format!("malformed slot marker `{{{id}}}`"))),
                });
            }
            '}' => return Err(syntax(line, "malformed slot marker: stray `}`")),
            ch => literal.push(ch),
        }
    }
    flush(&mut literal, &mut segments);
    Ok(segments)
}

fn parse_anchor(text: &str, line: usize, phenomenon: Phenomenon) -> Result<PhenomenonAnchor> {
    let mut fields = BTreeMap::new();
    for pair in text.split_whitespace() {
        let (k, v) = pair
            .split_once('=')
            .ok_or_else(|| syntax(line, format!("anchor field `{pair}` is not key=value")))?;
        if fields.insert(k, v).is_some() {
            return Err(syntax(line, format!("duplicate anchor field `{k}`")));
        }
    }
    let mut take = |k: &str| fields.remove(k);
    let anchor = match phenomenon {
        Phenomenon::DativeAlternation => {
            let verb = take("verb").ok_or(Error::MissingAnchor)?.to_string();
            PhenomenonAnchor::Dative {
                lemma: take("lemma").map_or_else(|| verb.clone(), str::to_string),
                alternate: take("alternate").map(str::to_string),
                preposition: take("prep").unwrap_or("to").to_string(),
                verb,
            }
        }
        Phenomenon::NumericalReasoning => {
            let rel: Rel = take("rel")
                .ok_or(Error::MissingAnchor)?
                .parse()
                .map_err(|e: String| syntax(line, e))?;
            let num = take("num").ok_or(Error::MissingAnchor)?;
            let value = num
                .parse()
                .map_err(|_| syntax(line, format!("bad anchor number `{num}`")))?;
            PhenomenonAnchor::Numeric {
                original: NumericExpression::new(rel, value),
            }
        }
    };
    if let Some(k) = fields.keys().next() {
        return Err(syntax(line, format!("unknown anchor field `{k}`")));
    }
    Ok(anchor)
}

/// Writes a template back in the file format; `parse_template` inverts it.
pub fn serialize_template(t: &PremiseTemplate) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "id: {}", t.id());
    let _ = writeln!(out, "phenomenon: {}", t.phenomenon().short_name());
    match t.anchor() {
        PhenomenonAnchor::Dative {
            verb,
            lemma,
            alternate,
            preposition,
        } => {
            let _ = write!(out, "anchor: verb={verb} lemma={lemma}");
            if let Some(alt) = alternate {
                let _ = write!(out, " alternate={alt}");
            }
            if preposition != "to" {
                let _ = write!(out, " prep={preposition}");
            }
            out.push('\n');
        }
        PhenomenonAnchor::Numeric { original } => {
            let _ = writeln!(out, "anchor: rel={} num={}", original.rel.as_str(), original.value);
        }
    }
    let _ = writeln!(out, "depth: {}", t.parse_depth());
    let _ = writeln!(out, "source: {}", t.source_sentence());
    let markers: Vec<String> = t
        .segments()
        .iter()
        .map(|s| match s {
            Segment::Literal(text) => text.clone(),
            Segment::Slot(id) => format!("{{{id}}}"),
            Segment::Rel => "{REL}".to_string(),
            Segment::Num => "{NUM}".to_string(),
        })
        .collect();
    let _ = writeln!(out, "template: {}", join_pieces(markers.iter().map(String::as_str)));
    for slot in t.slots() {
        out.push('\n');
        match slot.role {
            Role::Generic => {
                let _ = writeln!(out, "slot: {}", slot.slot_id);
            }
            role => {
                let _ = writeln!(out, "slot: {} {}", slot.slot_id, role.as_dsl());
            }
        }
        let _ = writeln!(out, "original: {}", slot.original_span);
        for Instantiation { text, original } in &slot.candidates {
            if !original {
                let _ = writeln!(out, "candidate: {text}");
            }
        }
    }
    out
}
