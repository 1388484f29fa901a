//! Annotation worksheets: one row per (template, slot) with the slot blanked
//! and empty columns for workers to fill with alternative spans.

use std::collections::BTreeMap;
use std::io::{Read, Write};

use crate::error::{Error, Result};
use crate::model::{validate_instantiation, ArgumentSlot, PremiseTemplate, Violation};

pub const BLANK: &str = "[span to fill in]";
pub const DEFAULT_FILLS: usize = 6;

fn header(fills: usize) -> Vec<String> {
    let mut h = vec![
        "template_id".to_string(),
        "slot_id".to_string(),
        "blanked_sentence".to_string(),
    ];
    h.extend((1..=fills).map(|i| format!("fill_{i}")));
    h
}

/// The template's source sentence with one slot replaced by the blank marker.
pub fn blanked_sentence(t: &PremiseTemplate, slot_id: &str) -> Result<String> {
    let fills: BTreeMap<String, String> = t
        .slots()
        .iter()
        .map(|s| {
            let text = if s.slot_id == slot_id {
                BLANK.to_string()
            } else {
                s.original_span.clone()
            };
            (s.slot_id.clone(), text)
        })
        .collect();
    t.render(&fills)
}

/// Writes the worksheet; an empty template list yields the header only.
pub fn emit_annotation_worksheet<W: Write>(
    templates: &[PremiseTemplate],
    fills: usize,
    out: W,
) -> Result<usize> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(header(fills))?;
    let mut rows = 0;
    for t in templates {
        for slot in t.slots() {
            let mut record = vec![
                t.id().to_string(),
                slot.slot_id.clone(),
                blanked_sentence(t, &slot.slot_id)?,
            ];
            record.resize(3 + fills, String::new());
            w.write_record(&record)?;
            rows += 1;
        }
    }
    w.flush()?;
    Ok(rows)
}

#[derive(Debug, Default)]
pub struct Ingested {
    pub templates: Vec<PremiseTemplate>,
    pub added: usize,
    /// Fills that were dropped, with the reason.
    pub rejected: Vec<Violation>,
}

/// Adds the filled spans of a worksheet to the templates' candidate lists.
/// Empty cells, repeats of existing candidates and spans that break the
/// length rule are skipped; the latter are reported.
pub fn ingest_worksheet<R: Read>(templates: &[PremiseTemplate], input: R) -> Result<Ingested> {
    let mut by_id: BTreeMap<&str, usize> = BTreeMap::new();
    for (i, t) in templates.iter().enumerate() {
        by_id.insert(t.id(), i);
    }
    let mut slots: Vec<Vec<ArgumentSlot>> = templates.iter().map(|t| t.slots().to_vec()).collect();
    let mut result = Ingested::default();

    let mut r = csv::Reader::from_reader(input);
    for record in r.records() {
        let record = record?;
        let (Some(tid), Some(sid)) = (record.get(0), record.get(1)) else {
            return Err(Error::Worksheet("row without template_id/slot_id".into()));
        };
        let &ti = by_id
            .get(tid)
            .ok_or_else(|| Error::UnknownTemplate(tid.to_string()))?;
        let slot = slots[ti]
            .iter_mut()
            .find(|s| s.slot_id == sid)
            .ok_or_else(|| Error::InvalidTemplate {
                id: tid.to_string(),
                reason: format!("worksheet names unknown slot `{sid}`"),
            })?;
        for fill in record.iter().skip(3).map(str::trim).filter(|f| !f.is_empty()) {
            if slot.candidates.iter().any(|c| c.text == fill) {
                continue;
            }
            if let Err(mut v) = validate_instantiation(slot, fill) {
                v.template_id = tid.to_string();
                result.rejected.push(v);
                continue;
            }
            let collected: Vec<String> = slot
                .candidates
                .iter()
                .filter(|c| !c.original)
                .map(|c| c.text.clone())
                .chain([fill.to_string()])
                .collect();
            *slot = ArgumentSlot::new(&slot.slot_id, &slot.original_span, slot.role, collected);
            result.added += 1;
        }
    }

    for (t, new_slots) in templates.iter().zip(slots) {
        let mut draft = t.clone().into_draft();
        draft.slots = new_slots;
        result.templates.push(draft.build()?);
    }
    Ok(result)
}
