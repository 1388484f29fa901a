#![allow(dead_code)]

use std::path::PathBuf;

use phenom_core::io::load_templates;
use phenom_core::model::parse_template;
use phenom_core::PremiseTemplate;
use proptest::prelude::*;

pub fn templates_dir(kind: &str) -> PathBuf {
    PathBuf::from(concat!(env!("CARGO_MANIFEST_DIR"), "/../../templates")).join(kind)
}

pub fn shipped_all(kind: &str) -> Vec<PremiseTemplate> {
    load_templates(&templates_dir(kind)).unwrap()
}

pub fn shipped(kind: &str, id: &str) -> PremiseTemplate {
    load_templates(&templates_dir(kind).join(format!("{id}.tmpl")))
        .unwrap()
        .remove(0)
}

/// Shape of a synthetic template: candidates per slot, filler words and
/// parse depth (which together pick the complexity class).
#[derive(Debug, Clone)]
pub struct Shape {
    pub candidates: Vec<usize>,
    pub filler: usize,
    pub depth: u32,
}

pub fn shape(max_slots: usize, max_candidates: usize) -> impl Strategy<Value = Shape> {
    (
        prop::collection::vec(2..=max_candidates, 4..=max_slots),
        prop_oneof![Just(0usize), Just(6), Just(24)],
        prop_oneof![Just(2u32), Just(5), Just(8)],
    )
        .prop_map(|(candidates, filler, depth)| Shape {
            candidates,
            filler,
            depth,
        })
}

fn word(tid: usize, slot: usize, k: usize) -> String {
    // Letters only so every candidate is a single word.
    let enc = |mut n: usize| {
        let mut s = String::new();
        loop {
            s.push((b'a' + (n % 26) as u8) as char);
            n /= 26;
            if n == 0 {
                break s;
            }
        }
    };
    format!("w{}x{}y{}", enc(tid), enc(slot), enc(k))
}

fn slot_blocks(tid: usize, shape: &Shape, roles: &[&str]) -> (Vec<String>, String) {
    let mut body = String::new();
    let mut originals = Vec::new();
    for (i, &n) in shape.candidates.iter().enumerate() {
        let role = roles.get(i).copied().unwrap_or("");
        body.push_str(&format!("\nslot: ARG{} {}\n", i + 1, role));
        let original = word(tid, i, 0);
        body.push_str(&format!("original: {original}\n"));
        for k in 1..n {
            body.push_str(&format!("candidate: {}\n", word(tid, i, k)));
        }
        originals.push(original);
    }
    (originals, body)
}

fn filler(n: usize) -> Vec<String> {
    (0..n).map(|i| format!("filler{i}")).collect()
}

/// Dative template `ARG1 .. gave ARGn-1 ARGn filler.` with the last two
/// slots as recipient and theme.
pub fn synthetic_dative(tid: usize, shape: &Shape) -> PremiseTemplate {
    let n = shape.candidates.len();
    let mut roles = vec![""; n];
    roles[n - 2] = "recipient";
    roles[n - 1] = "theme";
    let (originals, blocks) = slot_blocks(tid, shape, &roles);
    let mut body: Vec<String> = (1..n - 1).map(|i| format!("{{ARG{i}}}")).collect();
    let mut source: Vec<String> = originals[..n - 2].to_vec();
    body.push("gave".into());
    source.push("gave".into());
    body.push(format!("{{ARG{}}}", n - 1));
    body.push(format!("{{ARG{n}}}"));
    source.extend(originals[n - 2..].iter().cloned());
    body.extend(filler(shape.filler));
    source.extend(filler(shape.filler));
    let text = format!(
        "id: syn-{tid:03}\nphenomenon: datives\nanchor: verb=gave lemma=give alternate=handed\n\
         depth: {}\nsource: {}.\ntemplate: {}.\n{blocks}",
        shape.depth,
        source.join(" "),
        body.join(" "),
    );
    parse_template(&text).unwrap()
}

/// Numeric template `ARG1 .. ARGn-1 more than 5 ARGn filler.`
pub fn synthetic_numeric(tid: usize, shape: &Shape) -> PremiseTemplate {
    let n = shape.candidates.len();
    let (originals, blocks) = slot_blocks(tid, shape, &[]);
    let mut body: Vec<String> = (1..n).map(|i| format!("{{ARG{i}}}")).collect();
    let mut source: Vec<String> = originals[..n - 1].to_vec();
    body.push("{REL} {NUM}".into());
    source.push("more than 5".into());
    body.push(format!("{{ARG{n}}}"));
    source.push(originals[n - 1].clone());
    body.extend(filler(shape.filler));
    source.extend(filler(shape.filler));
    let text = format!(
        "id: syn-{tid:03}\nphenomenon: numbers\nanchor: rel=more_than num=5\n\
         depth: {}\nsource: {}.\ntemplate: {}.\n{blocks}",
        shape.depth,
        source.join(" "),
        body.join(" "),
    );
    parse_template(&text).unwrap()
}
