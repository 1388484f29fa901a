mod common;

use phenom_core::miner::{
    emit_annotation_worksheet, ingest_worksheet, mine_dative_candidates, mine_numeric_candidates,
    normalize_numbers, MatchInfo, Tier, VerbLexicon,
};
use phenom_core::Rel;
use proptest::prelude::*;

const ONES: [&str; 20] = [
    "", "one", "two", "three", "four", "five", "six", "seven", "eight", "nine", "ten", "eleven",
    "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen", "eighteen", "nineteen",
];
const TENS: [&str; 10] = [
    "", "", "twenty", "thirty", "forty", "fifty", "sixty", "seventy", "eighty", "ninety",
];

/// English spelling of 1..=9999, hyphenated tens, optional "and".
fn spell(n: u64, and: bool) -> String {
    let mut parts: Vec<String> = Vec::new();
    let (th, rest) = (n / 1000, n % 1000);
    let (h, rest) = (rest / 100, rest % 100);
    if th > 0 {
        parts.push(format!("{} thousand", ONES[th as usize]));
    }
    if h > 0 {
        parts.push(format!("{} hundred", ONES[h as usize]));
    }
    if rest > 0 {
        if and && !parts.is_empty() {
            parts.push("and".into());
        }
        parts.push(match rest {
            1..=19 => ONES[rest as usize].to_string(),
            _ if rest % 10 == 0 => TENS[(rest / 10) as usize].to_string(),
            _ => format!("{}-{}", TENS[(rest / 10) as usize], ONES[(rest % 10) as usize]),
        });
    }
    parts.join(" ")
}

#[test]
fn every_spelled_number_up_to_9999() {
    for n in 1..=9999 {
        for and in [false, true] {
            let words = spell(n, and);
            let got = normalize_numbers(&format!("They counted {words} birds."));
            assert_eq!(got, format!("They counted {n} birds."), "{words}");
        }
    }
}

#[test]
fn capitalized_and_punctuated() {
    assert_eq!(normalize_numbers("Twelve people came, then forty-two."), "12 people came, then 42.");
    assert_eq!(normalize_numbers("five, six"), "5, 6");
    assert_eq!(normalize_numbers("Salt and pepper"), "Salt and pepper");
}

#[test]
fn worded_corpus_is_mined_after_normalizing() {
    let corpus = [
        "My marriage lasted more than seven years.",
        "The union has more than four thousand members in Canada.",
        "They met in a quiet room.",
    ];
    let normalized: Vec<String> = corpus.iter().map(|s| normalize_numbers(s)).collect();
    let c = mine_numeric_candidates(&normalized);
    let got: Vec<(usize, u64, Option<Rel>)> = c
        .iter()
        .map(|c| match c.match_info {
            MatchInfo::Numeric { value, rel, .. } => (c.corpus_line, value, rel),
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(got, [(1, 7, Some(Rel::MoreThan)), (2, 4000, Some(Rel::MoreThan))]);
}

#[test]
fn dative_mining_tiers() {
    let lex = VerbLexicon::default();
    let c = mine_dative_candidates(
        [
            "Could you lend me a pencil before class?",
            "The bank sold the family a house.",
            "The gift was a surprise.",
            "",
            "We promised them a reply.",
        ],
        &lex,
    );
    let got: Vec<(usize, Tier)> = c
        .iter()
        .map(|c| match &c.match_info {
            MatchInfo::Dative { tier, .. } => (c.corpus_line, *tier),
            _ => unreachable!(),
        })
        .collect();
    assert_eq!(got, [(1, Tier::A), (2, Tier::B), (5, Tier::A)]);
}

#[test]
fn custom_lexicon() {
    let lex = VerbLexicon::parse("# verbs\nmail\n");
    assert_eq!(lex.lemmas(), ["mail"]);
    let c = mine_dative_candidates(["She mailed him the forms."], &lex);
    assert_eq!(c.len(), 1);
}

#[test]
fn worksheet_then_ingest_adds_candidates() {
    let t = common::shipped("datives", "lend-01");
    let mut sheet = Vec::new();
    let rows = emit_annotation_worksheet(std::slice::from_ref(&t), 2, &mut sheet).unwrap();
    assert_eq!(rows, 4);
    let mut reader = csv::Reader::from_reader(sheet.as_slice());
    assert_eq!(
        reader.headers().unwrap().iter().collect::<Vec<_>>(),
        ["template_id", "slot_id", "blanked_sentence", "fill_1", "fill_2"]
    );
    let mut records: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // Fill the theme with one valid span and one too long.
    let arg4 = records.iter().position(|r| &r[1] == "ARG4").unwrap();
    let blanked = records[arg4][2].to_string();
    assert!(blanked.contains("[span to fill in]"));
    records[arg4] = csv::StringRecord::from(vec![
        "lend-01",
        "ARG4",
        blanked.as_str(),
        "their old ships",
        "all of the remaining rich farm land",
    ]);
    let mut filled = csv::Writer::from_writer(Vec::new());
    filled.write_record(["template_id", "slot_id", "blanked_sentence", "fill_1", "fill_2"]).unwrap();
    for r in &records {
        filled.write_record(r).unwrap();
    }
    let filled = filled.into_inner().unwrap();
    let before = t.slot("ARG4").unwrap().candidates.len();
    let out = ingest_worksheet(std::slice::from_ref(&t), filled.as_slice()).unwrap();
    assert_eq!(out.added, 1);
    assert_eq!(out.rejected.len(), 1);
    assert_eq!(out.templates[0].slot("ARG4").unwrap().candidates.len(), before + 1);
}

proptest! {
    #[test]
    fn normalization_is_idempotent(s in "[a-z ,.-]{0,40}|(one|two|twenty|hundred|thousand|and|five|-| |,)*") {
        let once = normalize_numbers(&s);
        prop_assert_eq!(normalize_numbers(&once), once.clone());
    }

    #[test]
    fn one_candidate_per_numeral(values in prop::collection::vec(1u64..10_000, 0..6)) {
        let sentence = values.iter().map(|v| format!("{v} x")).collect::<Vec<_>>().join(" and ");
        let c = mine_numeric_candidates([sentence.as_str()]);
        let mined: Vec<u64> = c.iter().map(|c| match c.match_info {
            MatchInfo::Numeric { value, .. } => value,
            _ => unreachable!(),
        }).collect();
        prop_assert_eq!(mined, values);
    }
}
