//! Candidate premise mining and the annotation worksheet round trip.

mod mining;
mod numbers;
mod worksheet;

pub use mining::{
    mine_dative_candidates, mine_numeric_candidates, numeral_value, MatchInfo, PremiseCandidate,
    Tier, VerbLexicon,
};
pub use numbers::normalize_numbers;
pub use worksheet::{
    blanked_sentence, emit_annotation_worksheet, ingest_worksheet, Ingested, BLANK, DEFAULT_FILLS,
};
