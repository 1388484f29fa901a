//! Shallow pattern heuristics that flag corpus sentences worth turning into
//! templates. Output is meant for manual curation, so precision is favored.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::model::{Phenomenon, Rel};
use crate::text::tokenize;

const DEFAULT_LEXICON: &str = include_str!("../../data/dative_verbs.txt");

const OBJECT_PRONOUNS: &[&str] = &["me", "you", "him", "her", "us", "them"];
const DETERMINERS: &[&str] = &[
    "a", "an", "the", "his", "her", "their", "our", "my", "your", "its", "some", "this", "these",
    "those", "every", "each", "no", "any", "another",
];
const PREPOSITIONS: &[&str] = &[
    "to", "for", "in", "on", "at", "of", "from", "with", "by", "about", "into", "over", "out",
    "up", "down", "off", "back", "away", "through", "after", "before", "around",
];
const CLAUSE_WORDS: &[&str] = &[
    "and", "but", "or", "because", "that", "which", "who", "whom", "when", "while", "if", "how",
    "what", "where", "why", "so",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Tier {
    /// Object pronoun right after the verb.
    A,
    B,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum MatchInfo {
    Numeric {
        /// Token index of the numeral.
        position: usize,
        value: u64,
        rel: Option<Rel>,
    },
    Dative {
        lemma: String,
        verb: String,
        position: usize,
        tier: Tier,
    },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PremiseCandidate {
    pub sentence: String,
    pub phenomenon: Phenomenon,
    pub corpus_line: usize,
    pub match_info: MatchInfo,
}

/// Value of a numeral token: digits, optionally grouped by commas.
pub fn numeral_value(token: &str) -> Option<u64> {
    let bytes = token.as_bytes();
    if bytes.is_empty() || !bytes[0].is_ascii_digit() || !bytes[bytes.len() - 1].is_ascii_digit() {
        return None;
    }
    if !token.chars().all(|c| c.is_ascii_digit() || c == ',') || token.contains(",,") {
        return None;
    }
    token.replace(',', "").parse().ok()
}

fn lines<'a, I, S>(corpus: I) -> impl Iterator<Item = (usize, S)> + 'a
where
    I: IntoIterator<Item = S> + 'a,
    S: AsRef<str> + 'a,
{
    corpus
        .into_iter()
        .enumerate()
        .map(|(i, s)| (i + 1, s))
        .filter(|(_, s)| !s.as_ref().trim().is_empty())
}

/// One candidate per numeral token. Sentences are expected to be
/// normalized with `normalize_numbers` beforehand.
pub fn mine_numeric_candidates<I, S>(corpus: I) -> Vec<PremiseCandidate>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = Vec::new();
    for (line, sentence) in lines(corpus) {
        let sentence = sentence.as_ref();
        let tokens = tokenize(sentence);
        for (position, tok) in tokens.iter().enumerate() {
            let Some(value) = numeral_value(tok) else { continue };
            let rel = match position.checked_sub(2).map(|p| &tokens[p..position]) {
                Some([a, b]) if b.eq_ignore_ascii_case("than") => {
                    if a.eq_ignore_ascii_case("more") {
                        Some(Rel::MoreThan)
                    } else if a.eq_ignore_ascii_case("less") {
                        Some(Rel::LessThan)
                    } else {
                        None
                    }
                }
                _ => None,
            };
            out.push(PremiseCandidate {
                sentence: sentence.to_string(),
                phenomenon: Phenomenon::NumericalReasoning,
                corpus_line: line,
                match_info: MatchInfo::Numeric {
                    position,
                    value,
                    rel,
                },
            });
        }
    }
    out
}

/// Dative verb lemmas with their irregular forms.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VerbLexicon {
    lemmas: Vec<String>,
    irregular: BTreeMap<String, String>,
}

impl Default for VerbLexicon {
    fn default() -> Self {
        Self::parse(DEFAULT_LEXICON)
    }
}

impl VerbLexicon {
    /// `lemma: form form ...` per line; `#` starts a comment.
    pub fn parse(text: &str) -> Self {
        let mut lemmas = Vec::new();
        let mut irregular = BTreeMap::new();
        for line in text.lines() {
            let line = line.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let (lemma, forms) = line.split_once(':').unwrap_or((line, ""));
            let lemma = lemma.trim().to_lowercase();
            for form in forms.split_whitespace() {
                irregular.insert(form.to_lowercase(), lemma.clone());
            }
            lemmas.push(lemma);
        }
        Self { lemmas, irregular }
    }

    pub fn from_lemmas<I: IntoIterator<Item = S>, S: AsRef<str>>(lemmas: I) -> Self {
        Self {
            lemmas: lemmas.into_iter().map(|s| s.as_ref().to_lowercase()).collect(),
            irregular: BTreeMap::new(),
        }
    }

    pub fn lemmas(&self) -> &[String] {
        &self.lemmas
    }

    pub fn is_empty(&self) -> bool {
        self.lemmas.is_empty()
    }

    /// Lemma of an inflected form, by irregular table then suffix stripping.
    pub fn lemma_of(&self, word: &str) -> Option<&str> {
        let w = word.to_lowercase();
        if let Some(l) = self.irregular.get(&w) {
            return Some(l);
        }
        let mut stems = vec![w.clone()];
        for suffix in ["ing", "ed", "es", "s", "d"] {
            if let Some(stem) = w.strip_suffix(suffix) {
                stems.push(stem.to_string());
                if suffix == "ing" {
                    stems.push(format!("{stem}e"));
                }
                // Doubled final consonant: "sending" is not, "planned" is.
                let b = stem.as_bytes();
                if b.len() > 2 && b[b.len() - 1] == b[b.len() - 2] {
                    stems.push(stem[..stem.len() - 1].to_string());
                }
            }
        }
        self.lemmas
            .iter()
            .find(|l| stems.iter().any(|s| s == *l))
            .map(String::as_str)
    }
}

fn is_boundary(tok: &str) -> bool {
    let lower = tok.to_lowercase();
    tok.chars().all(|c| !c.is_alphanumeric()) || CLAUSE_WORDS.contains(&lower.as_str())
}

fn tier(after: &[&str]) -> Option<Tier> {
    let lower: Vec<String> = after.iter().map(|t| t.to_lowercase()).collect();
    let zone_len = lower
        .iter()
        .position(|t| is_boundary(t) || PREPOSITIONS.contains(&t.as_str()))
        .unwrap_or(lower.len());
    let zone = &lower[..zone_len];
    let first = zone.first()?;
    if OBJECT_PRONOUNS.contains(&first.as_str()) {
        return (zone.len() >= 2).then_some(Tier::A);
    }
    // Second group opened by a determiner after a non-empty first group.
    let second = zone
        .iter()
        .enumerate()
        .skip(1)
        .find(|(_, t)| DETERMINERS.contains(&t.as_str()))
        .map(|(i, _)| i)?;
    (second + 1 < zone.len()).then_some(Tier::B)
}

/// Sentences where a lexicon verb is followed by two object groups before
/// the clause ends.
pub fn mine_dative_candidates<I, S>(corpus: I, lexicon: &VerbLexicon) -> Vec<PremiseCandidate>
where
    I: IntoIterator<Item = S>,
    S: AsRef<str>,
{
    let mut out = Vec::new();
    for (line, sentence) in lines(corpus) {
        let sentence = sentence.as_ref();
        let tokens = tokenize(sentence);
        for (position, tok) in tokens.iter().enumerate() {
            let Some(lemma) = lexicon.lemma_of(tok) else { continue };
            let after_determiner = position
                .checked_sub(1)
                .is_some_and(|p| DETERMINERS.contains(&tokens[p].to_lowercase().as_str()));
            if after_determiner {
                continue;
            }
            if let Some(tier) = tier(&tokens[position + 1..]) {
                out.push(PremiseCandidate {
                    sentence: sentence.to_string(),
                    phenomenon: Phenomenon::DativeAlternation,
                    corpus_line: line,
                    match_info: MatchInfo::Dative {
                        lemma: lemma.to_string(),
                        verb: tok.to_string(),
                        position,
                        tier,
                    },
                });
            }
        }
    }
    out
}
