//! Tokenization shared by word counting, mining and the overlap baselines.

/// Characters split off the edges of a whitespace token.
const EDGE_PUNCT: &[char] = &[
    '.', ',', ';', ':', '!', '?', '"', '(', ')', '[', ']', '{', '}', '\u{201c}', '\u{201d}',
];

/// Pieces that attach to the preceding piece without a space when rendering.
pub(crate) fn attaches_left(piece: &str) -> bool {
    piece.starts_with(['.', ',', ';', ':', '!', '?', ')'])
}

/// Joins rendered pieces with single spaces, skipping empty pieces and
/// attaching punctuation to the piece before it.
pub fn join_pieces<'a, I>(pieces: I) -> String
where
    I: IntoIterator<Item = &'a str>,
{
    let mut out = String::new();
    for piece in pieces {
        let piece = piece.trim();
        if piece.is_empty() {
            continue;
        }
        if !out.is_empty() && !attaches_left(piece) {
            out.push(' ');
        }
        out.push_str(piece);
    }
    out
}

/// Whitespace tokenization with leading and trailing punctuation detached
/// into tokens of their own.
pub fn tokenize(s: &str) -> Vec<&str> {
    let mut out = Vec::new();
    for raw in s.split_whitespace() {
        let core_start = raw
            .char_indices()
            .find(|(_, c)| !EDGE_PUNCT.contains(c))
            .map(|(i, _)| i);
        let Some(start) = core_start else {
            push_punct(raw, &mut out);
            continue;
        };
        let end = raw
            .char_indices()
            .rev()
            .find(|(_, c)| !EDGE_PUNCT.contains(c))
            .map(|(i, c)| i + c.len_utf8())
            .unwrap_or(raw.len());
        push_punct(&raw[..start], &mut out);
        out.push(&raw[start..end]);
        push_punct(&raw[end..], &mut out);
    }
    out
}

fn push_punct<'a>(s: &'a str, out: &mut Vec<&'a str>) {
    for (i, c) in s.char_indices() {
        out.push(&s[i..i + c.len_utf8()]);
    }
}

/// Number of word tokens: tokens (after punctuation detachment) that contain
/// at least one alphanumeric character.
pub fn word_count(s: &str) -> usize {
    tokenize(s)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .count()
}

/// Lowercased word tokens, punctuation dropped.
pub fn lower_words(s: &str) -> Vec<String> {
    tokenize(s)
        .into_iter()
        .filter(|t| t.chars().any(char::is_alphanumeric))
        .map(str::to_lowercase)
        .collect()
}
