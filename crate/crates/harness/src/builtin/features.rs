//! Features of the difference learner: token differences, the alignment
//! gap between premise and hypothesis, and numeric relation cues.

use std::collections::BTreeMap;

use phenom_core::miner::numeral_value;
use phenom_core::text::{lower_words, tokenize};

fn bucket(n: usize) -> usize {
    n.min(5)
}

fn expression(s: &str) -> Option<(&'static str, u64)> {
    let toks: Vec<String> = tokenize(s).into_iter().map(str::to_lowercase).collect();
    let (i, v) = toks
        .iter()
        .enumerate()
        .find_map(|(i, t)| numeral_value(t).map(|v| (i, v)))?;
    let rel = match (i >= 2).then(|| (toks[i - 2].as_str(), toks[i - 1].as_str())) {
        Some(("more", "than")) => "more",
        Some(("less", "than")) => "less",
        _ => "exact",
    };
    Some((rel, v))
}

pub fn features(premise: &str, hypothesis: &str) -> Vec<String> {
    let p = lower_words(premise);
    let h = lower_words(hypothesis);
    let mut f = vec!["bias".to_string()];

    let mut diff: BTreeMap<&str, i64> = BTreeMap::new();
    for w in &p {
        *diff.entry(w).or_default() += 1;
    }
    for w in &h {
        *diff.entry(w).or_default() -= 1;
    }
    let (mut missing, mut extra) = (0, 0);
    for (w, &d) in &diff {
        if d > 0 {
            missing += 1;
            f.push(format!("p-:{w}"));
        } else if d < 0 {
            extra += 1;
            f.push(format!("h+:{w}"));
        }
    }
    f.push(format!("n-:{}", bucket(missing)));
    f.push(format!("n+:{}", bucket(extra)));

    let lcp = p.iter().zip(&h).take_while(|(a, b)| a == b).count();
    let room = p.len().min(h.len()) - lcp;
    let lcs = p
        .iter()
        .rev()
        .zip(h.iter().rev())
        .take(room)
        .take_while(|(a, b)| a == b)
        .count();
    let gap_p = &p[lcp..p.len() - lcs];
    let gap_h = &h[lcp..h.len() - lcs];
    let shape = format!("gap:{}{}", usize::from(!gap_p.is_empty()), usize::from(!gap_h.is_empty()));
    f.push(format!("before:{}", lcp.checked_sub(1).map_or("^", |i| p[i].as_str())));
    f.push(format!("after:{}", if lcs == 0 { "$" } else { p[p.len() - lcs].as_str() }));
    f.push(format!("{shape}|len:{}", bucket(gap_p.len())));
    if let (Some(first), Some(last)) = (gap_p.first(), gap_p.last()) {
        f.push(format!("gp0:{first}"));
        f.push(format!("gpz:{last}"));
    }
    if let (Some(first), Some(last)) = (gap_h.first(), gap_h.last()) {
        f.push(format!("gh0:{first}"));
        f.push(format!("ghz:{last}"));
    }
    f.push(shape);

    if let (Some((rp, vp)), Some((rh, vh))) = (expression(premise), expression(hypothesis)) {
        let rels = format!("rel:{rp}>{rh}");
        f.push(format!("{rels}|p={vp}"));
        f.push(format!("{rels}|h={vh}"));
        if vp == vh {
            f.push(format!("{rels}|same"));
        }
        f.push(rels);
    }
    f
}
