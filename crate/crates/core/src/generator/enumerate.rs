//! Enumeration of candidate-index assignments in lexicographic order, the
//! last slot varying fastest.

use rand::seq::index;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{Assignment, PremiseTemplate};
use crate::seed;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PremiseMode {
    All,
    /// `count` assignments drawn without replacement, returned in
    /// lexicographic order.
    Sample { count: usize, seed: u64 },
}

fn decode(mut k: u64, allowed: &[Vec<usize>]) -> Assignment {
    let mut idx = vec![0; allowed.len()];
    for (slot, choices) in allowed.iter().enumerate().rev() {
        let n = choices.len() as u64;
        idx[slot] = choices[(k % n) as usize];
        k /= n;
    }
    Assignment::new(idx)
}

/// Assignments over the given per-slot candidate indices.
pub fn enumerate_restricted(allowed: &[Vec<usize>], mode: PremiseMode) -> Result<Vec<Assignment>> {
    if allowed.is_empty() || allowed.iter().any(Vec::is_empty) {
        return Err(Error::EmptyInput("candidate choices"));
    }
    let total = allowed
        .iter()
        .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
        .ok_or_else(|| Error::InvalidConfig("assignment space overflows u64".into()))?;
    match mode {
        PremiseMode::All => Ok((0..total).map(|k| decode(k, allowed)).collect()),
        PremiseMode::Sample { count, seed } => {
            if count as u64 > total {
                return Err(Error::SampleTooLarge {
                    requested: count as u64,
                    available: total,
                });
            }
            let total = usize::try_from(total)
                .map_err(|_| Error::InvalidConfig("assignment space too large to sample".into()))?;
            let mut picks = index::sample(&mut seed::rng(seed), total, count).into_vec();
            picks.sort_unstable();
            Ok(picks.into_iter().map(|k| decode(k as u64, allowed)).collect())
        }
    }
}

/// Assignments over every candidate of every slot.
pub fn enumerate_assignments(t: &PremiseTemplate, mode: PremiseMode) -> Result<Vec<Assignment>> {
    let allowed: Vec<Vec<usize>> = t
        .slots()
        .iter()
        .map(|s| (0..s.candidates.len()).collect())
        .collect();
    enumerate_restricted(&allowed, mode)
}

/// Rendered premises paired with their assignments.
pub fn enumerate_premises(t: &PremiseTemplate, mode: PremiseMode) -> Result<Vec<(String, Assignment)>> {
    enumerate_assignments(t, mode)?
        .into_iter()
        .map(|a| Ok((t.render_assignment(&a, None)?, a)))
        .collect()
}
