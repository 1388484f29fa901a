//! Slow reference implementations used to check the fast paths in tests.

use crate::error::{Error, Result};
use crate::generator::{IntegerDomain, Semantics};
use crate::model::{Label, NumericExpression, Rel};

/// Largest domain the enumerating oracles accept.
pub const MAX_SPAN: u64 = 100_000;

/// Membership of the doubled point `x2 / 2`.
fn holds(expr: NumericExpression, x2: u64) -> bool {
    let n2 = expr.value * 2;
    match expr.rel {
        Rel::MoreThan => x2 > n2,
        Rel::LessThan => x2 < n2,
        Rel::Exact => x2 == n2,
    }
}

fn enumerate_label<I: Iterator<Item = u64> + Clone>(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    points: I,
) -> Result<Label> {
    let (mut p_any, mut h_any, mut shared, mut p_outside_h) = (false, false, false, false);
    for x in points {
        let p = holds(premise, x);
        let h = holds(hypothesis, x);
        p_any |= p;
        h_any |= h;
        shared |= p && h;
        p_outside_h |= p && !h;
    }
    if !p_any {
        return Err(Error::EmptyDenotation(premise));
    }
    if !h_any {
        return Err(Error::EmptyDenotation(hypothesis));
    }
    Ok(if !p_outside_h {
        Label::Entailment
    } else if !shared {
        Label::Contradiction
    } else {
        Label::Neutral
    })
}

fn check_span(domain: IntegerDomain) {
    assert!(
        domain.max - domain.min <= MAX_SPAN,
        "oracle domain too large: [{}, {}]",
        domain.min,
        domain.max
    );
}

/// Integer label by walking every member of the domain.
pub fn brute_force_label(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    domain: IntegerDomain,
) -> Result<Label> {
    check_span(domain);
    enumerate_label(premise, hypothesis, (domain.min..=domain.max).map(|x| x * 2))
}

/// Dense label by walking the half-integer grid of the domain. Every
/// denotation has integer endpoints, so the grid separates them.
pub fn brute_force_label_dense(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    domain: IntegerDomain,
) -> Result<Label> {
    check_span(domain);
    enumerate_label(premise, hypothesis, domain.min * 2..=domain.max * 2)
}

pub fn brute_force_label_with(
    premise: NumericExpression,
    hypothesis: NumericExpression,
    domain: IntegerDomain,
    semantics: Semantics,
) -> Result<Label> {
    match semantics {
        Semantics::Discrete => brute_force_label(premise, hypothesis, domain),
        Semantics::Dense => brute_force_label_dense(premise, hypothesis, domain),
    }
}
