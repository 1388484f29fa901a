mod common;

use std::collections::BTreeMap;

use common::{shape, synthetic_dative, synthetic_numeric};
use phenom_core::generator::{
    enumerate_assignments, gen_dative_hypotheses, label_numeric_pair, label_numeric_pair_with,
    IntegerDomain, PremiseMode, Semantics,
};
use phenom_core::model::{parse_template, serialize_template};
use phenom_core::text::tokenize;
use phenom_core::{classify_complexity, Complexity, Label, NumericExpression, Rel};
use proptest::prelude::*;

fn expr() -> impl Strategy<Value = NumericExpression> {
    (prop::sample::select(Rel::ALL.to_vec()), 2u64..5000).prop_map(|(r, v)| NumericExpression::new(r, v))
}

fn semantics() -> impl Strategy<Value = Semantics> {
    prop_oneof![Just(Semantics::Discrete), Just(Semantics::Dense)]
}

fn label(p: NumericExpression, h: NumericExpression, s: Semantics) -> Label {
    label_numeric_pair_with(p, h, IntegerDomain::default(), s).unwrap()
}

fn multiset(s: &str) -> BTreeMap<String, usize> {
    let mut m = BTreeMap::new();
    for t in tokenize(s) {
        *m.entry(t.to_lowercase()).or_insert(0) += 1;
    }
    m
}

proptest! {
    #[test]
    fn dsl_round_trip(s in shape(6, 5), numeric in any::<bool>()) {
        let t = if numeric { synthetic_numeric(3, &s) } else { synthetic_dative(3, &s) };
        let text = serialize_template(&t);
        let back = parse_template(&text).unwrap();
        prop_assert_eq!(&back, &t);
        prop_assert_eq!(serialize_template(&back), text);
    }

    #[test]
    fn complexity_classes_partition(words in 0usize..60, depth in 0u32..15) {
        let c = classify_complexity(words, depth);
        let simple = words < 16 && depth < 4;
        let complex = words > 25 && depth > 6;
        prop_assert_eq!(c == Complexity::Simple, simple);
        prop_assert_eq!(c == Complexity::Complex, complex);
        prop_assert_eq!(c == Complexity::Medium, !simple && !complex);
    }

    #[test]
    fn entailment_is_reflexive(p in expr(), s in semantics()) {
        prop_assert_eq!(label(p, p, s), Label::Entailment);
    }

    #[test]
    fn entailment_is_transitive(a in expr(), b in expr(), c in expr(), s in semantics()) {
        if label(a, b, s) == Label::Entailment && label(b, c, s) == Label::Entailment {
            prop_assert_eq!(label(a, c, s), Label::Entailment);
        }
    }

    #[test]
    fn contradiction_is_symmetric(a in expr(), b in expr(), s in semantics()) {
        prop_assert_eq!(label(a, b, s) == Label::Contradiction, label(b, a, s) == Label::Contradiction);
    }

    #[test]
    fn exact_premise_is_never_neutral(v in 2u64..5000, h in expr()) {
        prop_assert_ne!(
            label_numeric_pair(NumericExpression::exact(v), h, IntegerDomain::default()).unwrap(),
            Label::Neutral
        );
    }

    #[test]
    fn dative_hypotheses_reuse_premise_tokens(s in shape(5, 3), pick in any::<prop::sample::Index>()) {
        let t = synthetic_dative(7, &s);
        let all = enumerate_assignments(&t, PremiseMode::All).unwrap();
        let a = &all[pick.index(all.len())];
        let hyps = gen_dative_hypotheses(&t, a).unwrap();
        prop_assert_eq!(hyps.len(), 3);
        let labels: Vec<Label> = hyps.iter().map(|e| e.label).collect();
        prop_assert_eq!(labels, [Label::Entailment, Label::Entailment, Label::Contradiction]);
        let premise = multiset(&hyps[0].premise);
        for h in &hyps {
            let mut extra = multiset(&h.hypothesis);
            // The alternation adds its preposition and nothing else.
            if h.id.hypothesis == "e1" {
                extra.entry("to".into()).and_modify(|n| *n -= 1);
            }
            for (tok, n) in extra {
                prop_assert!(premise.get(&tok).copied().unwrap_or(0) >= n, "{} in {}", tok, h.hypothesis);
            }
        }
    }
}
