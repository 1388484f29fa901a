//! Averaged multiclass perceptron over string features.

use std::collections::{BTreeMap, HashMap};

use phenom_core::{seed, Label};
use rand::seq::SliceRandom;
use serde::{Deserialize, Serialize};

use super::features::features;
use crate::protocol::AdapterRecord;

pub const EPOCHS: usize = 10;

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct Perceptron {
    /// Averaged weights per feature, in `Label::ALL` order.
    pub weights: BTreeMap<String, [f64; 3]>,
}

fn index(l: Label) -> usize {
    Label::ALL.iter().position(|&x| x == l).expect("label in enum")
}

fn argmax(scores: [f64; 3]) -> usize {
    let mut best = 0;
    for i in 1..3 {
        if scores[i] > scores[best] {
            best = i;
        }
    }
    best
}

impl Perceptron {
    pub fn fit(records: &[AdapterRecord], seed: u64) -> Self {
        let mut vocab: HashMap<String, usize> = HashMap::new();
        let data: Vec<(Vec<usize>, usize)> = records
            .iter()
            .map(|r| {
                let ids = features(&r.premise, &r.hypothesis)
                    .into_iter()
                    .map(|f| {
                        let n = vocab.len();
                        *vocab.entry(f).or_insert(n)
                    })
                    .collect();
                (ids, index(r.label.expect("training records are labeled")))
            })
            .collect();
        let mut w = vec![[0.0f64; 3]; vocab.len()];
        // Running sums of step-weighted updates for averaging.
        let mut u = vec![[0.0f64; 3]; vocab.len()];
        let mut step = 1.0f64;
        let mut order: Vec<usize> = (0..data.len()).collect();
        let mut rng = seed::rng_for(seed, &["perceptron"]);
        for _ in 0..EPOCHS {
            order.shuffle(&mut rng);
            for &i in &order {
                let (feats, gold) = &data[i];
                let mut scores = [0.0; 3];
                for &f in feats {
                    for l in 0..3 {
                        scores[l] += w[f][l];
                    }
                }
                let pred = argmax(scores);
                if pred != *gold {
                    for &f in feats {
                        w[f][*gold] += 1.0;
                        w[f][pred] -= 1.0;
                        u[f][*gold] += step;
                        u[f][pred] -= step;
                    }
                }
                step += 1.0;
            }
        }
        let mut weights = BTreeMap::new();
        for (name, f) in vocab {
            let avg = [0, 1, 2].map(|l| w[f][l] - u[f][l] / step);
            if avg.iter().any(|&x| x != 0.0) {
                weights.insert(name, avg);
            }
        }
        Self { weights }
    }

    pub fn predict(&self, premise: &str, hypothesis: &str) -> Label {
        let mut scores = [0.0; 3];
        for f in features(premise, hypothesis) {
            if let Some(ws) = self.weights.get(&f) {
                for l in 0..3 {
                    scores[l] += ws[l];
                }
            }
        }
        Label::ALL[argmax(scores)]
    }
}
