//! Acceptance criteria for the primary components. Prints one PASS/FAIL
//! line per criterion and exits nonzero if any fails.

#[path = "../../core/tests/common/mod.rs"]
mod common;

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::process::Command;
use std::time::Instant;

use common::{shape, shipped, shipped_all, synthetic_dative, synthetic_numeric};
use phenom_core::generator::{
    gen_dative_hypotheses, gen_numeric_hypotheses_for, generate_dataset, label_numeric_pair,
    GenerationConfig, IntegerDomain, NumberRange, NumericRecipe, PremiseMode, Quotas, Variant,
};
use phenom_core::oracle::brute_force_label;
use phenom_core::splitter::{
    balance_labels, label_counts, make_lexical_partition, make_range_datasets, make_train_test,
    materialize_partition, split_by_complexity, ExamplePool, TrainTestSpec,
};
use phenom_core::{
    Assignment, Error, Label, LexicalGroup, NliExample, NumericExpression as E, PremiseTemplate, Rel,
};
use phenom_harness::curve::ExperimentConfig;
use phenom_harness::metrics::ALL;
use phenom_harness::probing::probe_items;
use phenom_harness::protocol::EvalItem;
use phenom_harness::{
    run_learning_curve, run_probing, AdapterSpec, Builtin, BuiltinAdapter, Condition, EvalSet,
    LearningCurve,
};
use proptest::prelude::*;
use proptest::test_runner::{Config, TestRunner};

type Outcome = Result<String, String>;
type Criterion = (&'static str, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {
        let holds: bool = $cond;
        if !holds {
            return Err(format!($($fmt)+));
        }
    };
}

fn repo() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../..")
}

fn sampled(kind: &str, count: usize, seed: u64) -> Vec<NliExample> {
    let config = GenerationConfig {
        premises: PremiseMode::Sample { count, seed },
        ..GenerationConfig::default()
    };
    generate_dataset(&shipped_all(kind), &config).unwrap().examples
}

fn oracle_equivalence() -> Outcome {
    // Every boundary lies at or below 201, so this domain behaves like an
    // unbounded one for n <= 200.
    let domain = IntegerDomain::new(1, 202).unwrap();
    let start = Instant::now();
    let mut n = 0usize;
    for rp in Rel::ALL {
        for np in 1..=200 {
            for rh in Rel::ALL {
                for nh in 1..=200 {
                    let (p, h) = (E::new(rp, np), E::new(rh, nh));
                    let fast = label_numeric_pair(p, h, domain).ok();
                    let slow = brute_force_label(p, h, domain).ok();
                    ensure!(fast == slow, "{p} / {h}: {fast:?} vs oracle {slow:?}");
                    n += 1;
                }
            }
        }
    }
    let secs = start.elapsed().as_secs_f64();
    ensure!(n == 360_000, "{n} combinations");
    ensure!(secs < 10.0, "took {secs:.1}s");
    Ok(format!("{n} combinations agree in {secs:.2}s"))
}

fn worked_examples() -> Outcome {
    let d = IntegerDomain::default();
    let citi = shipped("numbers", "citi-01");
    let a = Assignment::new(vec![1, 1, 1, 1]);
    let premise = E::more_than(7);
    ensure!(
        citi.render_assignment(&a, Some(premise)).unwrap()
            == "My marriage, despite much frustration, lasted more than 7 years.",
        "citi premise"
    );
    for (h, want) in [
        (E::more_than(2), Label::Entailment),
        (E::less_than(5), Label::Contradiction),
        (E::exact(8), Label::Neutral),
    ] {
        let got = label_numeric_pair(premise, h, d).unwrap();
        ensure!(got == want, "{premise} / {h}: {got:?}");
    }

    let union = shipped("numbers", "union-01");
    let orig = Assignment::original(4);
    ensure!(
        union.render_original().unwrap() == "The union has more than 4 thousand members in Canada.",
        "union source"
    );
    for (h, text, want) in [
        (E::exact(3), "The union has 3 thousand members in Canada.", Label::Contradiction),
        (E::more_than(3), "The union has more than 3 thousand members in Canada.", Label::Entailment),
        (E::more_than(5), "The union has more than 5 thousand members in Canada.", Label::Neutral),
    ] {
        let rendered = union.render_assignment(&orig, Some(h)).unwrap();
        ensure!(rendered == text, "rendered `{rendered}`");
        let got = label_numeric_pair(E::more_than(4), h, d).unwrap();
        ensure!(got == want, "more than 4 / {h}: {got:?}");
    }

    let lend = shipped("datives", "lend-01");
    let a = Assignment::new(vec![1, 1, 1, 1]);
    let p = "The allies across the sea have promised to lend Italy some of their land.";
    ensure!(lend.render_assignment(&a, None).unwrap() == p, "lend premise");
    let got: Vec<(String, Label)> = gen_dative_hypotheses(&lend, &a)
        .unwrap()
        .into_iter()
        .map(|e| (e.hypothesis, e.label))
        .collect();
    let want = [
        ("The allies across the sea have promised to lend some of their land to Italy.", Label::Entailment),
        ("The allies across the sea have promised to lend some of their land.", Label::Entailment),
        ("The allies across the sea have promised to lend Italy.", Label::Contradiction),
    ];
    ensure!(got.len() == 3, "{} hypotheses", got.len());
    for ((g, gl), (w, wl)) in got.iter().zip(want) {
        ensure!(g == w && *gl == wl, "got `{g}` ({gl:?}), want `{w}` ({wl:?})");
    }
    Ok("citi rows, more-than-4 triple and lend rows match".into())
}

fn per_premise(examples: &[NliExample]) -> BTreeMap<(String, Assignment, String), BTreeMap<Label, usize>> {
    let mut out: BTreeMap<_, BTreeMap<Label, usize>> = BTreeMap::new();
    for e in examples {
        *out.entry((e.template_id.clone(), e.assignment().clone(), e.premise.clone()))
            .or_default()
            .entry(e.label)
            .or_default() += 1;
    }
    out
}

fn generation_counts() -> Outcome {
    let datives = generate_dataset(&shipped_all("datives"), &GenerationConfig::default()).unwrap();
    let groups = per_premise(&datives.examples);
    let want = BTreeMap::from([(Label::Entailment, 2), (Label::Contradiction, 1)]);
    for (key, hist) in &groups {
        ensure!(*hist == want, "{}: {hist:?}", key.2);
    }
    let dative_premises = groups.len();

    let numbers = sampled("numbers", 60, 0);
    let groups = per_premise(&numbers);
    let want = BTreeMap::from([(Label::Entailment, 4), (Label::Neutral, 6), (Label::Contradiction, 12)]);
    for (key, hist) in &groups {
        ensure!(*hist == want, "{}: {hist:?}", key.2);
    }
    let numeric_premises = groups.len();

    let t = shipped("numbers", "citi-01");
    let neutral = NumericRecipe {
        quotas: Quotas(BTreeMap::from([(Label::Neutral, 1)])),
        ..NumericRecipe::default()
    };
    let r = gen_numeric_hypotheses_for(&t, &Assignment::original(4), E::exact(7), &neutral);
    ensure!(
        matches!(r, Err(Error::QuotaUnsatisfiable { label: Label::Neutral, .. })),
        "exact premise with a neutral quota gave {r:?}"
    );
    Ok(format!(
        "{dative_premises} dative premises x 3, {numeric_premises} numeric premises x 22, exact/neutral refused"
    ))
}

fn train_test_case(templates: &[PremiseTemplate], seed: u64) -> Result<(), TestCaseError> {
    let data = generate_dataset(templates, &GenerationConfig::default()).unwrap();
    let split = make_train_test(&data.examples, &TrainTestSpec { seed, ..Default::default() }).unwrap();
    let pool = ExamplePool::new(data.examples).unwrap();
    let (train, test) = split.materialize(&pool).unwrap();
    let train_t: BTreeSet<&str> = train.iter().map(|e| e.template_id.as_str()).collect();
    prop_assert!(test.iter().all(|e| !train_t.contains(e.template_id.as_str())));
    for side in [&train, &test] {
        let c = label_counts(side);
        prop_assert!(c[&Label::Entailment] > 0);
        prop_assert_eq!(c[&Label::Entailment], c[&Label::Contradiction]);
    }
    Ok(())
}

fn lexical_case(t: &PremiseTemplate, seed: u64) -> Result<(), TestCaseError> {
    let p = make_lexical_partition(t, seed).unwrap();
    let config = GenerationConfig::default();
    let g1 = materialize_partition(t, &p, LexicalGroup::Lex1, &config, &Variant::default()).unwrap();
    let g2 = materialize_partition(t, &p, LexicalGroup::Lex2, &config, &Variant::default()).unwrap();
    let premises = |ex: &[NliExample]| ex.iter().map(|e| e.premise.clone()).collect::<BTreeSet<_>>();
    prop_assert!(premises(&g1).is_disjoint(&premises(&g2)));
    for (i, slot) in t.slots().iter().enumerate() {
        let texts = |ex: &[NliExample]| -> BTreeSet<String> {
            ex.iter()
                .map(|e| slot.candidates[e.assignment().indices()[i]].text.clone())
                .collect()
        };
        prop_assert!(texts(&g1).is_disjoint(&texts(&g2)));
    }
    Ok(())
}

fn range_case(t: &PremiseTemplate, range: NumberRange, seed: u64) -> Result<(), TestCaseError> {
    let config = GenerationConfig { seed, ..GenerationConfig::default() };
    let sets = make_range_datasets(std::slice::from_ref(t), &[range], LexicalGroup::Lex1, &config).unwrap();
    prop_assert!(!sets[&range].is_empty());
    for e in &sets[&range] {
        let info = e.numeric_info.unwrap();
        prop_assert!(range.contains(info.premise.value) && range.contains(info.hypothesis.value));
    }
    Ok(())
}

fn share(templates: &[PremiseTemplate], config: &GenerationConfig) -> f64 {
    let data = generate_dataset(templates, config).unwrap();
    let split = make_train_test(&data.examples, &TrainTestSpec::default()).unwrap();
    split.train.len() as f64 / (split.train.len() + split.test.len()) as f64
}

fn split_invariants() -> Outcome {
    let cases = 100;
    let mut runner = TestRunner::new(Config {
        failure_persistence: None,
        ..Config::with_cases(cases)
    });
    let sets = prop::collection::vec(shape(4, 3), 2..7);
    runner
        .run(&(sets, any::<u64>()), |(shapes, seed)| {
            let ts: Vec<PremiseTemplate> =
                shapes.iter().enumerate().map(|(i, s)| synthetic_dative(i, s)).collect();
            train_test_case(&ts, seed)
        })
        .map_err(|e| format!("train/test: {e}"))?;
    runner
        .run(&(shape(5, 5), any::<u64>()), |(s, seed)| lexical_case(&synthetic_dative(0, &s), seed))
        .map_err(|e| format!("lexical: {e}"))?;
    runner
        .run(&(shape(4, 3), 1u64..500, 20u64..200, any::<u64>()), |(s, lo, w, seed)| {
            range_case(&synthetic_numeric(1, &s), NumberRange { lo, hi: lo + w }, seed)
        })
        .map_err(|e| format!("range: {e}"))?;

    let d = share(&shipped_all("datives"), &GenerationConfig::default());
    let sample = GenerationConfig {
        premises: PremiseMode::Sample { count: 40, seed: 0 },
        ..GenerationConfig::default()
    };
    let n = share(&shipped_all("numbers"), &sample);
    for (name, s) in [("datives", d), ("numbers", n)] {
        ensure!((s - 0.77).abs() <= 0.05, "{name} train share {s:.3}");
    }
    Ok(format!("3 x {cases} property cases; train share datives {d:.3}, numbers {n:.3}"))
}

fn probing_echo() -> Outcome {
    let datives = sampled("datives", 200, 3);
    let dir = tempfile::tempdir().unwrap();
    let overlap = run_probing(
        &BuiltinAdapter::new(Builtin::Overlap),
        &split_by_complexity(&datives),
        4000,
        1,
        dir.path(),
    )
    .map_err(|e| e.to_string())?;
    let e = overlap.cell(ALL, "entailment").unwrap().accuracy;
    let c = overlap.cell(ALL, "contradiction").unwrap().accuracy;
    ensure!(e >= 0.99 && c <= 0.01, "overlap E {e:.4} C {c:.4}");

    let numbers = sampled("numbers", 30, 3);
    let majority = run_probing(
        &BuiltinAdapter::new(Builtin::Majority),
        &split_by_complexity(&numbers),
        600,
        2,
        dir.path(),
    )
    .map_err(|e| e.to_string())?;
    let cell = majority.cell(ALL, ALL).unwrap();
    ensure!((cell.accuracy - 1.0 / 3.0).abs() <= 0.02, "majority {:.4}", cell.accuracy);
    Ok(format!(
        "overlap E {e:.4} C {c:.4}; majority {:.4} on {} examples",
        cell.accuracy, cell.n
    ))
}

fn phenom(config: &Path, out: &Path, args: &[&str]) -> Result<(), String> {
    let o = Command::new(env!("CARGO_BIN_EXE_phenom"))
        .arg("--config")
        .arg(config)
        .arg("--out")
        .arg(out)
        .args(args)
        .env_remove("PHENOM_SEED")
        .output()
        .map_err(|e| e.to_string())?;
    ensure!(o.status.success(), "phenom {args:?}: {}", String::from_utf8_lossy(&o.stderr).trim());
    Ok(())
}

fn pipeline(config: &Path, out: &Path) -> Result<(), String> {
    for cmd in ["generate", "split", "run"] {
        phenom(config, out, &[cmd])?;
    }
    Ok(())
}

fn determinism() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("phenom.toml");
    fs::write(
        &config,
        format!(
            "seed = 21\n[paths]\ntemplates = \"{}\"\nout = \"unused\"\n\
             [generation.premises.sample]\ncount = 50\nseed = 4\n\
             [experiment]\nkind = \"curve\"\ntrain_sizes = [0, 40, 120]\nrepeats = 3\n\
             [experiment.adapter]\nname = \"overlap\"\nbuiltin = \"overlap\"\n",
            repo().join("templates/datives").display()
        ),
    )
    .unwrap();
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    pipeline(&config, &a)?;
    pipeline(&config, &b)?;
    let files = ["dataset.jsonl", "splits.json", "run/curve.json", "run/curve.csv"];
    for f in files {
        let (x, y) = (fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap());
        ensure!(!x.is_empty(), "{f} is empty");
        ensure!(x == y, "{f} differs between runs");
    }
    Ok(format!("{} files byte-identical across two runs", files.len()))
}

fn final_accuracy(curve: &LearningCurve, condition: &str) -> Result<(usize, f64), String> {
    curve
        .series(condition, EvalSet::Test, ALL, ALL)
        .last()
        .map(|&(k, mean, _)| (k, mean))
        .ok_or_else(|| format!("no series for {condition}"))
}

fn range_echo() -> Outcome {
    let dir = tempfile::tempdir().unwrap();
    let config = repo().join("configs/numbers.toml");
    let out = dir.path().join("out");
    let start = Instant::now();
    pipeline(&config, &out)?;
    let secs = start.elapsed().as_secs_f64();
    let curve: LearningCurve =
        serde_json::from_str(&fs::read_to_string(out.join("run/curve.json")).unwrap()).unwrap();
    let (k, same) = final_accuracy(&curve, "range/30-49/30-49")?;
    let (_, cross) = final_accuracy(&curve, "range/30-49/200-299")?;
    ensure!(same > cross, "same-range {same:.4} <= cross-range {cross:.4}");
    ensure!(secs < 300.0, "suite took {secs:.0}s");
    Ok(format!("k={k}: same-range {same:.4} > cross-range {cross:.4}; suite {secs:.1}s"))
}

fn curve_consistency() -> Outcome {
    let data = sampled("datives", 20, 3);
    let split = make_train_test(&data, &TrainTestSpec::default()).unwrap();
    let condition = Condition::from_split(&split, &ExamplePool::new(data).unwrap()).unwrap();
    let items: Vec<EvalItem> = condition.test.iter().map(EvalItem::from_example).collect();
    for kind in Builtin::ALL {
        let mut config = ExperimentConfig::new(AdapterSpec::builtin(kind), vec![0, 40]);
        config.repeats = 2;
        let dir = tempfile::tempdir().unwrap();
        let curve = run_learning_curve(&condition, &config, dir.path()).map_err(|e| e.to_string())?;
        let probe_dir = tempfile::tempdir().unwrap();
        let probe = probe_items(&BuiltinAdapter::new(kind), &items, items.len(), 0, probe_dir.path())
            .map_err(|e| e.to_string())?;
        let probed: Vec<_> = probe.cells.iter().map(|c| (&c.complexity, &c.label, c.n, c.accuracy)).collect();
        for repeat in 0..2 {
            let k0: Vec<_> = curve
                .rows
                .iter()
                .filter(|r| r.set == EvalSet::Test && r.train_size == 0 && r.repeat == repeat)
                .map(|r| (&r.complexity, &r.label, r.n, r.accuracy))
                .collect();
            ensure!(k0 == probed, "{kind} repeat {repeat}: k=0 differs from probing");
        }
    }

    let test = balance_labels(sampled("numbers", 4, 3), &Label::ALL, 0).unwrap();
    let train: Vec<NliExample> = test
        .iter()
        .map(|e| NliExample { id: e.id.clone().with_variant("copy"), ..e.clone() })
        .collect();
    let n = train.len();
    let condition = Condition { name: "seen".into(), control_tags: BTreeMap::new(), train, test };
    let config = ExperimentConfig::new(AdapterSpec::builtin(Builtin::Memorizing), vec![0, n]);
    let dir = tempfile::tempdir().unwrap();
    let curve = run_learning_curve(&condition, &config, dir.path()).map_err(|e| e.to_string())?;
    let worst = curve
        .rows
        .iter()
        .filter(|r| r.train_size == n)
        .map(|r| r.accuracy)
        .fold(1.0, f64::min);
    ensure!(worst == 1.0, "memorizer reached only {worst}");
    Ok(format!("k=0 matches probing for {} baselines; memorizer 1.0 at k={n}", Builtin::ALL.len()))
}

fn main() {
    let criteria: [Criterion; 8] = [
        ("numeric-label oracle equivalence", oracle_equivalence),
        ("worked-example fidelity", worked_examples),
        ("generation counts", generation_counts),
        ("split invariants", split_invariants),
        ("probing echo", probing_echo),
        ("determinism", determinism),
        ("range generalization echo", range_echo),
        ("learning-curve consistency", curve_consistency),
    ];
    let mut failed = 0;
    for (name, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(AssertUnwindSafe(check)).unwrap_or_else(|p| {
            let msg = p
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| p.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            Err(format!("panicked: {msg}"))
        });
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS {name}: {detail} [{secs:.1}s]"),
            Err(why) => {
                failed += 1;
                println!("FAIL {name}: {why} [{secs:.1}s]");
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
}
