use std::fs::{self, File};
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};

use phenom_core::generator::generate_dataset;
use phenom_core::miner::{
    emit_annotation_worksheet, ingest_worksheet, mine_dative_candidates, mine_numeric_candidates,
    normalize_numbers, VerbLexicon,
};
use phenom_core::splitter::{
    make_generalization_suite, make_train_test, split_by_complexity, DatasetSplit, ExamplePool,
    TrainTestSpec,
};
use phenom_core::{io, parse_template, NliExample, Phenomenon, PremiseTemplate};
use phenom_harness::builtin::{predict_builtin, train_builtin};
use phenom_harness::curve::default_schedule;
use phenom_harness::{
    emit_report, run_generalization_matrix, run_probing, Builtin, Condition, ExperimentConfig,
    LearningCurve, ReportFormat,
};
use serde::{Deserialize, Serialize};

use crate::config::{existing, ExperimentKind, ProjectConfig, SplitKind};
use crate::error::{Category, CliError, CliResult};
use crate::manifest::Manifest;

pub const DATASET: &str = "dataset.jsonl";
pub const STATS: &str = "stats.json";
pub const SPLITS: &str = "splits.json";
pub const SPLIT_EXAMPLES: &str = "split_examples.jsonl";
pub const RUN_DIR: &str = "run";
pub const CURVE_JSON: &str = "curve.json";

/// What `split` writes and `run` reads.
#[derive(Debug, Serialize, Deserialize)]
pub struct SplitFile {
    pub phenomenon: Phenomenon,
    /// Example file the ids resolve against, relative to the output dir.
    pub pool: String,
    pub splits: Vec<DatasetSplit>,
}

fn templates(config: &ProjectConfig) -> CliResult<Vec<PremiseTemplate>> {
    existing(&config.paths.templates, "templates path")?;
    let templates = io::load_templates(&config.paths.templates)?;
    if templates.is_empty() {
        return Err(CliError::data(format!(
            "no templates under {}",
            config.paths.templates.display()
        )));
    }
    if let Some(p) = config.phenomenon() {
        if let Some(t) = templates.iter().find(|t| t.phenomenon() != p) {
            return Err(CliError::config(format!(
                "template `{}` is {}, config asks for {}",
                t.id(),
                t.phenomenon().short_name(),
                p.short_name()
            )));
        }
    }
    Ok(templates)
}

fn phenomenon(config: &ProjectConfig, flag: Option<Phenomenon>) -> CliResult<Phenomenon> {
    flag.or_else(|| config.phenomenon())
        .ok_or_else(|| CliError::config("no phenomenon given in the config or on the command line"))
}

fn read_lines(path: &Path) -> CliResult<Vec<String>> {
    let reader = BufReader::new(File::open(path)?);
    Ok(reader.lines().collect::<Result<_, _>>()?)
}

fn out_dir(config: &ProjectConfig) -> CliResult<PathBuf> {
    fs::create_dir_all(&config.paths.out)?;
    Ok(config.paths.out.clone())
}

fn need(path: &Path, producer: &str) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::config(format!(
            "`{}` is missing; run `phenom {producer}` first",
            path.display()
        )))
    }
}

fn slug(name: &str) -> String {
    name.chars()
        .map(|c| if c.is_ascii_alphanumeric() || c == '-' || c == '.' { c } else { '_' })
        .collect()
}

pub fn mine(config: &ProjectConfig, flag: Option<Phenomenon>) -> CliResult<PathBuf> {
    let p = phenomenon(config, flag)?;
    let corpus = config
        .paths
        .corpus
        .as_ref()
        .ok_or_else(|| CliError::config("paths.corpus is not set"))?;
    existing(corpus, "corpus")?;
    let lines = read_lines(corpus)?;
    let mut inputs = vec![corpus.clone()];
    let candidates = match p {
        Phenomenon::NumericalReasoning => {
            mine_numeric_candidates(lines.iter().map(|l| normalize_numbers(l)))
        }
        Phenomenon::DativeAlternation => {
            let lexicon = match &config.paths.lexicon {
                Some(path) => {
                    existing(path, "lexicon")?;
                    inputs.push(path.clone());
                    VerbLexicon::parse(&fs::read_to_string(path)?)
                }
                None => VerbLexicon::default(),
            };
            if lexicon.is_empty() {
                return Err(CliError::config("the verb lexicon is empty"));
            }
            mine_dative_candidates(&lines, &lexicon)
        }
    };
    let out = out_dir(config)?;
    let path = out.join("mined.jsonl");
    io::write_jsonl(&path, &candidates)?;
    Manifest::write("mine", config.seed, config.to_json(), &inputs, std::slice::from_ref(&path), &out)
}

pub fn worksheet(config: &ProjectConfig, ingest: Option<&Path>) -> CliResult<PathBuf> {
    let templates = templates(config)?;
    let out = out_dir(config)?;
    let inputs = vec![config.paths.templates.clone()];
    match ingest {
        None => {
            let path = out.join("worksheet.csv");
            emit_annotation_worksheet(&templates, config.worksheet.fills, File::create(&path)?)?;
            Manifest::write("worksheet", config.seed, config.to_json(), &inputs, &[path], &out)
        }
        Some(sheet) => {
            existing(sheet, "worksheet")?;
            let ingested = ingest_worksheet(&templates, File::open(sheet)?)?;
            let dir = out.join("ingested");
            if dir.exists() {
                fs::remove_dir_all(&dir)?;
            }
            fs::create_dir_all(&dir)?;
            for t in &ingested.templates {
                fs::write(
                    dir.join(format!("{}.{}", t.id(), io::TEMPLATE_EXTENSION)),
                    phenom_core::model::serialize_template(t),
                )?;
            }
            let rejected = out.join("rejected.jsonl");
            io::write_jsonl(&rejected, &ingested.rejected)?;
            let mut inputs = inputs;
            inputs.push(sheet.to_path_buf());
            Manifest::write("ingest", config.seed, config.to_json(), &inputs, &[dir, rejected], &out)
        }
    }
}

/// Checks every template file; invalid ids are collected into one error.
pub fn validate(path: &Path) -> CliResult<usize> {
    existing(path, "templates path")?;
    let files = if path.is_dir() {
        io::template_files(path)?
    } else {
        vec![path.to_path_buf()]
    };
    let mut bad = Vec::new();
    for file in &files {
        let text = fs::read_to_string(file)?;
        match parse_template(&text) {
            Err(e) => bad.push(format!("{}: {e}", file.display())),
            Ok(t) => {
                let violations = t.violations();
                if !violations.is_empty() {
                    let messages: Vec<String> = violations.iter().map(ToString::to_string).collect();
                    bad.push(format!("{}: {}", t.id(), messages.join("; ")));
                }
            }
        }
    }
    if bad.is_empty() {
        Ok(files.len())
    } else {
        Err(CliError::data(format!(
            "{} of {} templates invalid: {}",
            bad.len(),
            files.len(),
            bad.join(" | ")
        )))
    }
}

pub fn generate(config: &ProjectConfig) -> CliResult<PathBuf> {
    let templates = templates(config)?;
    let dataset = generate_dataset(&templates, &config.generation)?;
    let out = out_dir(config)?;
    let data = out.join(DATASET);
    io::write_jsonl(&data, &dataset.examples)?;
    let stats = out.join(STATS);
    fs::write(&stats, serde_json::to_string_pretty(&dataset.stats)? + "\n")?;
    Manifest::write(
        "generate",
        config.seed,
        config.to_json(),
        std::slice::from_ref(&config.paths.templates),
        &[data, stats],
        &out,
    )
}

fn load_dataset(out: &Path) -> CliResult<Vec<NliExample>> {
    let path = out.join(DATASET);
    need(&path, "generate")?;
    Ok(io::read_jsonl(&path)?)
}

pub fn split(config: &ProjectConfig, materialize: bool) -> CliResult<PathBuf> {
    let out = out_dir(config)?;
    let dataset = load_dataset(&out)?;
    let phenomenon = dataset
        .first()
        .map(|e| {
            if e.numeric_info.is_some() {
                Phenomenon::NumericalReasoning
            } else {
                Phenomenon::DativeAlternation
            }
        })
        .ok_or_else(|| CliError::data("the dataset is empty"))?;
    let mut inputs = vec![out.join(DATASET)];
    let (pool_name, pool, splits) = match config.split.kind {
        SplitKind::TrainTest => {
            let spec = TrainTestSpec {
                train_fraction: config.split.train_fraction,
                seed: config.seed,
            };
            let split = make_train_test(&dataset, &spec)?;
            (DATASET, ExamplePool::new(dataset)?, vec![split])
        }
        SplitKind::Suite => {
            let templates = templates(config)?;
            inputs.push(config.paths.templates.clone());
            let axis = config.split.axis.expect("checked at load");
            let suite = make_generalization_suite(
                &templates,
                &dataset,
                axis,
                &config.split.suite,
                &config.generation,
            )?;
            io::write_jsonl(&out.join(SPLIT_EXAMPLES), &suite.examples)?;
            (SPLIT_EXAMPLES, suite.pool()?, suite.splits)
        }
    };
    for s in &splits {
        s.check(&pool)?;
    }
    let path = out.join(SPLITS);
    let file = SplitFile {
        phenomenon,
        pool: pool_name.to_string(),
        splits,
    };
    fs::write(&path, serde_json::to_string(&file)? + "\n")?;
    let mut outputs = vec![path];
    if pool_name == SPLIT_EXAMPLES {
        outputs.push(out.join(SPLIT_EXAMPLES));
    }
    if materialize {
        for s in &file.splits {
            let dir = out.join("splits").join(slug(&s.name));
            let (train, test) = s.materialize(&pool)?;
            io::write_jsonl(&dir.join("train.jsonl"), &train)?;
            io::write_jsonl(&dir.join("test.jsonl"), &test)?;
            outputs.push(dir);
        }
    }
    Manifest::write("split", config.seed, config.to_json(), &inputs, &outputs, &out)
}

/// Outcome of `run`; failures inside a curve are reported after the
/// artifacts are written.
pub struct RunOutcome {
    pub manifest: PathBuf,
    pub failures: usize,
}

pub fn run(config: &ProjectConfig) -> CliResult<RunOutcome> {
    let exp = config
        .experiment
        .as_ref()
        .ok_or_else(|| CliError::config("the config has no [experiment] section"))?;
    let out = out_dir(config)?;
    let run_dir = out.join(RUN_DIR);
    fs::create_dir_all(&run_dir)?;
    let scratch = tempfile::tempdir_in(&out)?;
    let mut inputs = Vec::new();
    let mut outputs = Vec::new();
    let mut failures = 0;
    match exp.kind {
        ExperimentKind::Probing => {
            let dataset = load_dataset(&out)?;
            inputs.push(out.join(DATASET));
            let adapter = exp.adapter.instantiate()?;
            let sets = split_by_complexity(&dataset);
            let report = run_probing(adapter.as_ref(), &sets, exp.sample_size, config.seed, scratch.path())?;
            let files = [
                ("probing.json", serde_json::to_string_pretty(&report)? + "\n"),
                ("probing.csv", report.to_csv()),
                ("probing.txt", report.to_text()),
            ];
            for (name, body) in files {
                let path = run_dir.join(name);
                fs::write(&path, body)?;
                outputs.push(path);
            }
        }
        ExperimentKind::Curve => {
            let split_path = out.join(SPLITS);
            need(&split_path, "split")?;
            let file: SplitFile = serde_json::from_str(&fs::read_to_string(&split_path)?)?;
            let pool_path = out.join(&file.pool);
            need(&pool_path, "split")?;
            inputs.push(split_path);
            inputs.push(pool_path.clone());
            let pool = ExamplePool::new(io::read_jsonl(&pool_path)?)?;
            let chosen: Vec<&DatasetSplit> = if exp.conditions.is_empty() {
                file.splits.iter().collect()
            } else {
                exp.conditions
                    .iter()
                    .map(|name| {
                        file.splits
                            .iter()
                            .find(|s| &s.name == name)
                            .ok_or_else(|| CliError::config(format!("no split named `{name}`")))
                    })
                    .collect::<CliResult<_>>()?
            };
            let conditions = chosen
                .iter()
                .map(|s| Condition::from_split(s, &pool))
                .collect::<Result<Vec<_>, _>>()?;
            let smallest = conditions.iter().map(|c| c.train.len()).min().unwrap_or(0);
            let train_sizes = match &exp.train_sizes {
                Some(sizes) => sizes.clone(),
                None => default_schedule(file.phenomenon)
                    .into_iter()
                    .filter(|&k| k <= smallest)
                    .collect(),
            };
            let experiment = ExperimentConfig {
                adapter: exp.adapter.clone(),
                train_sizes,
                repeats: exp.repeats,
                regression_set: exp.regression_set.clone(),
                seed: config.seed,
            };
            if let Some(r) = &exp.regression_set {
                existing(r, "regression set")?;
                inputs.push(r.clone());
            }
            let suite: Vec<(Condition, ExperimentConfig)> =
                conditions.into_iter().map(|c| (c, experiment.clone())).collect();
            let curve = run_generalization_matrix(&suite, scratch.path())?;
            failures = curve.failures.len();
            let json = run_dir.join(CURVE_JSON);
            fs::write(&json, serde_json::to_string(&curve)? + "\n")?;
            outputs.push(json);
            if !curve.is_empty() {
                outputs.extend(emit_all(&curve, &config.report.formats, &run_dir)?);
            }
        }
    }
    drop(scratch);
    let manifest = Manifest::write("run", config.seed, config.to_json(), &inputs, &outputs, &out)?;
    Ok(RunOutcome { manifest, failures })
}

fn emit_all(curve: &LearningCurve, formats: &[ReportFormat], dir: &Path) -> CliResult<Vec<PathBuf>> {
    formats
        .iter()
        .map(|&f| emit_report(curve, f, dir).map_err(CliError::from))
        .collect()
}

pub fn report(
    config: &ProjectConfig,
    curve_path: Option<&Path>,
    formats: &[ReportFormat],
) -> CliResult<PathBuf> {
    let out = out_dir(config)?;
    let path = curve_path.map_or_else(|| out.join(RUN_DIR).join(CURVE_JSON), Path::to_path_buf);
    need(&path, "run")?;
    let curve: LearningCurve = serde_json::from_str(&fs::read_to_string(&path)?)?;
    let formats = if formats.is_empty() {
        &config.report.formats[..]
    } else {
        formats
    };
    let dir = out.join("report");
    fs::create_dir_all(&dir)?;
    let outputs = emit_all(&curve, formats, &dir)?;
    Manifest::write("report", config.seed, config.to_json(), &[path], &outputs, &out)
}

#[derive(Debug, Clone)]
pub enum AdapterVerb {
    Train { train: PathBuf, model_dir: PathBuf, seed: u64 },
    Predict { model_dir: PathBuf, test: PathBuf, output: PathBuf },
}

/// Built-in baselines behind the file protocol, for use as subprocess
/// adapters.
pub fn adapter(kind: Builtin, verb: &AdapterVerb) -> CliResult<()> {
    let result = match verb {
        AdapterVerb::Train { train, model_dir, seed } => train_builtin(kind, train, model_dir, *seed),
        AdapterVerb::Predict { model_dir, test, output } => predict_builtin(kind, model_dir, test, output),
    };
    result.map_err(|e| CliError::new(Category::Adapter, e.to_string()))
}
