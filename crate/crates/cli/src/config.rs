//! The project config file. Relative paths are resolved against the
//! directory that holds the config.

use std::fs;
use std::path::{Path, PathBuf};

use phenom_core::generator::GenerationConfig;
use phenom_core::splitter::{Axis, SuiteSpec};
use phenom_core::Phenomenon;
use phenom_harness::{AdapterSpec, ReportFormat};
use serde::{Deserialize, Serialize};

use crate::error::{CliError, CliResult};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProjectConfig {
    #[serde(default)]
    pub seed: u64,
    /// `datives` or `numbers`; checked against the loaded templates.
    #[serde(default)]
    pub phenomenon: Option<String>,
    pub paths: Paths,
    #[serde(default)]
    pub generation: GenerationConfig,
    #[serde(default)]
    pub split: SplitConfig,
    #[serde(default)]
    pub experiment: Option<ExperimentSection>,
    #[serde(default)]
    pub report: ReportConfig,
    #[serde(default)]
    pub worksheet: WorksheetConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Paths {
    pub templates: PathBuf,
    pub out: PathBuf,
    #[serde(default)]
    pub corpus: Option<PathBuf>,
    /// Dative verb lexicon, one lemma per line with optional inflections.
    #[serde(default)]
    pub lexicon: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "snake_case")]
pub enum SplitKind {
    #[default]
    TrainTest,
    Suite,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct SplitConfig {
    pub kind: SplitKind,
    pub train_fraction: f64,
    pub axis: Option<Axis>,
    pub suite: SuiteSpec,
}

impl Default for SplitConfig {
    fn default() -> Self {
        Self {
            kind: SplitKind::TrainTest,
            train_fraction: 0.77,
            axis: None,
            suite: SuiteSpec::default(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ExperimentKind {
    Probing,
    Curve,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub kind: ExperimentKind,
    pub adapter: AdapterSpec,
    #[serde(default = "default_sample_size")]
    pub sample_size: usize,
    /// Defaults to the phenomenon's schedule, cut at the smallest train side.
    #[serde(default)]
    pub train_sizes: Option<Vec<usize>>,
    #[serde(default = "default_repeats")]
    pub repeats: usize,
    #[serde(default)]
    pub regression_set: Option<PathBuf>,
    /// Split names to run; all splits when empty.
    #[serde(default)]
    pub conditions: Vec<String>,
}

fn default_sample_size() -> usize {
    phenom_harness::probing::DEFAULT_SAMPLE_SIZE
}

fn default_repeats() -> usize {
    5
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct ReportConfig {
    pub formats: Vec<ReportFormat>,
}

impl Default for ReportConfig {
    fn default() -> Self {
        Self {
            formats: ReportFormat::ALL.to_vec(),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct WorksheetConfig {
    pub fills: usize,
}

impl Default for WorksheetConfig {
    fn default() -> Self {
        Self { fills: 6 }
    }
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Default, Clone)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub out: Option<PathBuf>,
    pub templates: Option<PathBuf>,
}

impl ProjectConfig {
    pub fn load(path: &Path, overrides: &Overrides) -> CliResult<Self> {
        let text = fs::read_to_string(path)
            .map_err(|e| CliError::config(format!("cannot read config {}: {e}", path.display())))?;
        let mut config: ProjectConfig = toml::from_str(&text)
            .map_err(|e| CliError::config(format!("{}: {}", path.display(), e.message())))?;
        let base = path.parent().unwrap_or(Path::new(""));
        config.resolve(base);
        config.apply(overrides);
        config.check()?;
        Ok(config)
    }

    fn resolve(&mut self, base: &Path) {
        let join = |p: &mut PathBuf| {
            if p.is_relative() {
                *p = base.join(&*p);
            }
        };
        join(&mut self.paths.templates);
        join(&mut self.paths.out);
        self.paths.corpus.as_mut().map(join);
        self.paths.lexicon.as_mut().map(join);
        if let Some(exp) = &mut self.experiment {
            exp.regression_set.as_mut().map(join);
            exp.adapter.workdir.as_mut().map(join);
        }
    }

    /// Flags win; the seed reaches every seeded stage.
    fn apply(&mut self, o: &Overrides) {
        if let Some(seed) = o.seed {
            self.seed = seed;
        }
        if let Some(out) = &o.out {
            self.paths.out = out.clone();
        }
        if let Some(t) = &o.templates {
            self.paths.templates = t.clone();
        }
        self.generation.seed = self.seed;
        self.split.suite.seed = self.seed;
    }

    fn check(&self) -> CliResult<()> {
        if let Some(p) = &self.phenomenon {
            p.parse::<Phenomenon>()
                .map_err(|e| CliError::config(format!("phenomenon: {e}")))?;
        }
        if !(self.split.train_fraction > 0.0 && self.split.train_fraction < 1.0) {
            return Err(CliError::config("split.train_fraction must lie in (0, 1)"));
        }
        if self.split.kind == SplitKind::Suite && self.split.axis.is_none() {
            return Err(CliError::config("split.kind = \"suite\" needs split.axis"));
        }
        if let Some(exp) = &self.experiment {
            exp.adapter.validate()?;
        }
        Ok(())
    }

    pub fn phenomenon(&self) -> Option<Phenomenon> {
        self.phenomenon.as_deref().and_then(|p| p.parse().ok())
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).unwrap_or(serde_json::Value::Null)
    }
}

pub fn existing(path: &Path, what: &str) -> CliResult<()> {
    if path.exists() {
        Ok(())
    } else {
        Err(CliError::config(format!("{what} `{}` does not exist", path.display())))
    }
}
