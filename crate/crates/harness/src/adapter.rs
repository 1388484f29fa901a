//! The adapter abstraction and its subprocess implementation.

use std::fs::{self, File};
use std::io::{Read, Seek, SeekFrom};
use std::path::{Path, PathBuf};
use std::process::{Command, Stdio};
use std::time::Duration;

use serde::{Deserialize, Serialize};
use wait_timeout::ChildExt;

use crate::builtin::{Builtin, BuiltinAdapter};
use crate::error::{Error, Result};

/// A model behind the train/predict protocol.
pub trait Adapter {
    fn name(&self) -> &str;

    /// Fits a model on `train` and leaves it in `model_dir`.
    fn train(&self, train: &Path, model_dir: &Path, seed: u64) -> Result<()>;

    /// Writes one prediction per record of `test` to `output`.
    fn predict(&self, model_dir: &Path, test: &Path, output: &Path) -> Result<()>;
}

pub const TRAIN_PLACEHOLDERS: [&str; 3] = ["{train}", "{model_dir}", "{seed}"];
pub const PREDICT_PLACEHOLDERS: [&str; 3] = ["{model_dir}", "{test}", "{output}"];

fn default_timeout() -> u64 {
    3600
}

/// How to reach an adapter: a built-in model run in process, or argv
/// templates for the two verbs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AdapterSpec {
    pub name: String,
    #[serde(default)]
    pub builtin: Option<Builtin>,
    #[serde(default)]
    pub train: Vec<String>,
    #[serde(default)]
    pub predict: Vec<String>,
    #[serde(default)]
    pub workdir: Option<PathBuf>,
    #[serde(default = "default_timeout")]
    pub timeout_secs: u64,
    /// Environment variables passed to the adapter process besides PATH.
    #[serde(default)]
    pub env: Vec<String>,
}

impl AdapterSpec {
    pub fn builtin(kind: Builtin) -> Self {
        Self {
            name: kind.as_str().to_string(),
            builtin: Some(kind),
            train: Vec::new(),
            predict: Vec::new(),
            workdir: None,
            timeout_secs: default_timeout(),
            env: Vec::new(),
        }
    }

    pub fn subprocess(name: &str, train: Vec<String>, predict: Vec<String>) -> Self {
        Self {
            name: name.to_string(),
            builtin: None,
            train,
            predict,
            workdir: None,
            timeout_secs: default_timeout(),
            env: Vec::new(),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::Config(format!("adapter `{}`: {m}", self.name)));
        if self.name.trim().is_empty() {
            return Err(Error::Config("adapter name is empty".into()));
        }
        if self.timeout_secs == 0 {
            return bad("timeout must be positive".into());
        }
        match (&self.builtin, self.train.is_empty() && self.predict.is_empty()) {
            (Some(_), true) => return Ok(()),
            (Some(_), false) => return bad("give either `builtin` or command templates, not both".into()),
            (None, _) => {}
        }
        for (verb, argv, required) in [
            ("train", &self.train, TRAIN_PLACEHOLDERS),
            ("predict", &self.predict, PREDICT_PLACEHOLDERS),
        ] {
            if argv.is_empty() {
                return bad(format!("no `{verb}` command"));
            }
            for p in required {
                if !argv.iter().any(|a| a.contains(p)) {
                    return bad(format!("`{verb}` command lacks {p}"));
                }
            }
        }
        Ok(())
    }

    pub fn instantiate(&self) -> Result<Box<dyn Adapter>> {
        self.validate()?;
        Ok(match self.builtin {
            Some(kind) => Box::new(BuiltinAdapter::named(kind, &self.name)),
            None => Box::new(SubprocessAdapter { spec: self.clone() }),
        })
    }
}

/// Runs the verbs as child processes built from the spec's templates.
#[derive(Debug, Clone)]
pub struct SubprocessAdapter {
    spec: AdapterSpec,
}

impl SubprocessAdapter {
    pub fn new(spec: AdapterSpec) -> Result<Self> {
        spec.validate()?;
        if spec.builtin.is_some() {
            return Err(Error::Config(format!("adapter `{}` has no commands", spec.name)));
        }
        Ok(Self { spec })
    }

    fn run(&self, verb: &'static str, template: &[String], subs: &[(&str, String)]) -> Result<()> {
        let argv: Vec<String> = template
            .iter()
            .map(|a| subs.iter().fold(a.clone(), |acc, (k, v)| acc.replace(k, v)))
            .collect();
        let fail = |detail: String| Error::protocol(&self.spec.name, verb, detail);
        let mut log = tempfile::tempfile()?;
        let mut cmd = Command::new(&argv[0]);
        cmd.args(&argv[1..])
            .env_clear()
            .stdin(Stdio::null())
            .stdout(Stdio::from(log.try_clone()?))
            .stderr(Stdio::from(log.try_clone()?));
        for var in std::iter::once("PATH").chain(self.spec.env.iter().map(String::as_str)) {
            if let Some(v) = std::env::var_os(var) {
                cmd.env(var, v);
            }
        }
        if let Some(dir) = &self.spec.workdir {
            cmd.current_dir(dir);
        }
        let mut child = cmd
            .spawn()
            .map_err(|e| fail(format!("cannot start `{}`: {e}", argv[0])))?;
        let timeout = Duration::from_secs(self.spec.timeout_secs);
        let status = match child.wait_timeout(timeout)? {
            Some(status) => status,
            None => {
                let _ = child.kill();
                let _ = child.wait();
                return Err(fail(format!("timed out after {}s", self.spec.timeout_secs)));
            }
        };
        if status.success() {
            return Ok(());
        }
        Err(fail(format!("{status}; output: {}", tail(&mut log)?)))
    }
}

/// Last bytes of the captured output, on one line.
fn tail(log: &mut File) -> Result<String> {
    const KEEP: u64 = 400;
    let len = log.seek(SeekFrom::End(0))?;
    log.seek(SeekFrom::Start(len.saturating_sub(KEEP)))?;
    let mut buf = Vec::new();
    log.read_to_end(&mut buf)?;
    let text = String::from_utf8_lossy(&buf);
    Ok(text.split_whitespace().collect::<Vec<_>>().join(" "))
}

impl Adapter for SubprocessAdapter {
    fn name(&self) -> &str {
        &self.spec.name
    }

    fn train(&self, train: &Path, model_dir: &Path, seed: u64) -> Result<()> {
        fs::create_dir_all(model_dir)?;
        self.run(
            "train",
            &self.spec.train,
            &[
                ("{train}", train.display().to_string()),
                ("{model_dir}", model_dir.display().to_string()),
                ("{seed}", seed.to_string()),
            ],
        )
    }

    fn predict(&self, model_dir: &Path, test: &Path, output: &Path) -> Result<()> {
        self.run(
            "predict",
            &self.spec.predict,
            &[
                ("{model_dir}", model_dir.display().to_string()),
                ("{test}", test.display().to_string()),
                ("{output}", output.display().to_string()),
            ],
        )
    }
}
