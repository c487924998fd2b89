//! Run configuration: which sequences, which models, which knobs.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::candidate::DEFAULT_STEP_BUDGET;
use crate::corpus::{ComplexityClass, ENCODING_ASCII_CSV, ENCODING_FIXED_WIDTH};
use crate::error::HarnessError;

/// The temperature sweep used for every reported run.
pub const DEFAULT_TEMPERATURES: [f64; 5] = [1.0, 0.7, 0.5, 0.2, 0.001];

/// How the answer complexity M(R) is measured for the delta ratios.
///
/// `bdm-text` scores the answer's source text: its bytes are rendered
/// fixed-width-binary (width = bit length of the largest byte) and block
/// complexity is taken over that string. `bdm-output` scores the executed
/// output re-encoded exactly like the target, so a correct answer always
/// has M(R) = M(D) and ratio 1; this is the reference-agent convention in
/// which a perfectly compressed correct answer scores delta = 1.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Metric {
    BdmText,
    BdmOutput,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CorpusSelection {
    /// Class names as serialized by [`ComplexityClass`]: low, medium,
    /// high, climber, random-binary.
    pub classes: Vec<String>,
    /// Cap per class, in bundled order. Absent = all.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub take_per_class: Option<usize>,
    /// Extra generated rows per numeric class (0 = bundled corpus only).
    #[serde(default)]
    pub generated_per_class: usize,
    #[serde(default)]
    pub seed: u64,
}

impl Default for CorpusSelection {
    fn default() -> Self {
        CorpusSelection {
            classes: vec![
                "low".into(),
                "medium".into(),
                "high".into(),
                "climber".into(),
                "random-binary".into(),
            ],
            take_per_class: None,
            generated_per_class: 0,
            seed: 0,
        }
    }
}

impl CorpusSelection {
    pub fn parsed_classes(&self) -> Result<Vec<ComplexityClass>, HarnessError> {
        self.classes
            .iter()
            .map(|name| {
                serde_json::from_value(serde_json::Value::String(name.clone()))
                    .map_err(|_| HarnessError::Config(format!("unknown corpus class {name:?}")))
            })
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub backoff_ms: u64,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        RetryPolicy { max_attempts: 3, backoff_ms: 0 }
    }
}

/// One model endpoint or replay fixture.
///
/// Live transports name the environment variable holding the credential;
/// the credential value itself never appears in configs or any emitted
/// artifact.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "transport")]
pub enum Transport {
    Replay {
        path: PathBuf,
    },
    Http {
        endpoint: String,
        credential_env: String,
        #[serde(default)]
        retry: RetryPolicy,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelSpec {
    pub id: String,
    #[serde(flatten)]
    pub transport: Transport,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Budgets {
    /// Interpreter step budget per evaluated term.
    pub execution_steps: u64,
    /// Per-call ceiling handed to live dispatchers; replay ignores it.
    pub call_timeout_ms: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets { execution_steps: DEFAULT_STEP_BUDGET, call_timeout_ms: 30_000 }
    }
}

fn default_temperatures() -> Vec<f64> {
    DEFAULT_TEMPERATURES.to_vec()
}

fn default_encoding() -> String {
    ENCODING_ASCII_CSV.to_string()
}

fn default_metric() -> Metric {
    Metric::BdmText
}

fn default_template() -> String {
    "free-form-formula".to_string()
}

fn default_alpha() -> f64 {
    1.0
}

fn default_epsilon() -> f64 {
    0.001
}

/// Everything a benchmark run needs, loadable from a TOML file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default)]
    pub corpus: CorpusSelection,
    /// Encoding shown to models in prompts: ascii-csv or
    /// fixed-width-binary. Delta ratios always measure complexity over
    /// fixed-width-binary regardless.
    #[serde(default = "default_encoding")]
    pub encoding: String,
    #[serde(default = "default_metric")]
    pub metric: Metric,
    #[serde(default = "default_temperatures")]
    pub temperatures: Vec<f64>,
    #[serde(default = "default_template")]
    pub prompt_template: String,
    /// Target language for the code template; other templates ignore it.
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub language: Option<String>,
    pub models: Vec<ModelSpec>,
    #[serde(default)]
    pub budgets: Budgets,
    pub output_dir: PathBuf,
    /// Positive-shift parameters for the displayed score column.
    #[serde(default = "default_alpha")]
    pub alpha: f64,
    #[serde(default = "default_epsilon")]
    pub epsilon: f64,
}

impl RunConfig {
    pub fn from_toml(text: &str) -> Result<Self, HarnessError> {
        toml::from_str(text).map_err(|e| HarnessError::Config(e.to_string()))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string_pretty(self).expect("config serialization cannot fail")
    }

    /// Load from a file, resolving relative fixture and output paths
    /// against the file's directory.
    pub fn load(path: &Path) -> Result<Self, HarnessError> {
        let text = std::fs::read_to_string(path)?;
        let mut cfg = Self::from_toml(&text)?;
        if let Some(dir) = path.parent() {
            cfg.resolve_relative_to(dir);
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn resolve_relative_to(&mut self, dir: &Path) {
        for model in &mut self.models {
            if let Transport::Replay { path } = &mut model.transport {
                if path.is_relative() {
                    *path = dir.join(&path);
                }
            }
        }
        if self.output_dir.is_relative() {
            self.output_dir = dir.join(&self.output_dir);
        }
    }

    pub fn validate(&self) -> Result<(), HarnessError> {
        self.corpus.parsed_classes()?;
        if self.corpus.classes.is_empty() {
            return Err(HarnessError::Config("no corpus classes selected".into()));
        }
        if ![ENCODING_ASCII_CSV, ENCODING_FIXED_WIDTH].contains(&self.encoding.as_str()) {
            return Err(HarnessError::Config(format!("unknown encoding {:?}", self.encoding)));
        }
        if self.temperatures.is_empty() {
            return Err(HarnessError::Config("no temperatures given".into()));
        }
        for &t in &self.temperatures {
            if !(t.is_finite() && t > 0.0 && t <= 2.0) {
                return Err(HarnessError::Config(format!("temperature {t} out of (0, 2]")));
            }
        }
        let mut temps: Vec<u64> = self.temperatures.iter().map(|t| t.to_bits()).collect();
        temps.sort_unstable();
        if temps.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("duplicate temperature".into()));
        }
        if self.models.is_empty() {
            return Err(HarnessError::Config("no models given".into()));
        }
        let mut ids: Vec<&str> = self.models.iter().map(|m| m.id.as_str()).collect();
        ids.sort_unstable();
        if ids.windows(2).any(|w| w[0] == w[1]) {
            return Err(HarnessError::Config("duplicate model id".into()));
        }
        for model in &self.models {
            match &model.transport {
                Transport::Replay { path } => {
                    if !path.exists() {
                        return Err(HarnessError::Config(format!(
                            "replay fixture {} for model {:?} does not exist",
                            path.display(),
                            model.id
                        )));
                    }
                }
                Transport::Http { endpoint, credential_env, retry } => {
                    if endpoint.is_empty() || credential_env.is_empty() {
                        return Err(HarnessError::Config(format!(
                            "model {:?} needs both endpoint and credential_env",
                            model.id
                        )));
                    }
                    if retry.max_attempts == 0 {
                        return Err(HarnessError::Config(format!(
                            "model {:?} allows zero attempts",
                            model.id
                        )));
                    }
                }
            }
        }
        if !(self.alpha > 0.0 && self.epsilon > 0.0) {
            return Err(HarnessError::Config("alpha and epsilon must be positive".into()));
        }
        if self.budgets.execution_steps == 0 {
            return Err(HarnessError::Config("execution step budget is zero".into()));
        }
        Ok(())
    }
}
