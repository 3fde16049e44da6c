use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};

/// Environment variable that overrides `output_dir`.
pub const OUTPUT_DIR_ENV: &str = "HEAVYTAIL_OUTPUT_DIR";

/// A run is fully determined by this value (the master seed included).
///
/// Missing optional fields take experiment-specific defaults; see
/// [`super::default_config`].
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub experiment: String,
    #[serde(default)]
    pub seed: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub replicas: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<Vec<usize>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tau: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lambda: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub truncation: Option<usize>,
    /// Worker threads; all available cores when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub output_dir: Option<PathBuf>,
    /// Experiment-specific settings.
    #[serde(default, skip_serializing_if = "BTreeMap::is_empty")]
    pub params: BTreeMap<String, Value>,
}

impl ExperimentConfig {
    pub fn new(experiment: &str) -> Self {
        Self {
            experiment: experiment.to_string(),
            seed: 0,
            replicas: None,
            n: None,
            tau: None,
            lambda: None,
            delta: None,
            truncation: None,
            workers: None,
            output_dir: None,
            params: BTreeMap::new(),
        }
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn load(path: &Path) -> Result<Self> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn with_replicas(mut self, r: usize) -> Self {
        self.replicas = Some(r);
        self
    }

    pub fn with_n(mut self, n: Vec<usize>) -> Self {
        self.n = Some(n);
        self
    }

    pub fn with_param(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.params.insert(key.to_string(), value.into());
        self
    }

    /// Output directory after the environment override.
    pub fn resolved_output_dir(&self) -> PathBuf {
        if let Some(dir) = std::env::var_os(OUTPUT_DIR_ENV) {
            return PathBuf::from(dir);
        }
        self.output_dir.clone().unwrap_or_else(|| PathBuf::from("out").join(&self.experiment))
    }

    pub(crate) fn f64_param(&self, key: &str, default: f64) -> Result<f64> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.as_f64().ok_or_else(|| bad(key, v)),
        }
    }

    pub(crate) fn usize_param(&self, key: &str, default: usize) -> Result<usize> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.as_u64().map(|x| x as usize).ok_or_else(|| bad(key, v)),
        }
    }

    pub(crate) fn bool_param(&self, key: &str, default: bool) -> Result<bool> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.as_bool().ok_or_else(|| bad(key, v)),
        }
    }

    pub(crate) fn str_param<'a>(&'a self, key: &str, default: &'a str) -> Result<&'a str> {
        match self.params.get(key) {
            None => Ok(default),
            Some(v) => v.as_str().ok_or_else(|| bad(key, v)),
        }
    }

    pub(crate) fn f64_list_param(&self, key: &str, default: &[f64]) -> Result<Vec<f64>> {
        match self.params.get(key) {
            None => Ok(default.to_vec()),
            Some(Value::Array(a)) => a.iter().map(|v| v.as_f64().ok_or_else(|| bad(key, v))).collect(),
            Some(v) => Err(bad(key, v)),
        }
    }

    pub(crate) fn usize_list_param(&self, key: &str, default: &[usize]) -> Result<Vec<usize>> {
        Ok(self
            .f64_list_param(key, &default.iter().map(|&x| x as f64).collect::<Vec<_>>())?
            .into_iter()
            .map(|x| x as usize)
            .collect())
    }
}

fn bad(key: &str, v: &Value) -> Error {
    Error::Parse(format!("parameter {key:?} has unexpected value {v}"))
}
