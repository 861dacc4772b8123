//! Bundled scenario files and their loader.
//!
//! Scenarios are compiled into the library. Setting `OCTIC_DATA` to a
//! directory with the same layout (`scenarios/<name>.json` plus any
//! referenced cycle-model files) replaces the bundled set.

use std::path::PathBuf;

use serde::Deserialize;
use serde_json::Value;

use crate::classify::ResidualSingularities;
use crate::exact::Rational;
use crate::specseq::{Annotation, CycleModel};

macro_rules! bundled {
    ($($name:literal),* $(,)?) => {
        &[$(($name, include_str!(concat!("../data/scenarios/", $name, ".json")))),*]
    };
}

const SCENARIOS: &[(&str, &str)] = bundled![
    "new-l3",
    "new-p40",
    "p51-to-p52",
    "two-p41-to-p52",
    "two-p41-to-p51",
    "p40-to-p52",
    "new-p41",
    "p40-to-p41",
    "p40-to-p51",
    "p50-to-p52",
    "p50-to-p51",
    "arr2-w1",
    "arr34-w1",
    "arr273-w1",
];

const DATA_FILES: &[(&str, &str)] =
    &[("arr273-cycle-model.json", include_str!("../data/arr273-cycle-model.json"))];

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("unknown scenario {0}")]
    Unknown(String),
    #[error("cannot read {path}: {msg}")]
    Io { path: String, msg: String },
    #[error("malformed scenario {name}: {msg}")]
    Malformed { name: String, msg: String },
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub title: String,
    #[serde(default)]
    pub equation: Option<String>,
    /// Equation as printed, when it differs from the one used.
    #[serde(default)]
    pub sample_equation: Option<String>,
    #[serde(default)]
    pub w0: Option<Rational>,
    #[serde(default)]
    pub blowup_order: Option<Vec<String>>,
    #[serde(default)]
    pub residual: Option<ResidualSingularities>,
    /// Take the residual from the trace of another scenario.
    #[serde(default)]
    pub residual_from: Option<String>,
    #[serde(default)]
    pub y_betti: Option<[usize; 7]>,
    #[serde(default)]
    pub cycle_model: Option<String>,
    #[serde(default)]
    pub annotations: Vec<Annotation>,
    #[serde(default)]
    pub expected: Option<Value>,
}

fn data_dir() -> Option<PathBuf> {
    std::env::var_os("OCTIC_DATA").map(PathBuf::from)
}

fn read_data(rel: &str, bundled: &[(&str, &'static str)], key: &str) -> Result<Option<String>, ScenarioError> {
    match data_dir() {
        Some(dir) => {
            let path = dir.join(rel);
            if !path.exists() {
                return Ok(None);
            }
            std::fs::read_to_string(&path)
                .map(Some)
                .map_err(|e| ScenarioError::Io { path: path.display().to_string(), msg: e.to_string() })
        }
        None => Ok(bundled.iter().find(|(k, _)| *k == key).map(|(_, v)| v.to_string())),
    }
}

/// Names of all available scenarios, in catalog order for the bundled set.
pub fn names() -> Vec<String> {
    match data_dir() {
        Some(dir) => {
            let mut v: Vec<String> = std::fs::read_dir(dir.join("scenarios"))
                .map(|rd| {
                    rd.filter_map(|e| e.ok())
                        .filter_map(|e| e.file_name().to_str()?.strip_suffix(".json").map(String::from))
                        .collect()
                })
                .unwrap_or_default();
            v.sort();
            v
        }
        None => SCENARIOS.iter().map(|(n, _)| n.to_string()).collect(),
    }
}

pub fn load(name: &str) -> Result<Scenario, ScenarioError> {
    let text = read_data(&format!("scenarios/{name}.json"), SCENARIOS, name)?
        .ok_or_else(|| ScenarioError::Unknown(name.to_string()))?;
    let s: Scenario = serde_json::from_str(&text)
        .map_err(|e| ScenarioError::Malformed { name: name.to_string(), msg: e.to_string() })?;
    if s.name != name {
        return Err(ScenarioError::Malformed { name: name.to_string(), msg: format!("file names itself {}", s.name) });
    }
    if let Some(cm) = &s.cycle_model {
        if read_data(cm, DATA_FILES, cm)?.is_none() {
            return Err(ScenarioError::Malformed { name: name.to_string(), msg: format!("missing cycle model {cm}") });
        }
    }
    Ok(s)
}

impl Scenario {
    pub fn load_cycle_model(&self) -> Result<Option<CycleModel>, ScenarioError> {
        let Some(path) = &self.cycle_model else { return Ok(None) };
        let text = read_data(path, DATA_FILES, path)?
            .ok_or_else(|| ScenarioError::Io { path: path.clone(), msg: "not found".into() })?;
        serde_json::from_str(&text)
            .map(Some)
            .map_err(|e| ScenarioError::Malformed { name: self.name.clone(), msg: e.to_string() })
    }

    pub fn w0(&self) -> Rational {
        self.w0.clone().unwrap_or_else(Rational::zero)
    }
}
