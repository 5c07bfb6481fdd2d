use std::fs;
use std::path::Path;

use anyhow::{bail, Context};
use memlen::ModelSpec;
use serde::{Deserialize, Serialize};

pub const SCHEMA_VERSION: u32 = 1;
pub const CSV_SCHEMA: &str = "n,in_set,estimate,oracle,match,theta,kappa,ms";
pub const FILE: &str = "manifest.json";

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Manifest {
    Simulate(SimulateManifest),
    Estimate(EstimateManifest),
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct SimulateManifest {
    pub schema_version: u32,
    pub model: ModelSpec,
    pub n: usize,
    pub seed: u64,
    pub rng: String,
    pub replicas: u64,
    pub format: crate::Format,
    pub files: Vec<String>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EstimateManifest {
    pub schema_version: u32,
    pub csv_schema: String,
    pub scheme: crate::SchemeArg,
    pub gamma: f64,
    pub beta: f64,
    pub epsilon: f64,
    pub tolerance: f64,
    pub checkpoints: Vec<usize>,
    /// Absent when samples were read from files.
    pub model: Option<ModelSpec>,
    pub inputs: Vec<String>,
    pub seed: Option<u64>,
    pub rng: Option<String>,
    pub timing: bool,
    pub files: Vec<String>,
}

pub fn write(dir: &Path, m: &Manifest) -> anyhow::Result<()> {
    let mut text = serde_json::to_string_pretty(m)?;
    text.push('\n');
    fs::write(dir.join(FILE), text).with_context(|| format!("writing manifest in {}", dir.display()))
}

pub fn read(dir: &Path) -> anyhow::Result<Manifest> {
    let path = dir.join(FILE);
    if !path.is_file() {
        bail!("{}: missing {FILE}", dir.display());
    }
    let text = fs::read_to_string(&path)?;
    let m: Manifest = serde_json::from_str(&text).with_context(|| format!("parsing {}", path.display()))?;
    let v = match &m {
        Manifest::Simulate(s) => s.schema_version,
        Manifest::Estimate(e) => e.schema_version,
    };
    if v != SCHEMA_VERSION {
        bail!("{}: schema version {v}, expected {SCHEMA_VERSION}", path.display());
    }
    Ok(m)
}

/// Creates `dir`, refusing to overwrite an existing run.
pub fn prepare_dir(dir: &Path) -> anyhow::Result<()> {
    if dir.join(FILE).exists() {
        bail!("{} already holds a completed run", dir.display());
    }
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))
}
