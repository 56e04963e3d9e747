//! Run configuration: one TOML file, overridden by flags.

use std::path::{Path, PathBuf};

use molprompt::artifact::sha256_hex;
use molprompt::augmentation::{AugmentationConfig, Selection};
use molprompt::dataset::{BuildConfig, StyleWeights, SubsetPolicy};
use molprompt::evaluation::UniquenessDenominator;
use molprompt::teachers::ClassifierConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

pub const DATA_DIR_ENV: &str = "MOLPROMPT_DATA_DIR";
pub const DEFAULT_DATA_DIR: &str = "molprompt-data";

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Paths {
    pub library: Option<PathBuf>,
    pub lexicon: Option<PathBuf>,
    /// Trained classifier files.
    pub models: Vec<PathBuf>,
    /// `SMILES<TAB>target<TAB>score` files.
    pub scores: Vec<PathBuf>,
    pub fragments: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FingerprintParams {
    pub radius: u32,
    pub nbits: u32,
}

impl Default for FingerprintParams {
    fn default() -> Self {
        let c = ClassifierConfig::default();
        FingerprintParams {
            radius: c.radius,
            nbits: c.nbits,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PolicyParams {
    pub min_facts: usize,
    pub max_facts: usize,
    pub samples_per_molecule: usize,
}

impl Default for PolicyParams {
    fn default() -> Self {
        let p = SubsetPolicy::default();
        PolicyParams {
            min_facts: p.min_facts,
            max_facts: p.max_facts,
            samples_per_molecule: p.samples_per_molecule,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StyleParams {
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Default for StyleParams {
    fn default() -> Self {
        let w = StyleWeights::default();
        StyleParams {
            t0: w.t0,
            t1: w.t1,
            t2: w.t2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NgramParams {
    pub order: usize,
}

impl Default for NgramParams {
    fn default() -> Self {
        NgramParams { order: 4 }
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    #[default]
    Ngram,
    Retrieval,
    Bridge,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GenerateParams {
    pub n: usize,
    pub method: Method,
    pub task: Option<String>,
    pub prompt: Option<String>,
    pub spec: Option<String>,
}

impl Default for GenerateParams {
    fn default() -> Self {
        GenerateParams {
            n: 5000,
            method: Method::Ngram,
            task: None,
            prompt: None,
            spec: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EvaluateParams {
    pub spec: Option<String>,
    pub uniqueness: UniquenessDenominator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ClassifierParams {
    /// Target or ADMET flag the trained model scores.
    pub name: Option<String>,
    pub l2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub restarts: usize,
    pub val_fraction: f64,
}

impl Default for ClassifierParams {
    fn default() -> Self {
        let c = ClassifierConfig::default();
        ClassifierParams {
            name: None,
            l2: c.l2,
            learning_rate: c.learning_rate,
            epochs: c.epochs,
            restarts: c.restarts,
            val_fraction: c.val_fraction,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AugmentParams {
    pub target: String,
    pub pseudo_counts: Vec<usize>,
    pub trials: usize,
    pub split: (f64, f64, f64),
    pub l2_grid: Vec<f64>,
    pub selection: Selection,
}

impl Default for AugmentParams {
    fn default() -> Self {
        let a = AugmentationConfig::default();
        AugmentParams {
            target: a.target,
            pseudo_counts: a.pseudo_counts,
            trials: a.trials,
            split: a.split,
            l2_grid: a.l2_grid,
            selection: a.selection,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BridgeParams {
    /// Program and arguments; empty waits for a response file instead.
    pub command: Vec<String>,
    pub timeout_secs: u64,
}

impl Default for BridgeParams {
    fn default() -> Self {
        BridgeParams {
            command: Vec::new(),
            timeout_secs: 600,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    /// Root seed; every stage derives its streams from it.
    pub seed: u64,
    pub data_dir: Option<PathBuf>,
    pub paths: Paths,
    pub fingerprint: FingerprintParams,
    pub policy: PolicyParams,
    /// Allowed task ids for dataset building; empty allows all.
    pub tasks: Vec<String>,
    pub styles: StyleParams,
    pub ngram: NgramParams,
    pub generate: GenerateParams,
    pub evaluate: EvaluateParams,
    pub classifier: ClassifierParams,
    pub augment: AugmentParams,
    pub bridge: BridgeParams,
}

impl RunConfig {
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))?;
        toml::from_str(&text).map_err(|e| CliError::Usage(format!("config {}: {e}", path.display())))
    }

    /// Digest of every setting that can change output bytes. File locations
    /// are left out; their contents are digested in the manifest instead.
    pub fn digest(&self) -> String {
        let mut settings = self.clone();
        settings.data_dir = None;
        settings.paths = Paths::default();
        settings.bridge.timeout_secs = 0;
        sha256_hex(serde_json::to_string(&settings).expect("config serializes").as_bytes())
    }

    /// Config file value, else the environment variable, else `./molprompt-data`.
    pub fn resolve_data_dir(&mut self) {
        if self.data_dir.is_none() {
            let dir = std::env::var_os(DATA_DIR_ENV)
                .map(PathBuf::from)
                .unwrap_or_else(|| PathBuf::from(DEFAULT_DATA_DIR));
            self.data_dir = Some(dir);
        }
    }

    pub fn data_dir(&self) -> &Path {
        self.data_dir.as_deref().unwrap_or(Path::new(DEFAULT_DATA_DIR))
    }

    pub fn data_path(&self, name: &str) -> PathBuf {
        self.data_dir().join(name)
    }

    /// Every configured input path must exist.
    pub fn check_paths(&self) -> Result<(), CliError> {
        let p = &self.paths;
        let all = p
            .library
            .iter()
            .chain(&p.lexicon)
            .chain(&p.models)
            .chain(&p.scores)
            .chain(&p.fragments);
        for path in all {
            if !path.exists() {
                return Err(CliError::Data(format!("configured path {} does not exist", path.display())));
            }
        }
        Ok(())
    }

    pub fn build_config(&self) -> BuildConfig {
        BuildConfig {
            policy: SubsetPolicy {
                min_facts: self.policy.min_facts,
                max_facts: self.policy.max_facts,
                samples_per_molecule: self.policy.samples_per_molecule,
                seed: self.seed,
            },
            tasks: (!self.tasks.is_empty()).then(|| self.tasks.clone()),
            styles: StyleWeights {
                t0: self.styles.t0,
                t1: self.styles.t1,
                t2: self.styles.t2,
            },
        }
    }

    pub fn classifier_config(&self) -> ClassifierConfig {
        ClassifierConfig {
            radius: self.fingerprint.radius,
            nbits: self.fingerprint.nbits,
            l2: self.classifier.l2,
            learning_rate: self.classifier.learning_rate,
            epochs: self.classifier.epochs,
            seed: self.seed,
            restarts: self.classifier.restarts,
            val_fraction: self.classifier.val_fraction,
        }
    }

    pub fn augmentation_config(&self) -> AugmentationConfig {
        AugmentationConfig {
            target: self.augment.target.clone(),
            pseudo_counts: self.augment.pseudo_counts.clone(),
            trials: self.augment.trials,
            split: self.augment.split,
            seed: self.seed,
            l2_grid: self.augment.l2_grid.clone(),
            selection: self.augment.selection,
            radius: self.fingerprint.radius,
            nbits: self.fingerprint.nbits,
            epochs: self.classifier.epochs,
            learning_rate: self.classifier.learning_rate,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_file_gives_defaults() {
        let c: RunConfig = toml::from_str("").unwrap();
        assert_eq!(c, RunConfig::default());
        assert_eq!(c.generate.n, 5000);
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(toml::from_str::<RunConfig>("sed = 3").is_err());
    }

    #[test]
    fn digest_ignores_locations() {
        let mut a = RunConfig::default();
        let b = a.clone();
        a.data_dir = Some("/elsewhere".into());
        a.paths.library = Some("lib.tsv".into());
        assert_eq!(a.digest(), b.digest());
        a.seed = 1;
        assert_ne!(a.digest(), b.digest());
    }
}
