//! Predictor F1 as generated positives are added to the training split.

use std::collections::HashSet;
use std::fmt::Write as _;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::rng::stream_seed;
use crate::smiles::{canonicalize, parse_smiles, CanonicalSmiles};
use crate::teachers::classifier::{featurize, fit, predict};
use crate::teachers::{f1, ClassifierConfig, LabeledSet, TeacherError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AugmentError {
    #[error("predictions and labels differ in length ({0} vs {1})")]
    LengthMismatch(usize, usize),
    #[error("F1 of an empty list")]
    Empty,
    #[error("{need} pseudo-samples requested but only {have} usable")]
    InsufficientPseudoPool { need: usize, have: usize },
    #[error("invalid augmentation config: {0}")]
    InvalidConfig(String),
    #[error("pseudo-sample {0:?} is not valid SMILES")]
    InvalidPseudoSample(String),
    #[error(transparent)]
    Teacher(#[from] TeacherError),
}

pub fn f1_score(predictions: &[bool], labels: &[bool]) -> Result<f64, AugmentError> {
    if predictions.len() != labels.len() {
        return Err(AugmentError::LengthMismatch(predictions.len(), labels.len()));
    }
    if labels.is_empty() {
        return Err(AugmentError::Empty);
    }
    Ok(f1(predictions, labels))
}

/// Validation metric used to pick the best candidate predictor.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Selection {
    #[default]
    #[serde(alias = "F1")]
    F1,
    #[serde(alias = "Accuracy")]
    Accuracy,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationConfig {
    pub target: String,
    pub pseudo_counts: Vec<usize>,
    pub trials: usize,
    /// (train, validation, test) fractions.
    pub split: (f64, f64, f64),
    pub seed: u64,
    /// L2 strengths tried per fit; the best on validation is kept.
    pub l2_grid: Vec<f64>,
    pub selection: Selection,
    pub radius: u32,
    pub nbits: u32,
    pub epochs: usize,
    pub learning_rate: f64,
}

impl Default for AugmentationConfig {
    fn default() -> Self {
        let c = ClassifierConfig::default();
        AugmentationConfig {
            target: "target".into(),
            pseudo_counts: vec![0, 50, 100],
            trials: 100,
            split: (0.7, 0.1, 0.2),
            seed: 0,
            l2_grid: vec![1e-4, 1e-3, 1e-2],
            selection: Selection::F1,
            radius: c.radius,
            nbits: c.nbits,
            epochs: c.epochs,
            learning_rate: c.learning_rate,
        }
    }
}

impl AugmentationConfig {
    fn validate(&self) -> Result<(), AugmentError> {
        let bad = |m: &str| Err(AugmentError::InvalidConfig(m.to_string()));
        let (a, b, c) = self.split;
        if [a, b, c].iter().any(|f| !(0.0..=1.0).contains(f)) || ((a + b + c) - 1.0).abs() > 1e-9 {
            return bad("split fractions must lie in [0, 1] and sum to 1");
        }
        if a == 0.0 || c == 0.0 {
            return bad("train and test fractions must be positive");
        }
        if self.trials == 0 {
            return bad("trials must be at least 1");
        }
        if self.pseudo_counts.is_empty() || self.pseudo_counts.windows(2).any(|w| w[0] > w[1]) {
            return bad("pseudo_counts must be non-empty and non-decreasing");
        }
        if self.l2_grid.is_empty() {
            return bad("l2_grid is empty");
        }
        Ok(())
    }

    fn classifier(&self, l2: f64) -> ClassifierConfig {
        ClassifierConfig {
            radius: self.radius,
            nbits: self.nbits,
            l2,
            learning_rate: self.learning_rate,
            epochs: self.epochs,
            ..ClassifierConfig::default()
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationRow {
    pub pseudo_count: usize,
    pub mean_f1: f64,
    /// Sample standard deviation; 0 for a single trial.
    pub std_f1: f64,
    pub trials: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AugmentationReport {
    pub target: String,
    pub rows: Vec<AugmentationRow>,
    /// `trial_f1[t][i]` is trial `t` at `pseudo_counts[i]`.
    pub trial_f1: Vec<Vec<f64>>,
}

impl AugmentationReport {
    pub fn row(&self, pseudo_count: usize) -> Option<&AugmentationRow> {
        self.rows.iter().find(|r| r.pseudo_count == pseudo_count)
    }

    /// `k<TAB>mean<TAB>sd` lines for plotting.
    pub fn plot_tsv(&self) -> String {
        let mut out = String::from("k\tmean_f1\tsd_f1\n");
        for r in &self.rows {
            let _ = writeln!(out, "{}\t{:.6}\t{:.6}", r.pseudo_count, r.mean_f1, r.std_f1);
        }
        out
    }
}

fn accuracy(pred: &[bool], labels: &[bool]) -> f64 {
    pred.iter().zip(labels).filter(|(p, l)| p == l).count() as f64 / labels.len().max(1) as f64
}

/// Fit one model per L2 strength and keep the best on validation; with no
/// validation data the first strength is used.
fn fit_best(
    x: &[Vec<u32>],
    y: &[bool],
    val_x: &[Vec<u32>],
    val_y: &[bool],
    config: &AugmentationConfig,
) -> (Vec<f64>, f64) {
    let mut best: Option<(f64, Vec<f64>, f64)> = None;
    for &l2 in &config.l2_grid {
        let (w, b) = fit(x, y, &config.classifier(l2));
        if val_y.is_empty() {
            return (w, b);
        }
        let pred = predict(&w, b, val_x);
        let score = match config.selection {
            Selection::F1 => f1(&pred, val_y),
            Selection::Accuracy => accuracy(&pred, val_y),
        };
        if best.as_ref().is_none_or(|bst| score > bst.0) {
            best = Some((score, w, b));
        }
    }
    let (_, w, b) = best.expect("grid is non-empty");
    (w, b)
}

struct Prepared {
    x: Vec<Vec<u32>>,
    y: Vec<bool>,
    canon: Vec<CanonicalSmiles>,
    pseudo_x: Vec<Vec<u32>>,
    pseudo_canon: Vec<CanonicalSmiles>,
}

fn run_trial(data: &Prepared, config: &AugmentationConfig, trial: usize) -> Result<Vec<f64>, AugmentError> {
    let seed = stream_seed(config.seed, trial as u64);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n = data.y.len();
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(&mut rng);
    let n_test = ((n as f64) * config.split.2).round().max(1.0) as usize;
    let n_val = ((n as f64) * config.split.1).round() as usize;
    let (test, rest) = idx.split_at(n_test.min(n));
    let (val, train) = rest.split_at(n_val.min(rest.len()));
    let test_set: HashSet<&CanonicalSmiles> = test.iter().map(|&i| &data.canon[i]).collect();
    assert!(val.iter().chain(train).all(|&i| !test_set.contains(&data.canon[i])));
    let mut pool: Vec<usize> = (0..data.pseudo_x.len())
        .filter(|&i| !test_set.contains(&data.pseudo_canon[i]))
        .collect();
    pool.shuffle(&mut rng);
    let need = *config.pseudo_counts.last().unwrap();
    if need > pool.len() {
        return Err(AugmentError::InsufficientPseudoPool {
            need,
            have: pool.len(),
        });
    }
    let pick = |ids: &[usize]| -> (Vec<Vec<u32>>, Vec<bool>) {
        (ids.iter().map(|&i| data.x[i].clone()).collect(), ids.iter().map(|&i| data.y[i]).collect())
    };
    let (train_x, train_y) = pick(train);
    let (val_x, val_y) = pick(val);
    let (test_x, test_y) = pick(test);
    let mut out = Vec::with_capacity(config.pseudo_counts.len());
    for &k in &config.pseudo_counts {
        let mut x = train_x.clone();
        let mut y = train_y.clone();
        for &p in &pool[..k] {
            assert!(!test_set.contains(&data.pseudo_canon[p]));
            x.push(data.pseudo_x[p].clone());
            y.push(true);
        }
        let (w, b) = fit_best(&x, &y, &val_x, &val_y, config);
        out.push(f1_score(&predict(&w, b, &test_x), &test_y)?);
    }
    Ok(out)
}

fn mean_sd(values: &[f64]) -> (f64, f64) {
    let n = values.len() as f64;
    let mean = values.iter().sum::<f64>() / n;
    if values.len() < 2 {
        return (mean, 0.0);
    }
    let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, var.sqrt())
}

/// For each trial: re-split the labelled set, add the first `k` of a
/// shuffled pseudo pool as positives for every `k`, train, and score F1 on
/// the held-out test split. Duplicate labelled molecules (by canonical form)
/// keep their first label; pseudo-samples equal to a test molecule are
/// dropped from that trial's pool.
pub fn run_augmentation_experiment(
    labeled: &LabeledSet,
    pseudo_pool: &[String],
    config: &AugmentationConfig,
) -> Result<AugmentationReport, AugmentError> {
    config.validate()?;
    let mut seen = HashSet::new();
    let mut keep = Vec::new();
    for (i, m) in labeled.molecules().iter().enumerate() {
        let c = canonicalize(m);
        if seen.insert(c.clone()) {
            keep.push((i, c));
        }
    }
    let labels = labeled.labels();
    let y: Vec<bool> = keep.iter().map(|&(i, _)| labels[i]).collect();
    if !y.iter().any(|&l| l) || y.iter().all(|&l| l) {
        return Err(TeacherError::DegenerateLabels.into());
    }
    let mols: Vec<_> = keep.iter().map(|&(i, _)| labeled.molecules()[i].clone()).collect();
    let pseudo_mols = pseudo_pool
        .iter()
        .map(|s| parse_smiles(s).map_err(|_| AugmentError::InvalidPseudoSample(s.clone())))
        .collect::<Result<Vec<_>, _>>()?;
    let data = Prepared {
        x: featurize(&mols, config.radius, config.nbits),
        y,
        canon: keep.into_iter().map(|(_, c)| c).collect(),
        pseudo_x: featurize(&pseudo_mols, config.radius, config.nbits),
        pseudo_canon: pseudo_mols.iter().map(canonicalize).collect(),
    };
    let trial_f1: Vec<Vec<f64>> = (0..config.trials)
        .into_par_iter()
        .map(|t| run_trial(&data, config, t))
        .collect::<Result<_, _>>()?;
    let rows = config
        .pseudo_counts
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let col: Vec<f64> = trial_f1.iter().map(|t| t[i]).collect();
            let (mean_f1, std_f1) = mean_sd(&col);
            AugmentationRow {
                pseudo_count: k,
                mean_f1,
                std_f1,
                trials: col.len(),
            }
        })
        .collect();
    Ok(AugmentationReport {
        target: config.target.clone(),
        rows,
        trial_f1,
    })
}
