//! L2-regularized logistic regression on Morgan fingerprints.

use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::TeacherError;
use crate::artifact::{sha256_hex, HeaderBlob};
use crate::fingerprints::{morgan_fingerprint, ALLOWED_NBITS, DEFAULT_NBITS, DEFAULT_RADIUS};
use crate::smiles::{parse_smiles, MolGraph};

const MODEL_MAGIC: &str = "molprompt-classifier v1";

/// Binary-labelled molecules.
#[derive(Debug, Clone, PartialEq)]
pub struct LabeledSet {
    entries: Vec<(String, bool)>,
    mols: Vec<MolGraph>,
}

impl LabeledSet {
    pub fn new(entries: Vec<(String, bool)>) -> Result<Self, TeacherError> {
        let mols = entries
            .iter()
            .enumerate()
            .map(|(i, (s, _))| {
                parse_smiles(s).map_err(|e| TeacherError::Format {
                    line: i + 1,
                    message: e.to_string(),
                })
            })
            .collect::<Result<_, _>>()?;
        Ok(LabeledSet { entries, mols })
    }

    /// `SMILES<TAB>label` lines with label 0 or 1; `#` comments and an
    /// optional `smiles` header are skipped.
    pub fn parse(text: &str) -> Result<Self, TeacherError> {
        let mut entries = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') || (i == 0 && line.starts_with("smiles")) {
                continue;
            }
            let bad = |message: &str| TeacherError::Format {
                line: i + 1,
                message: message.to_string(),
            };
            let (s, l) = line.split_once('\t').ok_or_else(|| bad("expected SMILES<TAB>label"))?;
            let label = match l.trim() {
                "0" => false,
                "1" => true,
                _ => return Err(bad("label must be 0 or 1")),
            };
            entries.push((s.trim().to_string(), label));
        }
        Self::new(entries)
    }

    pub fn load(path: &Path) -> Result<Self, TeacherError> {
        let text = std::fs::read_to_string(path).map_err(|e| TeacherError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn entries(&self) -> &[(String, bool)] {
        &self.entries
    }

    pub fn molecules(&self) -> &[MolGraph] {
        &self.mols
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn labels(&self) -> Vec<bool> {
        self.entries.iter().map(|e| e.1).collect()
    }

    pub fn digest(&self) -> String {
        let mut text = String::new();
        for (s, l) in &self.entries {
            text.push_str(&format!("{s}\t{}\n", *l as u8));
        }
        sha256_hex(text.as_bytes())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierConfig {
    pub radius: u32,
    pub nbits: u32,
    /// L2 penalty strength.
    pub l2: f64,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
    /// Number of seeded train/validation re-splits; the best validation F1 wins.
    pub restarts: usize,
    /// Validation share of each split. Zero validates on the training data.
    pub val_fraction: f64,
}

impl Default for ClassifierConfig {
    fn default() -> Self {
        ClassifierConfig {
            radius: DEFAULT_RADIUS,
            nbits: DEFAULT_NBITS,
            l2: 1e-4,
            learning_rate: 0.5,
            epochs: 200,
            seed: 0,
            restarts: 1,
            val_fraction: 0.2,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClassifierModel {
    pub name: String,
    pub weights: Vec<f64>,
    pub bias: f64,
    pub radius: u32,
    pub nbits: u32,
    pub training_digest: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct TrainingOutcome {
    pub model: ClassifierModel,
    pub train_f1: f64,
    pub val_f1: f64,
    /// Index of the winning re-split.
    pub restart: usize,
}

/// Harmonic mean of precision and recall; 0 when both are 0.
pub fn f1(predictions: &[bool], labels: &[bool]) -> f64 {
    let (mut tp, mut fp, mut fneg) = (0usize, 0usize, 0usize);
    for (&p, &l) in predictions.iter().zip(labels) {
        match (p, l) {
            (true, true) => tp += 1,
            (true, false) => fp += 1,
            (false, true) => fneg += 1,
            _ => {}
        }
    }
    if tp == 0 {
        return 0.0;
    }
    2.0 * tp as f64 / (2 * tp + fp + fneg) as f64
}

fn sigmoid(z: f64) -> f64 {
    1.0 / (1.0 + (-z).exp())
}

/// Set-bit lists for every molecule.
pub fn featurize(mols: &[MolGraph], radius: u32, nbits: u32) -> Vec<Vec<u32>> {
    mols.iter()
        .map(|m| morgan_fingerprint(m, radius, nbits).expect("validated size").bits())
        .collect()
}

fn score_bits(weights: &[f64], bias: f64, bits: &[u32]) -> f64 {
    sigmoid(bias + bits.iter().map(|&b| weights[b as usize]).sum::<f64>())
}

/// Full-batch gradient descent on the mean logistic loss plus `l2/2 |w|^2`.
pub(crate) fn fit(x: &[Vec<u32>], y: &[bool], config: &ClassifierConfig) -> (Vec<f64>, f64) {
    let mut w = vec![0.0; config.nbits as usize];
    let mut b = 0.0;
    let n = x.len().max(1) as f64;
    let mut grad = vec![0.0; w.len()];
    for _ in 0..config.epochs {
        grad.iter_mut().for_each(|g| *g = 0.0);
        let mut gb = 0.0;
        for (bits, &label) in x.iter().zip(y) {
            let err = score_bits(&w, b, bits) - label as u8 as f64;
            gb += err;
            for &k in bits {
                grad[k as usize] += err;
            }
        }
        for (wk, gk) in w.iter_mut().zip(&grad) {
            *wk -= config.learning_rate * (gk / n + config.l2 * *wk);
        }
        b -= config.learning_rate * gb / n;
    }
    (w, b)
}

pub(crate) fn predict(w: &[f64], b: f64, x: &[Vec<u32>]) -> Vec<bool> {
    x.iter().map(|bits| score_bits(w, b, bits) > 0.5).collect()
}

/// Train on pre-computed features; returns weights, bias, train F1, val F1
/// and the winning restart.
pub(crate) fn train_features(
    x: &[Vec<u32>],
    y: &[bool],
    config: &ClassifierConfig,
) -> Result<(Vec<f64>, f64, f64, f64, usize), TeacherError> {
    if !y.iter().any(|&l| l) || y.iter().all(|&l| l) {
        return Err(TeacherError::DegenerateLabels);
    }
    let mut best: Option<(Vec<f64>, f64, f64, f64, usize)> = None;
    for restart in 0..config.restarts.max(1) {
        let mut idx: Vec<usize> = (0..x.len()).collect();
        let mut rng = ChaCha8Rng::seed_from_u64(config.seed.wrapping_add(restart as u64));
        idx.shuffle(&mut rng);
        let n_val = ((x.len() as f64) * config.val_fraction).round() as usize;
        let n_val = n_val.min(x.len().saturating_sub(2));
        let (val, train) = idx.split_at(n_val);
        let ty: Vec<bool> = train.iter().map(|&i| y[i]).collect();
        if !ty.iter().any(|&l| l) || ty.iter().all(|&l| l) {
            continue;
        }
        let tx: Vec<Vec<u32>> = train.iter().map(|&i| x[i].clone()).collect();
        let (w, b) = fit(&tx, &ty, config);
        let train_f1 = f1(&predict(&w, b, &tx), &ty);
        let val_f1 = if val.is_empty() {
            train_f1
        } else {
            let vx: Vec<Vec<u32>> = val.iter().map(|&i| x[i].clone()).collect();
            let vy: Vec<bool> = val.iter().map(|&i| y[i]).collect();
            f1(&predict(&w, b, &vx), &vy)
        };
        if best.as_ref().is_none_or(|bst| val_f1 > bst.3) {
            best = Some((w, b, train_f1, val_f1, restart));
        }
    }
    best.ok_or(TeacherError::DegenerateLabels)
}

pub fn train_classifier(
    name: &str,
    data: &LabeledSet,
    config: &ClassifierConfig,
) -> Result<TrainingOutcome, TeacherError> {
    if !ALLOWED_NBITS.contains(&config.nbits) {
        return Err(TeacherError::Model(format!("unsupported fingerprint size {}", config.nbits)));
    }
    let x = featurize(&data.mols, config.radius, config.nbits);
    let (weights, bias, train_f1, val_f1, restart) = train_features(&x, &data.labels(), config)?;
    Ok(TrainingOutcome {
        model: ClassifierModel {
            name: name.to_string(),
            weights,
            bias,
            radius: config.radius,
            nbits: config.nbits,
            training_digest: data.digest(),
        },
        train_f1,
        val_f1,
        restart,
    })
}

/// Logistic output in [0, 1].
pub fn classify_score(model: &ClassifierModel, mol: &MolGraph) -> f64 {
    let bits = morgan_fingerprint(mol, model.radius, model.nbits)
        .expect("model fingerprint size validated on load")
        .bits();
    score_bits(&model.weights, model.bias, &bits)
}

impl ClassifierModel {
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut blob = HeaderBlob::new(MODEL_MAGIC)
            .field("name", &self.name)
            .field("radius", self.radius)
            .field("nbits", self.nbits)
            .field("digest", &self.training_digest);
        blob.body.extend_from_slice(&self.bias.to_le_bytes());
        for w in &self.weights {
            blob.body.extend_from_slice(&w.to_le_bytes());
        }
        blob.to_bytes()
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, TeacherError> {
        let bad = |m: String| TeacherError::Model(m);
        let blob = HeaderBlob::parse(data, MODEL_MAGIC).map_err(|e| bad(e.to_string()))?;
        let field = |k: &str| blob.get(k).map_err(|e| bad(e.to_string()));
        let radius: u32 = field("radius")?.parse().map_err(|_| bad("bad radius".into()))?;
        let nbits: u32 = field("nbits")?.parse().map_err(|_| bad("bad nbits".into()))?;
        if !ALLOWED_NBITS.contains(&nbits) {
            return Err(bad(format!("unsupported fingerprint size {nbits}")));
        }
        if blob.body.len() != 8 * (nbits as usize + 1) {
            return Err(bad("weight vector length does not match nbits".into()));
        }
        let mut vals = blob
            .body
            .chunks_exact(8)
            .map(|c| f64::from_le_bytes(c.try_into().unwrap()));
        let bias = vals.next().unwrap();
        Ok(ClassifierModel {
            name: field("name")?.to_string(),
            weights: vals.collect(),
            bias,
            radius,
            nbits,
            training_digest: field("digest")?.to_string(),
        })
    }

    pub fn load(path: &Path) -> Result<Self, TeacherError> {
        let data = std::fs::read(path).map_err(|e| TeacherError::Io(format!("{}: {e}", path.display())))?;
        Self::from_bytes(&data)
    }

    pub fn digest(&self) -> String {
        sha256_hex(&self.to_bytes())
    }
}
