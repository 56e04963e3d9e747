use std::collections::HashSet;
use std::fmt::Write as _;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::constraints::ConstraintSpec;
use super::EvalError;
use crate::fingerprints::{default_fingerprint, tanimoto, Fingerprint};
use crate::smiles::{canonicalize, parse_smiles, CanonicalSmiles, MolGraph};
use crate::teachers::TeacherSet;

fn percent(num: usize, den: usize) -> f64 {
    if den == 0 {
        0.0
    } else {
        100.0 * num as f64 / den as f64
    }
}

fn parse_all<S: AsRef<str> + Sync>(samples: &[S]) -> Vec<Option<MolGraph>> {
    samples.par_iter().map(|s| parse_smiles(s.as_ref()).ok()).collect()
}

fn canonical_valid<S: AsRef<str> + Sync>(samples: &[S]) -> Vec<CanonicalSmiles> {
    samples
        .par_iter()
        .filter_map(|s| parse_smiles(s.as_ref()).ok().map(|m| canonicalize(&m)))
        .collect()
}

/// 100 x valid / all; 0 for an empty batch.
pub fn validity_ratio<S: AsRef<str> + Sync>(samples: &[S]) -> f64 {
    let valid = samples.par_iter().filter(|s| parse_smiles(s.as_ref()).is_ok()).count();
    percent(valid, samples.len())
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum UniquenessDenominator {
    /// Distinct canonical forms over valid samples.
    #[default]
    #[serde(alias = "Valid")]
    Valid,
    /// Distinct canonical forms over all samples.
    #[serde(alias = "All")]
    All,
}

/// 100 x distinct canonical forms / valid samples.
pub fn uniqueness_ratio<S: AsRef<str> + Sync>(samples: &[S]) -> f64 {
    uniqueness_ratio_with(samples, UniquenessDenominator::Valid)
}

pub fn uniqueness_ratio_with<S: AsRef<str> + Sync>(samples: &[S], denominator: UniquenessDenominator) -> f64 {
    let canon = canonical_valid(samples);
    let distinct: HashSet<&CanonicalSmiles> = canon.iter().collect();
    let den = match denominator {
        UniquenessDenominator::Valid => canon.len(),
        UniquenessDenominator::All => samples.len(),
    };
    percent(distinct.len(), den)
}

/// 100 x distinct canonical forms absent from `training` / distinct forms.
pub fn novelty_ratio<S: AsRef<str> + Sync>(samples: &[S], training: &HashSet<CanonicalSmiles>) -> f64 {
    let canon = canonical_valid(samples);
    let distinct: HashSet<&CanonicalSmiles> = canon.iter().collect();
    let novel = distinct.iter().filter(|c| !training.contains(**c)).count();
    percent(novel, distinct.len())
}

/// Rows per parallel chunk; each chunk sums its rows in order and chunk
/// sums are added in order, so the result does not depend on scheduling.
const ROWS_PER_CHUNK: usize = 16;

pub(crate) fn mean_pairwise_similarity(fps: &[Fingerprint]) -> f64 {
    let n = fps.len();
    let rows: Vec<usize> = (0..n).collect();
    let chunk_sums: Vec<f64> = rows
        .par_chunks(ROWS_PER_CHUNK)
        .map(|chunk| {
            let mut s = 0.0;
            for &i in chunk {
                for j in i + 1..n {
                    s += tanimoto(&fps[i], &fps[j]).expect("same parameters");
                }
            }
            s
        })
        .collect();
    let total: f64 = chunk_sums.iter().sum();
    2.0 * total / (n as f64 * (n as f64 - 1.0))
}

/// 1 minus the mean Tanimoto similarity over all unordered pairs of valid
/// samples (radius 2, 2048 bits).
pub fn diversity_score<S: AsRef<str> + Sync>(samples: &[S]) -> Result<f64, EvalError> {
    let fps: Vec<Fingerprint> = parse_all(samples).iter().flatten().map(default_fingerprint).collect();
    if fps.len() < 2 {
        return Err(EvalError::TooFewMolecules(fps.len()));
    }
    Ok(1.0 - mean_pairwise_similarity(&fps))
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct EvalOptions {
    pub uniqueness_denominator: UniquenessDenominator,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub task_id: String,
    pub spec: ConstraintSpec,
    pub n_generated: usize,
    pub n_valid: usize,
    pub validity_pct: f64,
    pub uniqueness_pct: f64,
    pub novelty_pct: f64,
    pub sr_pct: f64,
    /// `None` with fewer than two valid molecules.
    pub diversity: Option<f64>,
    pub diversity_x100: Option<f64>,
    /// Success rate of each constraint on its own, in spec order.
    pub constraint_sr_pct: Vec<f64>,
    pub uniqueness_denominator: UniquenessDenominator,
}

impl EvalReport {
    /// Fixed-format metric table.
    pub fn table(&self) -> String {
        let mut out = String::new();
        let pct = |v: f64| format!("{v:>8.2}");
        let _ = writeln!(out, "task        {}", self.task_id);
        let _ = writeln!(out, "spec        {}", self.spec);
        let _ = writeln!(out, "generated   {:>8}", self.n_generated);
        let _ = writeln!(out, "validity    {}", pct(self.validity_pct));
        let _ = writeln!(out, "uniqueness  {}", pct(self.uniqueness_pct));
        let _ = writeln!(out, "novelty     {}", pct(self.novelty_pct));
        match self.diversity_x100 {
            Some(d) => {
                let _ = writeln!(out, "diversity   {}", pct(d));
            }
            None => {
                let _ = writeln!(out, "diversity        n/a");
            }
        }
        let _ = writeln!(out, "SR          {}", pct(self.sr_pct));
        for (c, sr) in self.spec.constraints.iter().zip(&self.constraint_sr_pct) {
            let _ = writeln!(out, "  {:<24}{}", c.to_string(), pct(*sr));
        }
        out
    }
}

/// All five metrics plus per-constraint success rates for one batch.
pub fn evaluate<S: AsRef<str> + Sync>(
    samples: &[S],
    spec: &ConstraintSpec,
    training: &HashSet<CanonicalSmiles>,
    teachers: &TeacherSet,
    options: &EvalOptions,
) -> Result<EvalReport, EvalError> {
    spec.check_context(teachers)?;
    let mols = parse_all(samples);
    let valid: Vec<&MolGraph> = mols.iter().flatten().collect();
    let canon: Vec<CanonicalSmiles> = valid.par_iter().map(|m| canonicalize(m)).collect();
    let distinct: HashSet<&CanonicalSmiles> = canon.iter().collect();
    let novel = distinct.iter().filter(|c| !training.contains(**c)).count();
    let den = match options.uniqueness_denominator {
        UniquenessDenominator::Valid => valid.len(),
        UniquenessDenominator::All => samples.len(),
    };
    let hits: Vec<Vec<bool>> = valid
        .par_iter()
        .map(|m| {
            spec.constraints
                .iter()
                .map(|c| super::check_mol(m, c, teachers))
                .collect::<Result<Vec<bool>, _>>()
        })
        .collect::<Result<_, _>>()?;
    let all_hits = hits.iter().filter(|h| h.iter().all(|&x| x)).count();
    let constraint_sr_pct = (0..spec.constraints.len())
        .map(|k| percent(hits.iter().filter(|h| h[k]).count(), samples.len()))
        .collect();
    let diversity = if valid.len() >= 2 {
        let fps: Vec<Fingerprint> = valid.iter().map(|m| default_fingerprint(m)).collect();
        Some(1.0 - mean_pairwise_similarity(&fps))
    } else {
        None
    };
    Ok(EvalReport {
        task_id: spec.task_id.clone(),
        spec: spec.clone(),
        n_generated: samples.len(),
        n_valid: valid.len(),
        validity_pct: percent(valid.len(), samples.len()),
        uniqueness_pct: percent(distinct.len(), den),
        novelty_pct: percent(novel, distinct.len()),
        sr_pct: percent(all_hits, samples.len()),
        diversity,
        diversity_x100: diversity.map(|d| d * 100.0),
        constraint_sr_pct,
        uniqueness_denominator: options.uniqueness_denominator,
    })
}
