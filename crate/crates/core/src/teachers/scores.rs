//! Pre-computed predictor outputs: `canonical-SMILES<TAB>target<TAB>score`.

use std::collections::BTreeMap;
use std::path::Path;

use super::TeacherError;
use crate::smiles::{canonical_smiles, CanonicalSmiles};

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ScoreTable {
    scores: BTreeMap<String, BTreeMap<CanonicalSmiles, f64>>,
}

impl ScoreTable {
    pub fn parse(text: &str) -> Result<Self, TeacherError> {
        let mut table = ScoreTable::default();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| TeacherError::Format { line: i + 1, message };
            let f: Vec<&str> = line.split('\t').collect();
            if f.len() != 3 {
                return Err(bad("expected SMILES<TAB>target<TAB>score".into()));
            }
            let smiles = canonical_smiles(f[0].trim()).map_err(|e| bad(e.to_string()))?;
            let score: f64 = f[2].trim().parse().map_err(|_| bad(format!("bad score {:?}", f[2])))?;
            if !(0.0..=1.0).contains(&score) {
                return Err(bad(format!("score {score} outside [0, 1]")));
            }
            table.insert(f[1].trim(), smiles, score);
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<Self, TeacherError> {
        let text = std::fs::read_to_string(path).map_err(|e| TeacherError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    pub fn insert(&mut self, target: &str, smiles: CanonicalSmiles, score: f64) {
        self.scores.entry(target.to_string()).or_default().insert(smiles, score);
    }

    pub fn merge(&mut self, other: ScoreTable) {
        for (t, m) in other.scores {
            self.scores.entry(t).or_default().extend(m);
        }
    }

    pub fn targets(&self) -> impl Iterator<Item = &str> {
        self.scores.keys().map(|s| s.as_str())
    }

    pub fn get(&self, target: &str, smiles: &CanonicalSmiles) -> Option<f64> {
        self.scores.get(target)?.get(smiles).copied()
    }

    pub fn is_empty(&self) -> bool {
        self.scores.is_empty()
    }

    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for (t, m) in &self.scores {
            for (s, v) in m {
                out.push_str(&format!("{s}\t{t}\t{v}\n"));
            }
        }
        out
    }
}
