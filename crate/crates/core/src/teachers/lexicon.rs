//! Functional-group lexicon: names mapped to fragment patterns.

use std::path::Path;

use super::TeacherError;
use crate::smiles::{canonicalize, parse_smiles, substructure_match, MolGraph};

const BUNDLED: &str = include_str!("../../data/fg_lexicon.tsv");

#[derive(Debug, Clone)]
pub struct LexiconEntry {
    pub name: String,
    pub smiles: String,
    pub pattern: MolGraph,
}

#[derive(Debug, Clone)]
pub struct Lexicon {
    entries: Vec<LexiconEntry>,
}

impl Lexicon {
    /// Parse `name<TAB>fragment-SMILES` lines; `#` starts a comment line.
    pub fn parse(text: &str) -> Result<Self, TeacherError> {
        let mut entries: Vec<LexiconEntry> = Vec::new();
        for (i, line) in text.lines().enumerate() {
            let line = line.trim_end_matches('\r');
            if line.trim().is_empty() || line.starts_with('#') {
                continue;
            }
            let bad = |message: String| TeacherError::Format { line: i + 1, message };
            let (name, smiles) = line
                .split_once('\t')
                .ok_or_else(|| bad("expected name<TAB>SMILES".into()))?;
            let name = name.trim().to_lowercase();
            if name.is_empty() {
                return Err(bad("empty name".into()));
            }
            let pattern = parse_smiles(smiles.trim()).map_err(|e| bad(e.to_string()))?;
            if let Some(pos) = entries.iter().position(|e| e.name == name) {
                entries.remove(pos);
            }
            entries.push(LexiconEntry {
                name,
                smiles: smiles.trim().to_string(),
                pattern,
            });
        }
        Ok(Lexicon { entries })
    }

    pub fn bundled() -> Self {
        Self::parse(BUNDLED).expect("bundled lexicon")
    }

    pub fn load(path: &Path) -> Result<Self, TeacherError> {
        let text = std::fs::read_to_string(path).map_err(|e| TeacherError::Io(format!("{}: {e}", path.display())))?;
        Self::parse(&text)
    }

    /// Bundled entries overridden or extended by `other`.
    pub fn extended(mut self, other: Lexicon) -> Self {
        for e in other.entries {
            self.entries.retain(|x| x.name != e.name);
            self.entries.push(e);
        }
        self
    }

    pub fn entries(&self) -> &[LexiconEntry] {
        &self.entries
    }

    pub fn get(&self, name: &str) -> Option<&LexiconEntry> {
        self.entries.iter().find(|e| e.name == name)
    }

    /// Names of entries whose pattern occurs in `mol`, in lexicon order.
    pub fn matches(&self, mol: &MolGraph) -> Vec<&str> {
        self.entries
            .iter()
            .filter(|e| substructure_match(&e.pattern, mol))
            .map(|e| e.name.as_str())
            .collect()
    }

    /// Digest over entry names and canonical patterns.
    pub fn digest(&self) -> String {
        let mut text = String::new();
        for e in &self.entries {
            text.push_str(&format!("{}\t{}\n", e.name, canonicalize(&e.pattern)));
        }
        crate::artifact::sha256_hex(text.as_bytes())
    }
}
