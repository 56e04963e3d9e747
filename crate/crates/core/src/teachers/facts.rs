use serde::{Deserialize, Serialize};

use crate::smiles::CanonicalSmiles;

/// QED strictly above this is "high".
pub const QED_HIGH_THRESHOLD: f64 = 0.6;
/// SA strictly below this is "good".
pub const SA_GOOD_THRESHOLD: f64 = 4.0;
/// Classifier or score-file output strictly above this is positive.
pub const SCORE_THRESHOLD: f64 = 0.5;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum FactKind {
    #[serde(rename = "FG")]
    FunctionalGroup { name: String },
    LogP { value: f64 },
    #[serde(rename = "QEDHigh")]
    QedHigh { value: bool },
    #[serde(rename = "SAGood")]
    SaGood { value: bool },
    TargetAffinity { target: String, score: f64 },
    AdmetFlag { flag: String, score: f64 },
}

/// Which teacher produced a fact.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactSource {
    Iupac,
    Lexicon,
    Descriptors,
    /// Built-in classifier, by model name.
    Classifier(String),
    /// External score file, by target name.
    Scores(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Fact {
    #[serde(flatten)]
    pub kind: FactKind,
    pub source: FactSource,
}

/// Slot category a fact fills in a prompt template.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Slot {
    FunctionalGroup,
    LogP,
    Qed,
    Sa,
    /// Target or ADMET name, upper-cased.
    Named(String),
}

impl Fact {
    pub fn new(kind: FactKind, source: FactSource) -> Self {
        Fact { kind, source }
    }

    /// Deduplication key: (kind tag, name).
    pub fn key(&self) -> (&'static str, &str) {
        match &self.kind {
            FactKind::FunctionalGroup { name } => ("FG", name),
            FactKind::LogP { .. } => ("LogP", ""),
            FactKind::QedHigh { .. } => ("QEDHigh", ""),
            FactKind::SaGood { .. } => ("SAGood", ""),
            FactKind::TargetAffinity { target, .. } => ("TargetAffinity", target),
            FactKind::AdmetFlag { flag, .. } => ("AdmetFlag", flag),
        }
    }

    /// Whether the fact states something that can be rendered as positive
    /// knowledge.
    pub fn is_positive(&self) -> bool {
        match &self.kind {
            FactKind::FunctionalGroup { .. } | FactKind::LogP { .. } => true,
            FactKind::QedHigh { value } | FactKind::SaGood { value } => *value,
            FactKind::TargetAffinity { score, .. } | FactKind::AdmetFlag { score, .. } => *score > SCORE_THRESHOLD,
        }
    }

    pub fn slot(&self) -> Slot {
        match &self.kind {
            FactKind::FunctionalGroup { .. } => Slot::FunctionalGroup,
            FactKind::LogP { .. } => Slot::LogP,
            FactKind::QedHigh { .. } => Slot::Qed,
            FactKind::SaGood { .. } => Slot::Sa,
            FactKind::TargetAffinity { target: n, .. } | FactKind::AdmetFlag { flag: n, .. } => {
                Slot::Named(n.to_ascii_uppercase())
            }
        }
    }

    pub fn functional_group(&self) -> Option<&str> {
        match &self.kind {
            FactKind::FunctionalGroup { name } => Some(name),
            _ => None,
        }
    }
}

/// Knowledge extracted for one molecule.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct KnowledgeRecord {
    pub canonical_smiles: CanonicalSmiles,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iupac: Option<String>,
    pub facts: Vec<Fact>,
}

impl KnowledgeRecord {
    pub fn new(canonical_smiles: CanonicalSmiles, iupac: Option<String>) -> Self {
        KnowledgeRecord {
            canonical_smiles,
            iupac,
            facts: Vec::new(),
        }
    }

    /// Add a fact unless one with the same key is present. Returns whether
    /// it was added.
    pub fn push(&mut self, fact: Fact) -> bool {
        if self.facts.iter().any(|f| f.key() == fact.key()) {
            return false;
        }
        self.facts.push(fact);
        true
    }

    pub fn positive_facts(&self) -> Vec<Fact> {
        self.facts.iter().filter(|f| f.is_positive()).cloned().collect()
    }
}
