//! Knowledge teachers: functional groups (IUPAC names and lexicon matches),
//! descriptor facts and classifier or score-file facts.

pub mod classifier;
pub mod facts;
pub mod iupac;
pub mod lexicon;
pub mod scores;

use thiserror::Error;

use crate::descriptors::{crippen_logp, qed, sa_score_with, DescriptorError, FragmentTable};
use crate::smiles::{canonicalize, MolGraph};

pub use classifier::{
    classify_score, f1, train_classifier, ClassifierConfig, ClassifierModel, LabeledSet, TrainingOutcome,
};
pub use facts::{
    Fact, FactKind, FactSource, KnowledgeRecord, Slot, QED_HIGH_THRESHOLD, SA_GOOD_THRESHOLD, SCORE_THRESHOLD,
};
pub use iupac::iupac_fragments;
pub use lexicon::Lexicon;
pub use scores::ScoreTable;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum TeacherError {
    #[error("training data must contain both labels")]
    DegenerateLabels,
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error("{0}")]
    Io(String),
    #[error("model: {0}")]
    Model(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}

/// Names rendered as ADMET flags rather than target affinities.
pub const ADMET_FLAGS: &[&str] = &["BBB", "HIA"];

pub fn is_admet_flag(name: &str) -> bool {
    ADMET_FLAGS.iter().any(|f| f.eq_ignore_ascii_case(name))
}

fn named_fact(name: &str, score: f64, source: FactSource) -> Fact {
    let kind = if is_admet_flag(name) {
        FactKind::AdmetFlag {
            flag: name.to_string(),
            score,
        }
    } else {
        FactKind::TargetAffinity {
            target: name.to_string(),
            score,
        }
    };
    Fact::new(kind, source)
}

/// The registered teachers.
#[derive(Debug, Clone, Default)]
pub struct TeacherSet {
    pub lexicon: Option<Lexicon>,
    pub classifiers: Vec<ClassifierModel>,
    pub scores: ScoreTable,
    /// `None` uses the bundled fragment table.
    pub fragments: Option<FragmentTable>,
}

impl TeacherSet {
    pub fn with_lexicon(lexicon: Lexicon) -> Self {
        TeacherSet {
            lexicon: Some(lexicon),
            ..Default::default()
        }
    }

    pub fn fragment_table(&self) -> &FragmentTable {
        self.fragments.as_ref().unwrap_or_else(|| FragmentTable::bundled())
    }

    pub fn classifier(&self, name: &str) -> Option<&ClassifierModel> {
        self.classifiers.iter().find(|m| m.name.eq_ignore_ascii_case(name))
    }

    /// Score for a target or ADMET flag from a classifier, else a score file.
    pub fn named_score(&self, name: &str, mol: &MolGraph) -> Option<f64> {
        if let Some(m) = self.classifier(name) {
            return Some(classify_score(m, mol));
        }
        let canon = canonicalize(mol);
        self.scores
            .targets()
            .find(|t| t.eq_ignore_ascii_case(name))
            .and_then(|t| self.scores.get(t, &canon))
    }
}

/// Collect every fact the teachers can state about `mol`.
pub fn annotate(mol: &MolGraph, iupac: Option<&str>, teachers: &TeacherSet) -> Result<KnowledgeRecord, TeacherError> {
    let canon = canonicalize(mol);
    let mut record = KnowledgeRecord::new(canon.clone(), iupac.map(str::to_string));
    if let Some(name) = iupac {
        for frag in iupac_fragments(name) {
            let frag = frag.to_lowercase();
            if !frag.is_empty() {
                record.push(Fact::new(FactKind::FunctionalGroup { name: frag }, FactSource::Iupac));
            }
        }
    }
    if let Some(lex) = &teachers.lexicon {
        for name in lex.matches(mol) {
            record.push(Fact::new(
                FactKind::FunctionalGroup { name: name.to_string() },
                FactSource::Lexicon,
            ));
        }
    }
    record.push(Fact::new(FactKind::LogP { value: crippen_logp(mol)? }, FactSource::Descriptors));
    record.push(Fact::new(
        FactKind::QedHigh {
            value: qed(mol)? > QED_HIGH_THRESHOLD,
        },
        FactSource::Descriptors,
    ));
    record.push(Fact::new(
        FactKind::SaGood {
            value: sa_score_with(mol, teachers.fragment_table())? < SA_GOOD_THRESHOLD,
        },
        FactSource::Descriptors,
    ));
    for m in &teachers.classifiers {
        record.push(named_fact(
            &m.name,
            classify_score(m, mol),
            FactSource::Classifier(m.name.clone()),
        ));
    }
    for t in teachers.scores.targets() {
        if let Some(s) = teachers.scores.get(t, &canon) {
            record.push(named_fact(t, s, FactSource::Scores(t.to_string())));
        }
    }
    Ok(record)
}

const REVERIFY_TOLERANCE: f64 = 1e-9;

/// Re-run the fact's source teacher on `mol` and compare.
pub fn verify_fact(mol: &MolGraph, fact: &Fact, iupac: Option<&str>, teachers: &TeacherSet) -> bool {
    let close = |a: f64, b: f64| (a - b).abs() <= REVERIFY_TOLERANCE;
    match (&fact.kind, &fact.source) {
        (FactKind::FunctionalGroup { name }, FactSource::Iupac) => {
            iupac.is_some_and(|n| iupac_fragments(n).iter().any(|f| f.to_lowercase() == *name))
        }
        (FactKind::FunctionalGroup { name }, FactSource::Lexicon) => teachers
            .lexicon
            .as_ref()
            .and_then(|l| l.get(name))
            .is_some_and(|e| crate::smiles::substructure_match(&e.pattern, mol)),
        (FactKind::LogP { value }, FactSource::Descriptors) => crippen_logp(mol).is_ok_and(|v| close(v, *value)),
        (FactKind::QedHigh { value }, FactSource::Descriptors) => {
            qed(mol).is_ok_and(|q| (q > QED_HIGH_THRESHOLD) == *value)
        }
        (FactKind::SaGood { value }, FactSource::Descriptors) => {
            sa_score_with(mol, teachers.fragment_table()).is_ok_and(|s| (s < SA_GOOD_THRESHOLD) == *value)
        }
        (
            FactKind::TargetAffinity { score, .. } | FactKind::AdmetFlag { score, .. },
            FactSource::Classifier(model),
        ) => teachers
            .classifier(model)
            .is_some_and(|m| close(classify_score(m, mol), *score)),
        (FactKind::TargetAffinity { score, .. } | FactKind::AdmetFlag { score, .. }, FactSource::Scores(t)) => {
            teachers.scores.get(t, &canonicalize(mol)).is_some_and(|s| close(s, *score))
        }
        _ => false,
    }
}
