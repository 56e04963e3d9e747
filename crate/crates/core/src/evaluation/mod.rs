//! Generation metrics and multi-constraint success checking.

mod constraints;
mod metrics;

use thiserror::Error;

pub use constraints::{check_constraint, check_mol, constraints_satisfied, success_rate, Constraint, ConstraintSpec, DEFAULT_LOGP_TARGET, LOGP_MARGIN};
pub use metrics::{
    diversity_score, evaluate, novelty_ratio, uniqueness_ratio, uniqueness_ratio_with, validity_ratio, EvalOptions,
    EvalReport, UniquenessDenominator,
};

use crate::descriptors::DescriptorError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum EvalError {
    #[error("functional group {0:?} is not in the lexicon")]
    UnknownFGName(String),
    #[error("no classifier or score file for {0:?}")]
    MissingModel(String),
    #[error("diversity needs at least 2 valid molecules, got {0}")]
    TooFewMolecules(usize),
    #[error("invalid constraint spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Descriptor(#[from] DescriptorError),
}
