//! Candidate generators: a masked task-conditioned n-gram, library
//! retrieval, and a file bridge to external models.

mod bridge;
mod decoder;
mod ngram;
mod retrieval;
pub mod tokens;

use std::time::Duration;

use thiserror::Error;

pub use bridge::{external_generate, parse_responses, BridgeConfig, GenerationBatch, GenerationRequest};
pub use ngram::{sample, train_ngram, ContextTable, NGramModel, MAX_ORDER, RESTARTS};
pub use retrieval::{retrieval_generate, RetrievalIndex};
pub use tokens::tokenize;

use crate::evaluation::EvalError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeneratorError {
    #[error("dataset is empty")]
    EmptyDataset,
    #[error("n-gram order must be in 1..=6, got {0}")]
    InvalidOrder(usize),
    #[error("task {0:?} is not in the model")]
    UnknownTask(String),
    #[error("decoding stalled after {attempts} attempts")]
    DecodingStall { attempts: usize },
    #[error("no library molecule satisfies {0}")]
    EmptyPool(String),
    #[error("bridge did not answer within {0:?}")]
    BridgeTimeout(Duration),
    #[error("bridge response line {line}: {message}")]
    Protocol { line: usize, message: String },
    #[error("cannot tokenize {0:?} at byte {1}")]
    Token(String, usize),
    #[error("dataset: {0}")]
    Dataset(String),
    #[error("model: {0}")]
    Model(String),
    #[error("{0}")]
    Io(String),
    #[error(transparent)]
    Eval(#[from] EvalError),
}
