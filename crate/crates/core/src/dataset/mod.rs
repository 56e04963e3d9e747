//! Text/molecule pair construction: prompt templates, knowledge subsets and
//! dataset files.

mod build;
mod library;
mod subsets;
pub mod templates;

use thiserror::Error;

pub use build::{build_pairs, parse_dataset, read_dataset, write_dataset, BuildConfig, BuildStats, Dataset, StyleWeights, TextMoleculePair};
pub use library::{ingest_library, parse_library, IngestStats, Library, LibraryEntry};
pub use subsets::{select_knowledge_subsets, SubsetPolicy};
pub use templates::{match_prompt, render_template, route, task_ids, task_signature, PromptTemplate, Style, TEMPLATES};

use crate::teachers::TeacherError;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum DatasetError {
    #[error("no template for task {task} in style {style}")]
    UnknownTask { task: String, style: Style },
    #[error("unknown style {0:?}")]
    UnknownStyle(String),
    #[error("task {task}: no fact fills slot {slot}")]
    MissingSlotFact { task: String, slot: String },
    #[error("record has {have} facts, policy needs at least {need}")]
    TooFewFacts { have: usize, need: usize },
    #[error("invalid subset policy: {0}")]
    InvalidPolicy(String),
    #[error("library is empty")]
    EmptyLibrary,
    #[error("{0}")]
    Io(String),
    #[error("line {line}: {message}")]
    Format { line: usize, message: String },
    #[error(transparent)]
    Teacher(#[from] TeacherError),
}
