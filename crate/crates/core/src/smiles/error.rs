use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SmilesError {
    #[error("empty SMILES")]
    Empty,
    #[error("lex error at byte {position}: {message}")]
    Lex { position: usize, message: String },
    #[error("syntax error at byte {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("{open} unclosed branch(es)")]
    UnclosedBranch { open: usize },
    #[error("ring bond {ring} opened but never closed")]
    UnmatchedRingBond { ring: u32 },
    #[error("atom {atom} ({symbol}) has valence {valence}, exceeding the allowed maximum")]
    Valence {
        atom: usize,
        symbol: String,
        valence: usize,
    },
    #[error("kekulization failed: {0}")]
    Kekulization(String),
}

impl SmilesError {
    /// Short error-kind name used in reports.
    pub fn kind(&self) -> &'static str {
        match self {
            SmilesError::Empty => "Empty",
            SmilesError::Lex { .. } => "LexError",
            SmilesError::Syntax { .. } => "SyntaxError",
            SmilesError::UnclosedBranch { .. } => "UnclosedBranch",
            SmilesError::UnmatchedRingBond { .. } => "UnmatchedRingBond",
            SmilesError::Valence { .. } => "ValenceError",
            SmilesError::Kekulization(_) => "KekulizationError",
        }
    }
}
