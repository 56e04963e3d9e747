//! SMILES parsing, sanitization, writing, canonicalization and substructure
//! matching.

mod canon;
pub mod element;
mod error;
mod graph;
mod matching;
mod parser;
pub(crate) mod query;
pub(crate) mod rings;
mod sanitize;
mod writer;

pub use canon::{canonicalize, CanonicalSmiles};
pub(crate) use canon::initial_ranks;
pub use error::SmilesError;
pub use graph::{Atom, Bond, BondDirection, BondOrder, Chirality, MolGraph};
pub use matching::substructure_match;

/// Parse and sanitize a SMILES string.
pub fn parse_smiles(text: &str) -> Result<MolGraph, SmilesError> {
    sanitize::sanitize(parser::parse_raw(text)?)
}

/// True iff [`parse_smiles`] succeeds.
pub fn is_valid(text: &str) -> bool {
    parse_smiles(text).is_ok()
}

/// Write a SMILES string following atom index order. Stereo marks are not
/// written.
pub fn write_smiles(mol: &MolGraph) -> String {
    let rank: Vec<usize> = (0..mol.atom_count()).collect();
    writer::write_ranked(mol, &rank)
}

/// Like [`write_smiles`] but with aromatic rings written in their Kekulé
/// form, so the output has no lowercase atoms.
pub fn write_kekule_smiles(mol: &MolGraph) -> String {
    let atoms = mol
        .atoms()
        .iter()
        .map(|a| Atom {
            aromatic: false,
            ..a.clone()
        })
        .collect();
    let bonds = mol
        .bonds()
        .iter()
        .map(|b| Bond {
            order: match (b.order, b.kekule) {
                (BondOrder::Aromatic, 2) => BondOrder::Double,
                (BondOrder::Aromatic, _) => BondOrder::Single,
                (o, _) => o,
            },
            ..b.clone()
        })
        .collect();
    write_smiles(&MolGraph::assemble(atoms, bonds, mol.rings().to_vec()))
}

/// Parse then canonicalize.
pub fn canonical_smiles(text: &str) -> Result<CanonicalSmiles, SmilesError> {
    parse_smiles(text).map(|m| canonicalize(&m))
}

impl std::str::FromStr for MolGraph {
    type Err = SmilesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        parse_smiles(s)
    }
}

impl std::str::FromStr for CanonicalSmiles {
    type Err = SmilesError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        canonical_smiles(s)
    }
}
