//! Molecular dataset construction and generation evaluation.

pub mod artifact;
pub mod augmentation;
pub mod dataset;
pub mod descriptors;
pub mod evaluation;
pub mod fingerprints;
pub mod generators;
pub mod rng;
pub mod smiles;
pub mod teachers;

pub use smiles::{canonicalize, is_valid, parse_smiles, substructure_match, write_kekule_smiles, write_smiles, CanonicalSmiles, MolGraph, SmilesError};
