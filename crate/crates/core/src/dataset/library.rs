use std::collections::HashSet;
use std::path::Path;

use serde::Serialize;

use super::DatasetError;
use crate::smiles::{canonicalize, parse_smiles, CanonicalSmiles, MolGraph};

#[derive(Debug, Clone)]
pub struct LibraryEntry {
    /// Position among the kept molecules.
    pub index: usize,
    pub smiles: CanonicalSmiles,
    pub mol: MolGraph,
    pub iupac: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IngestStats {
    /// Non-blank, non-comment lines.
    pub read: usize,
    pub invalid: usize,
    pub duplicates: usize,
    /// (line number, message) for each invalid line.
    #[serde(skip)]
    pub errors: Vec<(usize, String)>,
}

#[derive(Debug, Clone, Default)]
pub struct Library {
    pub entries: Vec<LibraryEntry>,
    pub stats: IngestStats,
}

const BUNDLED: &str = include_str!("../../data/library_10k.tsv");

impl Library {
    /// 10,002-molecule sample library shipped with the crate.
    pub fn bundled() -> Library {
        parse_library(BUNDLED)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn canonical_set(&self) -> HashSet<CanonicalSmiles> {
        self.entries.iter().map(|e| e.smiles.clone()).collect()
    }

    /// `canonical[\tiupac]` per line, the format `parse_library` reads.
    pub fn to_tsv(&self) -> String {
        let mut out = String::new();
        for e in &self.entries {
            out.push_str(e.smiles.as_str());
            if let Some(name) = &e.iupac {
                out.push('\t');
                out.push_str(name);
            }
            out.push('\n');
        }
        out
    }
}

/// Library text: one `SMILES[<TAB>IUPAC name]` per line. Blank lines, `#`
/// comments and a leading `smiles` header are skipped. The first occurrence
/// of each canonical form is kept.
pub fn parse_library(text: &str) -> Library {
    let mut lib = Library::default();
    let mut seen = HashSet::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let mut cols = line.split('\t');
        let smiles = cols.next().unwrap_or("").trim();
        if i == 0 && smiles.eq_ignore_ascii_case("smiles") {
            continue;
        }
        lib.stats.read += 1;
        let iupac = cols.next().map(str::trim).filter(|s| !s.is_empty()).map(str::to_string);
        match parse_smiles(smiles) {
            Ok(mol) => {
                let canon = canonicalize(&mol);
                if !seen.insert(canon.clone()) {
                    lib.stats.duplicates += 1;
                    continue;
                }
                lib.entries.push(LibraryEntry {
                    index: lib.entries.len(),
                    smiles: canon,
                    mol,
                    iupac,
                });
            }
            Err(e) => {
                lib.stats.invalid += 1;
                lib.stats.errors.push((i + 1, e.to_string()));
            }
        }
    }
    lib
}

pub fn ingest_library(path: &Path) -> Result<Library, DatasetError> {
    let bytes = std::fs::read(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    let text = String::from_utf8(bytes).map_err(|e| {
        let line = e.as_bytes()[..e.utf8_error().valid_up_to()].iter().filter(|&&b| b == b'\n').count() + 1;
        DatasetError::Format {
            line,
            message: "not valid UTF-8".into(),
        }
    })?;
    let lib = parse_library(&text);
    for (line, msg) in &lib.stats.errors {
        log::warn!("{}:{line}: {msg}", path.display());
    }
    Ok(lib)
}
