//! Synthetic accessibility score from fragment frequencies and complexity
//! penalties, rescaled to 1 (easy) .. 10 (hard).

use std::collections::{BTreeSet, HashMap};
use std::path::Path;
use std::sync::OnceLock;

use super::DescriptorError;
use crate::artifact::{sha256_hex, HeaderBlob};
use crate::fingerprints::identifier_counts;
use crate::smiles::element::{CARBON, NITROGEN, PHOSPHORUS, SULFUR};
use crate::smiles::{initial_ranks, MolGraph};

pub const FRAGMENT_RADIUS: u32 = 2;
const MAGIC: &str = "molprompt-fragments v1";
const UNKNOWN_FRAGMENT: f64 = -4.0;
const BUNDLED: &[u8] = include_bytes!("../../data/sa_fragments.bin");

/// Fragment identifier frequencies and their derived log-frequency scores.
#[derive(Debug, Clone, PartialEq)]
pub struct FragmentTable {
    counts: Vec<(u32, u32)>,
    scores: HashMap<u32, f64>,
    source: String,
}

impl FragmentTable {
    pub fn from_counts(counts: impl IntoIterator<Item = (u32, u32)>, source: impl Into<String>) -> Self {
        let mut counts: Vec<(u32, u32)> = counts.into_iter().filter(|c| c.1 > 0).collect();
        counts.sort_unstable();
        let mut by_freq: Vec<u64> = counts.iter().map(|c| c.1 as u64).collect();
        by_freq.sort_unstable_by(|a, b| b.cmp(a));
        let total: u64 = by_freq.iter().sum();
        let t80 = total * 8 / 10;
        let mut n80 = 0usize;
        let mut acc = 0u64;
        for (i, c) in by_freq.iter().enumerate() {
            acc += c;
            if acc < t80 {
                n80 = i;
            }
        }
        let n80 = n80.max(1) as f64;
        let scores = counts.iter().map(|&(id, c)| (id, (c as f64 / n80).log10())).collect();
        FragmentTable {
            counts,
            scores,
            source: source.into(),
        }
    }

    /// Count fragments over a set of molecules.
    pub fn build<'a>(mols: impl IntoIterator<Item = &'a MolGraph>, source: impl Into<String>) -> Self {
        let mut acc: HashMap<u32, u32> = HashMap::new();
        for m in mols {
            for (id, c) in identifier_counts(m, FRAGMENT_RADIUS) {
                *acc.entry(id).or_insert(0) += c;
            }
        }
        Self::from_counts(acc, source)
    }

    /// Table shipped with the crate.
    pub fn bundled() -> &'static FragmentTable {
        static T: OnceLock<FragmentTable> = OnceLock::new();
        T.get_or_init(|| FragmentTable::from_bytes(BUNDLED).expect("bundled fragment table"))
    }

    pub fn len(&self) -> usize {
        self.counts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.counts.is_empty()
    }

    /// Free-form description of the corpus the counts came from.
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn score(&self, id: u32) -> Option<f64> {
        self.scores.get(&id).copied()
    }

    /// Text header, blank line, then little-endian `(u32 id, u32 count)` pairs.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut blob = HeaderBlob::new(MAGIC)
            .field("radius", FRAGMENT_RADIUS)
            .field("entries", self.counts.len())
            .field("source", &self.source);
        for &(id, c) in &self.counts {
            blob.body.extend_from_slice(&id.to_le_bytes());
            blob.body.extend_from_slice(&c.to_le_bytes());
        }
        blob.to_bytes()
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, DescriptorError> {
        let bad = |m: String| DescriptorError::MissingFragmentTable(m);
        let blob = HeaderBlob::parse(data, MAGIC).map_err(|e| bad(e.to_string()))?;
        let radius = blob.get("radius").map_err(|e| bad(e.to_string()))?;
        if radius != FRAGMENT_RADIUS.to_string() {
            return Err(bad(format!("unsupported radius {radius}")));
        }
        let entries: usize = blob
            .get("entries")
            .ok()
            .and_then(|v| v.parse().ok())
            .ok_or_else(|| bad("missing entry count".into()))?;
        if blob.body.len() != entries * 8 {
            return Err(bad("truncated table".into()));
        }
        if entries == 0 {
            return Err(bad("empty table".into()));
        }
        let counts = blob.body.chunks_exact(8).map(|c| {
            (
                u32::from_le_bytes(c[..4].try_into().unwrap()),
                u32::from_le_bytes(c[4..].try_into().unwrap()),
            )
        });
        Ok(Self::from_counts(counts, blob.get("source").unwrap_or("")))
    }

    pub fn load(path: &Path) -> Result<Self, DescriptorError> {
        let data = std::fs::read(path)
            .map_err(|e| DescriptorError::MissingFragmentTable(format!("{}: {e}", path.display())))?;
        Self::from_bytes(&data)
    }

    /// SHA-256 of the serialized table.
    pub fn digest(&self) -> String {
        sha256_hex(&self.to_bytes())
    }
}

fn ring_bonds(mol: &MolGraph, ring: &[usize]) -> BTreeSet<usize> {
    (0..ring.len())
        .filter_map(|k| mol.bond_between(ring[k], ring[(k + 1) % ring.len()]))
        .collect()
}

/// (spiro atoms, bridgehead atoms) over the SSSR.
pub fn spiro_and_bridgeheads(mol: &MolGraph) -> (usize, usize) {
    let rings = mol.rings();
    let bonds: Vec<BTreeSet<usize>> = rings.iter().map(|r| ring_bonds(mol, r)).collect();
    let mut spiro = BTreeSet::new();
    let mut bridge = BTreeSet::new();
    for i in 0..rings.len() {
        for j in i + 1..rings.len() {
            let shared: Vec<usize> = bonds[i].intersection(&bonds[j]).copied().collect();
            if shared.len() > 1 {
                let mut seen: HashMap<usize, usize> = HashMap::new();
                for &b in &shared {
                    let bond = mol.bond(b);
                    *seen.entry(bond.a).or_insert(0) += 1;
                    *seen.entry(bond.b).or_insert(0) += 1;
                }
                bridge.extend(seen.into_iter().filter(|&(_, c)| c == 1).map(|(a, _)| a));
            } else {
                let common: Vec<&usize> = rings[i].iter().filter(|a| rings[j].contains(a)).collect();
                if common.len() == 1 {
                    spiro.insert(*common[0]);
                }
            }
        }
    }
    (spiro.len(), bridge.len())
}

/// Potential stereocentres, assigned or not: tetrahedral atoms whose
/// substituents fall in pairwise distinct symmetry classes.
pub fn stereocentre_count(mol: &MolGraph) -> usize {
    let rank = initial_ranks(mol);
    (0..mol.atom_count())
        .filter(|&i| {
            let a = mol.atom(i);
            let h = mol.total_hydrogens(i);
            let heavy: Vec<usize> = mol
                .neighbors(i)
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| !mol.atom(w).is_hydrogen())
                .collect();
            let total = heavy.len() + h;
            let valence = mol.valence(i);
            let shape_ok = match a.element {
                CARBON => total == 4 && a.charge == 0,
                NITROGEN => total == 4 && a.charge == 1,
                PHOSPHORUS => total == 4,
                SULFUR => (total == 3 && valence == 4) || (total == 3 && a.charge == 1),
                _ => false,
            };
            if !shape_ok || h > 1 || a.aromatic {
                return false;
            }
            let mut classes: Vec<usize> = heavy.iter().map(|&w| rank[w]).collect();
            classes.sort_unstable();
            classes.windows(2).all(|w| w[0] != w[1])
        })
        .count()
}

pub fn sa_score_with(mol: &MolGraph, table: &FragmentTable) -> Result<f64, DescriptorError> {
    if table.is_empty() {
        return Err(DescriptorError::MissingFragmentTable("empty table".into()));
    }
    let counts = identifier_counts(mol, FRAGMENT_RADIUS);
    let n_atoms = mol.atoms().iter().filter(|a| !a.is_hydrogen()).count() as f64;
    if counts.is_empty() {
        return Ok(10.0);
    }
    let mut score1 = 0.0;
    let mut nf = 0.0;
    for (&id, &c) in &counts {
        nf += c as f64;
        score1 += table.score(id).unwrap_or(UNKNOWN_FRAGMENT) * c as f64;
    }
    score1 /= nf;

    let (spiro, bridge) = spiro_and_bridgeheads(mol);
    let chiral = stereocentre_count(mol) as f64;
    let macrocycle = if mol.rings().iter().any(|r| r.len() > 8) {
        2f64.log10()
    } else {
        0.0
    };
    let size = n_atoms.powf(1.005) - n_atoms;
    let score2 =
        -size - (chiral + 1.0).log10() - (spiro as f64 + 1.0).log10() - (bridge as f64 + 1.0).log10() - macrocycle;
    let n_bits = counts.len() as f64;
    let score3 = if n_atoms > n_bits {
        0.5 * (n_atoms / n_bits).ln()
    } else {
        0.0
    };
    let raw = score1 + score2 + score3;
    let (lo, hi) = (-4.0, 2.5);
    let mut s = 11.0 - (raw - lo + 1.0) / (hi - lo) * 9.0;
    if s > 8.0 {
        s = 8.0 + (s - 8.0).ln();
    }
    Ok(s.clamp(1.0, 10.0))
}

/// SA score against the bundled fragment table.
pub fn sa_score(mol: &MolGraph) -> Result<f64, DescriptorError> {
    sa_score_with(mol, FragmentTable::bundled())
}
