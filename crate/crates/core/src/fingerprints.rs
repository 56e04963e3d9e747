//! Morgan (ECFP-style) circular fingerprints and Tanimoto similarity.

use std::collections::BTreeMap;

use thiserror::Error;

use crate::smiles::{BondOrder, MolGraph};

pub const DEFAULT_RADIUS: u32 = 2;
pub const DEFAULT_NBITS: u32 = 2048;
pub const ALLOWED_NBITS: [u32; 4] = [512, 1024, 2048, 4096];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FingerprintError {
    #[error("incompatible fingerprints: ({0}, {1}) vs ({2}, {3})")]
    IncompatibleFingerprints(u32, u32, u32, u32),
    #[error("fingerprint size {0} not one of 512, 1024, 2048, 4096")]
    UnsupportedSize(u32),
}

/// Binary folded fingerprint.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Fingerprint {
    words: Vec<u64>,
    radius: u32,
    nbits: u32,
}

impl Fingerprint {
    pub fn from_bits(bits: impl IntoIterator<Item = u32>, radius: u32, nbits: u32) -> Result<Self, FingerprintError> {
        if !ALLOWED_NBITS.contains(&nbits) {
            return Err(FingerprintError::UnsupportedSize(nbits));
        }
        let mut words = vec![0u64; nbits as usize / 64];
        for b in bits {
            let b = b % nbits;
            words[b as usize / 64] |= 1 << (b % 64);
        }
        Ok(Fingerprint { words, radius, nbits })
    }

    pub fn radius(&self) -> u32 {
        self.radius
    }

    pub fn nbits(&self) -> u32 {
        self.nbits
    }

    pub fn count_ones(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn contains(&self, bit: u32) -> bool {
        bit < self.nbits && self.words[bit as usize / 64] >> (bit % 64) & 1 == 1
    }

    /// Set bit indices in increasing order.
    pub fn bits(&self) -> Vec<u32> {
        let mut out = Vec::new();
        for (i, &w) in self.words.iter().enumerate() {
            let mut w = w;
            while w != 0 {
                let t = w.trailing_zeros();
                out.push(i as u32 * 64 + t);
                w &= w - 1;
            }
        }
        out
    }
}

/// 32-bit hash combination; fixed constants so identifiers are identical on
/// every platform and run.
#[inline]
fn combine(seed: u32, v: u32) -> u32 {
    seed ^ v
        .wrapping_add(0x9e37_79b9)
        .wrapping_add(seed << 6)
        .wrapping_add(seed >> 2)
}

fn hash_slice(values: &[u32]) -> u32 {
    values.iter().fold(0x811c_9dc5, |s, &v| combine(s, v))
}

/// Initial atom identifier: element, charge, degree, attached H, ring flag.
fn initial_identifier(mol: &MolGraph, i: usize) -> u32 {
    let a = mol.atom(i);
    hash_slice(&[
        a.element as u32,
        a.charge as i32 as u32,
        mol.degree(i) as u32,
        mol.total_hydrogens(i) as u32,
        mol.is_ring_atom(i) as u32,
    ])
}

fn bond_code(order: BondOrder) -> u32 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// One circular environment: identifier, centre atom and radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub struct Environment {
    pub identifier: u32,
    pub atom: usize,
    pub radius: u32,
}

/// All unfolded environments up to `radius`. Environments covering the same
/// bond set as an earlier one are dropped, and atoms whose environment stops
/// growing stop contributing.
pub fn environments(mol: &MolGraph, radius: u32) -> Vec<Environment> {
    let n = mol.atom_count();
    let nb = mol.bonds().len();
    let words = nb.div_ceil(64).max(1);
    let mut ids: Vec<u32> = (0..n).map(|i| initial_identifier(mol, i)).collect();
    let mut out: Vec<Environment> = (0..n)
        .map(|i| Environment {
            identifier: ids[i],
            atom: i,
            radius: 0,
        })
        .collect();
    let mut cover: Vec<Vec<u64>> = vec![vec![0; words]; n];
    let mut seen: std::collections::HashSet<Vec<u64>> = Default::default();
    let mut alive = vec![true; n];
    for r in 1..=radius {
        let mut next_ids = ids.clone();
        let mut next_cover = cover.clone();
        let mut round: Vec<(Vec<u64>, u32, usize)> = Vec::new();
        for i in 0..n {
            let mut pairs: Vec<(u32, u32)> = mol
                .neighbors(i)
                .iter()
                .map(|&(w, bi)| (bond_code(mol.bond(bi).order), ids[w]))
                .collect();
            pairs.sort_unstable();
            let mut v = vec![r, ids[i]];
            for (b, id) in pairs {
                v.push(b);
                v.push(id);
            }
            next_ids[i] = hash_slice(&v);
            for &(w, bi) in mol.neighbors(i) {
                next_cover[i][bi / 64] |= 1 << (bi % 64);
                for k in 0..words {
                    next_cover[i][k] |= cover[w][k];
                }
            }
            if next_cover[i] == cover[i] {
                alive[i] = false;
            }
            if alive[i] {
                round.push((next_cover[i].clone(), next_ids[i], i));
            }
        }
        round.sort();
        let mut prev: Option<&Vec<u64>> = None;
        for (c, id, i) in &round {
            let duplicate = prev == Some(c) || seen.contains(c);
            prev = Some(c);
            if duplicate {
                continue;
            }
            out.push(Environment {
                identifier: *id,
                atom: *i,
                radius: r,
            });
        }
        for (c, _, _) in round {
            seen.insert(c);
        }
        ids = next_ids;
        cover = next_cover;
    }
    out
}

/// Sorted multiset of unfolded identifiers up to `radius`.
pub fn unfolded_identifiers(mol: &MolGraph, radius: u32) -> Vec<u32> {
    let mut v: Vec<u32> = environments(mol, radius).iter().map(|e| e.identifier).collect();
    v.sort_unstable();
    v
}

/// Identifier counts up to `radius`.
pub fn identifier_counts(mol: &MolGraph, radius: u32) -> BTreeMap<u32, u32> {
    let mut m = BTreeMap::new();
    for e in environments(mol, radius) {
        *m.entry(e.identifier).or_insert(0) += 1;
    }
    m
}

pub fn morgan_fingerprint(mol: &MolGraph, radius: u32, nbits: u32) -> Result<Fingerprint, FingerprintError> {
    Fingerprint::from_bits(environments(mol, radius).iter().map(|e| e.identifier), radius, nbits)
}

/// Fingerprint with the default parameters (radius 2, 2048 bits).
pub fn default_fingerprint(mol: &MolGraph) -> Fingerprint {
    morgan_fingerprint(mol, DEFAULT_RADIUS, DEFAULT_NBITS).expect("default size is supported")
}

/// |a ∩ b| / |a ∪ b|, 1.0 when both are empty.
pub fn tanimoto(a: &Fingerprint, b: &Fingerprint) -> Result<f64, FingerprintError> {
    if a.nbits != b.nbits || a.radius != b.radius {
        return Err(FingerprintError::IncompatibleFingerprints(a.radius, a.nbits, b.radius, b.nbits));
    }
    Ok(tanimoto_words(&a.words, &b.words))
}

pub(crate) fn tanimoto_words(a: &[u64], b: &[u64]) -> f64 {
    let (mut inter, mut union) = (0u32, 0u32);
    for (x, y) in a.iter().zip(b) {
        inter += (x & y).count_ones();
        union += (x | y).count_ones();
    }
    if union == 0 {
        1.0
    } else {
        inter as f64 / union as f64
    }
}
