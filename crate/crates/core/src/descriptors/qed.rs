//! Quantitative estimate of drug-likeness: weighted geometric mean of eight
//! asymmetric-sigmoid desirability functions.

use std::sync::OnceLock;

use super::{crippen, molecular_weight, qed_donor_count, rotatable_bonds, tpsa, DescriptorError};
use crate::smiles::query::{Query, Target};
use crate::smiles::{rings, MolGraph};

const ALERTS: &str = include_str!("../../data/qed_alerts.txt");
const ACCEPTORS: &str = include_str!("../../data/qed_acceptors.txt");
const ALIPHATIC_RING_ATOM: &str = "[$([A;R][!a])]";

/// Desirability function parameters (A, B, C, D, E, F, DMAX).
#[derive(Debug, Clone, Copy)]
pub struct AdsParameter {
    pub a: f64,
    pub b: f64,
    pub c: f64,
    pub d: f64,
    pub e: f64,
    pub f: f64,
    pub dmax: f64,
}

const fn p(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, dmax: f64) -> AdsParameter {
    AdsParameter { a, b, c, d, e, f, dmax }
}

/// Order: MW, ALOGP, HBA, HBD, PSA, ROTB, AROM, ALERTS.
pub const ADS_PARAMETERS: [AdsParameter; 8] = [
    p(2.817065973, 392.5754953, 290.7489764, 2.419764353, 49.22325677, 65.37051707, 104.9805561),
    p(3.172690585, 137.8624751, 2.534937431, 4.581497897, 0.822739154, 0.576295591, 131.3186604),
    p(2.948620388, 160.4605972, 3.615294657, 4.435986202, 0.290141953, 1.300669958, 148.7763046),
    p(1.618662227, 1010.051101, 0.985094388, 0.000000001, 0.713820843, 0.920922555, 258.1632616),
    p(1.876861559, 125.2232657, 62.90773554, 87.83366614, 12.01999824, 28.51324732, 104.5686167),
    p(0.010000000, 272.4121427, 2.558379970, 1.565547684, 1.271567166, 2.758063707, 105.4420403),
    p(3.217788970, 957.7374108, 2.274627939, 0.000000001, 1.317690384, 0.375760881, 312.3372610),
    p(0.010000000, 1199.094025, -0.09002883, 0.000000001, 0.185904477, 0.875193782, 417.7253140),
];

pub const WEIGHT_MEAN: [f64; 8] = [0.66, 0.46, 0.05, 0.61, 0.06, 0.65, 0.48, 0.95];

pub fn ads(x: f64, p: &AdsParameter) -> f64 {
    let exp1 = 1.0 + (-(x - p.c + p.d / 2.0) / p.e).exp();
    let exp2 = 1.0 + (-(x - p.c - p.d / 2.0) / p.f).exp();
    (p.a + p.b / exp1 * (1.0 - 1.0 / exp2)) / p.dmax
}

fn pattern_list(text: &str) -> Vec<Query> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| Query::parse(l.trim()).unwrap_or_else(|e| panic!("qed table: {e}")))
        .collect()
}

fn alerts() -> &'static [Query] {
    static Q: OnceLock<Vec<Query>> = OnceLock::new();
    Q.get_or_init(|| pattern_list(ALERTS))
}

fn acceptors() -> &'static [Query] {
    static Q: OnceLock<Vec<Query>> = OnceLock::new();
    Q.get_or_init(|| pattern_list(ACCEPTORS))
}

fn aliphatic_ring_atom() -> &'static Query {
    static Q: OnceLock<Query> = OnceLock::new();
    Q.get_or_init(|| Query::parse(ALIPHATIC_RING_ATOM).unwrap())
}

/// Acceptor count: matches of every acceptor pattern, summed.
pub fn acceptor_count(mol: &MolGraph) -> usize {
    let t = Target::new(mol);
    acceptors().iter().map(|q| q.count_unique_matches(&t)).sum()
}

/// Number of structural alert patterns present.
pub fn alert_count(mol: &MolGraph) -> usize {
    let t = Target::new(mol);
    alerts().iter().filter(|q| q.has_match(&t)).count()
}

/// Ring count left after deleting aliphatic ring atoms that have a
/// non-aromatic neighbour.
pub fn aromatic_ring_estimate(mol: &MolGraph) -> usize {
    let t = Target::new(mol);
    let q = aliphatic_ring_atom();
    let keep: Vec<bool> = (0..mol.atom_count()).map(|i| !q.matches_at(&t, i)).collect();
    let mut map = vec![usize::MAX; mol.atom_count()];
    let mut n = 0;
    for i in 0..mol.atom_count() {
        if keep[i] {
            map[i] = n;
            n += 1;
        }
    }
    let bonds: Vec<_> = mol
        .bonds()
        .iter()
        .filter(|b| keep[b.a] && keep[b.b])
        .map(|b| crate::smiles::Bond {
            a: map[b.a],
            b: map[b.b],
            ..b.clone()
        })
        .collect();
    rings::cyclomatic_number(n, &bonds)
}

/// The eight raw QED properties in the order of [`ADS_PARAMETERS`].
pub fn properties(mol: &MolGraph) -> Result<[f64; 8], DescriptorError> {
    Ok([
        molecular_weight(mol),
        crippen::crippen_logp(mol)?,
        acceptor_count(mol) as f64,
        qed_donor_count(mol) as f64,
        tpsa::tpsa(mol),
        rotatable_bonds(mol) as f64,
        aromatic_ring_estimate(mol) as f64,
        alert_count(mol) as f64,
    ])
}

pub fn qed_from_properties(props: &[f64; 8]) -> f64 {
    let total: f64 = WEIGHT_MEAN.iter().sum();
    let t: f64 = props
        .iter()
        .zip(ADS_PARAMETERS.iter())
        .zip(WEIGHT_MEAN.iter())
        .map(|((&x, p), &w)| w * ads(x, p).ln())
        .sum();
    (t / total).exp()
}

pub fn qed(mol: &MolGraph) -> Result<f64, DescriptorError> {
    Ok(qed_from_properties(&properties(mol)?))
}
