//! Wildman-Crippen atom-contribution logP.

use std::sync::OnceLock;

use super::DescriptorError;
use crate::smiles::query::{Query, Target};
use crate::smiles::MolGraph;

const TABLE: &str = include_str!("../../data/crippen.txt");

pub struct CrippenRule {
    pub id: String,
    pub query: Query,
    pub logp: f64,
    pub mr: Option<f64>,
}

fn parse_table(text: &str) -> Vec<CrippenRule> {
    text.lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            CrippenRule {
                id: f[0].to_string(),
                query: Query::parse(f[1]).unwrap_or_else(|e| panic!("crippen table: {e}")),
                logp: f[2].parse().expect("crippen logP column"),
                mr: f.get(3).and_then(|v| v.trim().parse().ok()),
            }
        })
        .collect()
}

pub fn rules() -> &'static [CrippenRule] {
    static RULES: OnceLock<Vec<CrippenRule>> = OnceLock::new();
    RULES.get_or_init(|| parse_table(TABLE))
}

/// Atom type id and logP contribution for every atom of the hydrogen-expanded
/// graph (heavy atoms first, in input order, then hydrogens).
pub fn atom_contributions(mol: &MolGraph) -> Result<Vec<(&'static str, f64)>, DescriptorError> {
    let full = mol.with_explicit_hydrogens();
    let target = Target::new(&full);
    (0..full.atom_count())
        .map(|i| {
            rules()
                .iter()
                .find(|r| r.query.matches_at(&target, i))
                .map(|r| (r.id.as_str(), r.logp))
                .ok_or_else(|| DescriptorError::UntypedAtom {
                    atom: i,
                    symbol: full.atom(i).symbol().to_string(),
                })
        })
        .collect()
}

/// Table values have at most five decimals, so the sum is taken in exact
/// integer units and does not depend on atom order.
pub fn crippen_logp(mol: &MolGraph) -> Result<f64, DescriptorError> {
    let units: i64 = atom_contributions(mol)?
        .iter()
        .map(|(_, v)| (v * LOGP_SCALE).round() as i64)
        .sum();
    Ok(units as f64 / LOGP_SCALE)
}

const LOGP_SCALE: f64 = 1e5;
