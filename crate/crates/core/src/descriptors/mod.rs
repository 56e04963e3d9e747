//! Physicochemical descriptors: molecular weight, Crippen logP, QED, SA score,
//! H-bond donor/acceptor counts, TPSA and aromatic ring count.

pub mod crippen;
pub mod qed;
pub mod sa;
pub mod tpsa;

use std::sync::OnceLock;

use thiserror::Error;

use crate::smiles::element::{self, NITROGEN, OXYGEN};
use crate::smiles::query::{Query, Target};
use crate::smiles::{BondOrder, MolGraph};

pub use crippen::crippen_logp;
pub use qed::qed;
pub use sa::{sa_score, sa_score_with, FragmentTable};
pub use tpsa::tpsa;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DescriptorError {
    #[error("no atom-type rule matches atom {atom} ({symbol})")]
    UntypedAtom { atom: usize, symbol: String },
    #[error("fragment frequency table unavailable: {0}")]
    MissingFragmentTable(String),
}

const QED_DONOR: &str = "[N&!H0&v3,N&!H0&+1&v4,O&H1&+0,S&H1&+0,n&H1&+0]";

const ROTATABLE: &str = "[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)&!$(C([CH3])([CH3])[CH3])\
&!$([CD3](=[N,O,S])-!@[#7,O,S!D1])&!$([#7,O,S!D1]-!@[CD3]=[N,O,S])&!$([CD3](=[N+])-!@[#7!D1])\
&!$([#7!D1]-!@[CD3]=[N+])]-,:;!@[!$(*#*)&!D1&!$(C(F)(F)F)&!$(C(Cl)(Cl)Cl)&!$(C(Br)(Br)Br)\
&!$(C([CH3])([CH3])[CH3])]";

fn cached(cell: &'static OnceLock<Query>, text: &str) -> &'static Query {
    cell.get_or_init(|| Query::parse(text).expect("built-in pattern"))
}

/// Average molecular weight, attached hydrogens included. Isotope-labelled
/// atoms use their mass number.
pub fn molecular_weight(mol: &MolGraph) -> f64 {
    let h = element::atomic_weight(element::HYDROGEN);
    mol.atoms()
        .iter()
        .map(|a| {
            let m = match a.isotope {
                Some(iso) => iso as f64,
                None => element::atomic_weight(a.element),
            };
            m + a.explicit_h as f64 * h
        })
        .sum()
}

/// N and O atoms carrying at least one hydrogen.
pub fn hbd_count(mol: &MolGraph) -> usize {
    (0..mol.atom_count())
        .filter(|&i| {
            let e = mol.atom(i).element;
            (e == NITROGEN || e == OXYGEN) && mol.total_hydrogens(i) > 0
        })
        .count()
}

/// Donor count under the QED donor pattern (also admits thiols).
pub fn qed_donor_count(mol: &MolGraph) -> usize {
    static Q: OnceLock<Query> = OnceLock::new();
    cached(&Q, QED_DONOR).count_unique_matches(&Target::new(mol))
}

/// Acceptor count: N and O acceptors excluding pyrrole-type N and amide and
/// nitro oxygens, using the QED acceptor pattern set.
pub fn hba_count(mol: &MolGraph) -> usize {
    qed::acceptor_count(mol)
}

/// Strict rotatable bond count: acyclic single bonds between non-terminal
/// atoms, excluding amide C-N, triple-bond neighbours and CX3/tert-butyl rotors.
pub fn rotatable_bonds(mol: &MolGraph) -> usize {
    static Q: OnceLock<Query> = OnceLock::new();
    cached(&Q, ROTATABLE).count_unique_matches(&Target::new(mol))
}

/// SSSR rings whose bonds are all aromatic.
pub fn aromatic_ring_count(mol: &MolGraph) -> usize {
    mol.rings()
        .iter()
        .filter(|r| {
            (0..r.len()).all(|k| {
                mol.bond_between(r[k], r[(k + 1) % r.len()])
                    .is_some_and(|b| mol.bond(b).order == BondOrder::Aromatic)
            })
        })
        .count()
}

#[derive(Debug, Clone, Copy, PartialEq, serde::Serialize, serde::Deserialize)]
pub struct DescriptorSet {
    pub mw: f64,
    pub logp: f64,
    pub qed: f64,
    pub sa: f64,
    pub hba: usize,
    pub hbd: usize,
    pub tpsa: f64,
    pub arom_rings: usize,
}

pub fn compute_descriptors(mol: &MolGraph) -> Result<DescriptorSet, DescriptorError> {
    compute_descriptors_with(mol, FragmentTable::bundled())
}

pub fn compute_descriptors_with(mol: &MolGraph, table: &FragmentTable) -> Result<DescriptorSet, DescriptorError> {
    let props = qed::properties(mol)?;
    Ok(DescriptorSet {
        mw: props[0],
        logp: props[1],
        qed: qed::qed_from_properties(&props),
        sa: sa_score_with(mol, table)?,
        hba: props[2] as usize,
        hbd: hbd_count(mol),
        tpsa: props[4],
        arom_rings: aromatic_ring_count(mol),
    })
}
