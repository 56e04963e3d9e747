//! Topological polar surface area from N and O fragment contributions.

use crate::smiles::element::{NITROGEN, OXYGEN};
use crate::smiles::{BondOrder, MolGraph};

fn in_three_ring(mol: &MolGraph, atom: usize) -> bool {
    mol.rings().iter().any(|r| r.len() == 3 && r.contains(&atom))
}

/// Contribution of one atom (zero for anything but N and O).
pub fn atom_contribution(mol: &MolGraph, atom: usize) -> f64 {
    let a = mol.atom(atom);
    if a.element != NITROGEN && a.element != OXYGEN {
        return 0.0;
    }
    let h = mol.total_hydrogens(atom) as i32;
    let chg = a.charge as i32;
    let (mut single, mut double, mut triple, mut arom, mut heavy) = (0, 0, 0, 0, 0);
    for &(w, bi) in mol.neighbors(atom) {
        if mol.atom(w).is_hydrogen() {
            continue;
        }
        heavy += 1;
        match mol.bond(bi).order {
            BondOrder::Single => single += 1,
            BondOrder::Double => double += 1,
            BondOrder::Triple => triple += 1,
            BondOrder::Aromatic => arom += 1,
        }
    }
    let ring3 = in_three_ring(mol, atom);
    let value = if a.element == NITROGEN {
        match heavy {
            1 => match (h, chg) {
                (0, 0) if triple == 1 => Some(23.79),
                (1, 0) if double == 1 => Some(23.85),
                (2, 0) if single == 1 => Some(26.02),
                (2, 1) if double == 1 => Some(25.59),
                (3, 1) if single == 1 => Some(27.64),
                _ => None,
            },
            2 => match (h, chg) {
                (0, 0) if single == 1 && double == 1 => Some(12.36),
                (0, 0) if triple == 1 && double == 1 => Some(13.60),
                (1, 0) if single == 2 && ring3 => Some(21.94),
                (1, 0) if single == 2 => Some(12.03),
                (0, 1) if triple == 1 && single == 1 => Some(4.36),
                (1, 1) if double == 1 && single == 1 => Some(13.97),
                (2, 1) if single == 2 => Some(16.61),
                (0, 0) if arom == 2 => Some(12.89),
                (1, 0) if arom == 2 => Some(15.79),
                (1, 1) if arom == 2 => Some(14.14),
                _ => None,
            },
            3 => match (h, chg) {
                (0, 0) if single == 3 && ring3 => Some(3.01),
                (0, 0) if single == 3 => Some(3.24),
                (0, 0) if single == 1 && double == 2 => Some(11.68),
                (0, 1) if single == 2 && double == 1 => Some(3.01),
                (1, 1) if single == 3 => Some(4.44),
                (0, 0) if arom == 3 => Some(4.41),
                (0, 0) if single == 1 && arom == 2 => Some(4.93),
                (0, 0) if double == 1 && arom == 2 => Some(8.39),
                (0, 1) if arom == 3 => Some(4.10),
                (0, 1) if single == 1 && arom == 2 => Some(3.88),
                _ => None,
            },
            4 if h == 0 && chg == 1 && single == 4 => Some(0.0),
            _ => None,
        }
        .unwrap_or_else(|| (30.5 - 8.2 * heavy as f64 + 1.5 * h as f64).max(0.0))
    } else {
        match heavy {
            1 => match (h, chg) {
                (0, 0) if double == 1 => Some(17.07),
                (1, 0) if single == 1 => Some(20.23),
                (0, -1) if single == 1 => Some(23.06),
                _ => None,
            },
            2 => match (h, chg) {
                (0, 0) if single == 2 && ring3 => Some(12.53),
                (0, 0) if single == 2 => Some(9.23),
                (0, 0) if arom == 2 => Some(13.14),
                _ => None,
            },
            _ => None,
        }
        .unwrap_or_else(|| (28.5 - 8.6 * heavy as f64 + 1.5 * h as f64).max(0.0))
    };
    value
}

pub fn tpsa(mol: &MolGraph) -> f64 {
    (0..mol.atom_count()).map(|i| atom_contribution(mol, i)).sum()
}
