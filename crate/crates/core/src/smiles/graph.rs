use super::element;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BondOrder {
    Single,
    Double,
    Triple,
    Aromatic,
}

impl BondOrder {
    /// Contribution to the sigma + pi valence of either endpoint, with aromatic
    /// bonds counted as one (their pi share is tracked by kekulization).
    pub fn sigma_valence(self) -> u8 {
        match self {
            BondOrder::Single | BondOrder::Aromatic => 1,
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
        }
    }
}

/// Tetrahedral/allene chirality marks are retained but do not take part in any
/// descriptor or matching.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub enum Chirality {
    #[default]
    None,
    Anticlockwise,
    Clockwise,
    /// Any other `@`-class (`@TH2`, `@SP1`, ...) kept verbatim.
    Other(String),
}

/// Directional single bond marks (`/` and `\`).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BondDirection {
    Up,
    Down,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Atom {
    pub element: u8,
    pub charge: i8,
    pub isotope: Option<u16>,
    pub aromatic: bool,
    /// Attached hydrogens not present as graph atoms (implicit + bracket H).
    pub explicit_h: u8,
    /// Written in brackets in the source; its hydrogen count is literal.
    pub bracket: bool,
    pub chirality: Chirality,
    pub index: usize,
}

impl Atom {
    pub fn symbol(&self) -> &'static str {
        element::symbol(self.element)
    }

    pub fn is_hydrogen(&self) -> bool {
        self.element == element::HYDROGEN
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Bond {
    pub a: usize,
    pub b: usize,
    pub order: BondOrder,
    /// Localized order (1, 2 or 3); for aromatic bonds this is the Kekulé
    /// assignment chosen during sanitization.
    pub kekule: u8,
    pub direction: Option<BondDirection>,
}

impl Bond {
    pub fn other(&self, atom: usize) -> usize {
        if self.a == atom {
            self.b
        } else {
            self.a
        }
    }
}

/// A sanitized molecular graph. Instances are only produced by the SMILES
/// parser (or derived from a sanitized graph), so every instance satisfies
/// the valence, ring and aromaticity invariants.
#[derive(Debug, Clone, PartialEq)]
pub struct MolGraph {
    pub(crate) atoms: Vec<Atom>,
    pub(crate) bonds: Vec<Bond>,
    /// Smallest set of smallest rings, atom indices in ring order.
    pub(crate) rings: Vec<Vec<usize>>,
    pub(crate) adjacency: Vec<Vec<(usize, usize)>>,
    pub(crate) ring_bond: Vec<bool>,
    pub(crate) atom_ring_count: Vec<u8>,
}

impl MolGraph {
    pub(crate) fn assemble(atoms: Vec<Atom>, bonds: Vec<Bond>, rings: Vec<Vec<usize>>) -> MolGraph {
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, b) in bonds.iter().enumerate() {
            adjacency[b.a].push((b.b, i));
            adjacency[b.b].push((b.a, i));
        }
        let mut ring_bond = vec![false; bonds.len()];
        let mut atom_ring_count = vec![0u8; atoms.len()];
        for ring in &rings {
            for k in 0..ring.len() {
                let (x, y) = (ring[k], ring[(k + 1) % ring.len()]);
                atom_ring_count[x] = atom_ring_count[x].saturating_add(1);
                if let Some(&(_, bi)) = adjacency[x].iter().find(|(n, _)| *n == y) {
                    ring_bond[bi] = true;
                }
            }
        }
        MolGraph {
            atoms,
            bonds,
            rings,
            adjacency,
            ring_bond,
            atom_ring_count,
        }
    }

    pub fn atoms(&self) -> &[Atom] {
        &self.atoms
    }

    pub fn bonds(&self) -> &[Bond] {
        &self.bonds
    }

    pub fn atom(&self, i: usize) -> &Atom {
        &self.atoms[i]
    }

    pub fn bond(&self, i: usize) -> &Bond {
        &self.bonds[i]
    }

    pub fn rings(&self) -> &[Vec<usize>] {
        &self.rings
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    pub fn heavy_atom_count(&self) -> usize {
        self.atoms.iter().filter(|a| !a.is_hydrogen()).count()
    }

    /// `(neighbor, bond index)` pairs.
    pub fn neighbors(&self, atom: usize) -> &[(usize, usize)] {
        &self.adjacency[atom]
    }

    pub fn degree(&self, atom: usize) -> usize {
        self.adjacency[atom].len()
    }

    pub fn bond_between(&self, a: usize, b: usize) -> Option<usize> {
        self.adjacency[a].iter().find(|(n, _)| *n == b).map(|&(_, bi)| bi)
    }

    pub fn is_ring_atom(&self, atom: usize) -> bool {
        self.atom_ring_count[atom] > 0
    }

    pub fn is_ring_bond(&self, bond: usize) -> bool {
        self.ring_bond[bond]
    }

    /// Number of SSSR rings containing the atom.
    pub fn ring_count_of(&self, atom: usize) -> usize {
        self.atom_ring_count[atom] as usize
    }

    /// Total hydrogens: attached counts plus explicit hydrogen neighbours.
    pub fn total_hydrogens(&self, atom: usize) -> usize {
        self.atoms[atom].explicit_h as usize
            + self.adjacency[atom]
                .iter()
                .filter(|(n, _)| self.atoms[*n].is_hydrogen())
                .count()
    }

    /// Sum of localized bond orders plus attached hydrogens.
    pub fn valence(&self, atom: usize) -> usize {
        self.adjacency[atom]
            .iter()
            .map(|&(_, bi)| self.bonds[bi].kekule as usize)
            .sum::<usize>()
            + self.atoms[atom].explicit_h as usize
    }

    /// Connected components as sorted atom-index lists, ordered by first atom.
    pub fn components(&self) -> Vec<Vec<usize>> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut out = Vec::new();
        for start in 0..n {
            if seen[start] {
                continue;
            }
            let mut comp = vec![start];
            seen[start] = true;
            let mut i = 0;
            while i < comp.len() {
                let v = comp[i];
                i += 1;
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        comp.push(w);
                    }
                }
            }
            comp.sort_unstable();
            out.push(comp);
        }
        out
    }

    /// Relabel atoms: atom `i` of the result is atom `order[i]` of `self`.
    /// Bond list order follows the new atom order. Used to test permutation
    /// invariance.
    pub fn permute_atoms(&self, order: &[usize]) -> MolGraph {
        assert_eq!(order.len(), self.atoms.len(), "permutation length mismatch");
        let mut inverse = vec![usize::MAX; order.len()];
        for (new, &old) in order.iter().enumerate() {
            inverse[old] = new;
        }
        let atoms = order
            .iter()
            .enumerate()
            .map(|(new, &old)| Atom {
                index: new,
                ..self.atoms[old].clone()
            })
            .collect();
        let mut bonds: Vec<Bond> = self
            .bonds
            .iter()
            .map(|b| Bond {
                a: inverse[b.a],
                b: inverse[b.b],
                ..b.clone()
            })
            .collect();
        bonds.sort_by_key(|b| (b.a.min(b.b), b.a.max(b.b)));
        let rings = self
            .rings
            .iter()
            .map(|r| r.iter().map(|&a| inverse[a]).collect())
            .collect();
        MolGraph::assemble(atoms, bonds, rings)
    }

    /// Induced subgraph on `keep` (in the given order). Ring data is recomputed;
    /// aromatic flags are kept as-is, so the result is meant for use as a
    /// substructure pattern rather than as a sanitized molecule.
    pub fn induced_subgraph(&self, keep: &[usize]) -> MolGraph {
        let mut map = vec![usize::MAX; self.atoms.len()];
        for (new, &old) in keep.iter().enumerate() {
            map[old] = new;
        }
        let atoms = keep
            .iter()
            .enumerate()
            .map(|(new, &old)| Atom {
                index: new,
                ..self.atoms[old].clone()
            })
            .collect::<Vec<_>>();
        let bonds = self
            .bonds
            .iter()
            .filter(|b| map[b.a] != usize::MAX && map[b.b] != usize::MAX)
            .map(|b| Bond {
                a: map[b.a],
                b: map[b.b],
                ..b.clone()
            })
            .collect::<Vec<_>>();
        let rings = super::rings::sssr(atoms.len(), &bonds);
        MolGraph::assemble(atoms, bonds, rings)
    }

    /// Copy with every attached hydrogen turned into an explicit graph atom.
    /// Heavy atoms keep their indices; hydrogens are appended.
    pub fn with_explicit_hydrogens(&self) -> MolGraph {
        let mut atoms = self.atoms.clone();
        let mut bonds = self.bonds.clone();
        for i in 0..self.atoms.len() {
            let h = self.atoms[i].explicit_h;
            atoms[i].explicit_h = 0;
            for _ in 0..h {
                let idx = atoms.len();
                atoms.push(Atom {
                    element: element::HYDROGEN,
                    charge: 0,
                    isotope: None,
                    aromatic: false,
                    explicit_h: 0,
                    bracket: true,
                    chirality: Chirality::None,
                    index: idx,
                });
                bonds.push(Bond {
                    a: i,
                    b: idx,
                    order: BondOrder::Single,
                    kekule: 1,
                    direction: None,
                });
            }
        }
        MolGraph::assemble(atoms, bonds, self.rings.clone())
    }
}
