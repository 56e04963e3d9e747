//! Canonical SMILES via iterative invariant refinement plus
//! individualization-refinement tie breaking.

use std::fmt;

use super::graph::{BondOrder, MolGraph};
use super::writer::write_ranked;

/// Leaves explored by the tie-breaking search before it falls back to the
/// first branch at every level.
const LEAF_BUDGET: usize = 2000;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, serde::Serialize, serde::Deserialize)]
#[serde(into = "String", try_from = "String")]
pub struct CanonicalSmiles(String);

impl From<CanonicalSmiles> for String {
    fn from(c: CanonicalSmiles) -> String {
        c.0
    }
}

/// Deserialization re-canonicalizes, so stored strings need not be canonical.
impl TryFrom<String> for CanonicalSmiles {
    type Error = super::SmilesError;
    fn try_from(s: String) -> Result<Self, Self::Error> {
        super::canonical_smiles(&s)
    }
}

impl CanonicalSmiles {
    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn into_string(self) -> String {
        self.0
    }
}

impl fmt::Display for CanonicalSmiles {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl AsRef<str> for CanonicalSmiles {
    fn as_ref(&self) -> &str {
        &self.0
    }
}

fn bond_code(order: BondOrder) -> u8 {
    match order {
        BondOrder::Single => 1,
        BondOrder::Double => 2,
        BondOrder::Triple => 3,
        BondOrder::Aromatic => 4,
    }
}

/// Initial atom invariant. Also used by the fingerprint module.
pub(crate) fn atom_invariant(graph: &MolGraph, i: usize) -> [i64; 7] {
    let a = graph.atom(i);
    [
        a.element as i64,
        a.isotope.map_or(0, |v| v as i64),
        a.charge as i64,
        graph.degree(i) as i64,
        a.explicit_h as i64,
        graph.is_ring_atom(i) as i64,
        a.aromatic as i64,
    ]
}

/// Convert arbitrary sortable keys into ranks: rank = number of atoms with a
/// strictly smaller key.
fn ranks_from_keys<K: Ord>(keys: &[K]) -> Vec<usize> {
    let mut order: Vec<usize> = (0..keys.len()).collect();
    order.sort_by(|&a, &b| keys[a].cmp(&keys[b]));
    let mut rank = vec![0; keys.len()];
    for k in 1..order.len() {
        rank[order[k]] = if keys[order[k]] == keys[order[k - 1]] {
            rank[order[k - 1]]
        } else {
            k
        };
    }
    rank
}

fn distinct(rank: &[usize]) -> usize {
    let mut seen = vec![false; rank.len()];
    rank.iter().filter(|&&r| !std::mem::replace(&mut seen[r], true)).count()
}

/// Refine ranks by neighbourhood until the partition stops splitting.
fn refine(graph: &MolGraph, mut rank: Vec<usize>) -> Vec<usize> {
    let mut classes = distinct(&rank);
    loop {
        let keys: Vec<(usize, Vec<(usize, u8)>)> = (0..rank.len())
            .map(|v| {
                let mut nb: Vec<(usize, u8)> = graph
                    .neighbors(v)
                    .iter()
                    .map(|&(w, bi)| (rank[w], bond_code(graph.bond(bi).order)))
                    .collect();
                nb.sort_unstable();
                (rank[v], nb)
            })
            .collect();
        let next = ranks_from_keys(&keys);
        let c = distinct(&next);
        rank = next;
        if c == classes {
            return rank;
        }
        classes = c;
    }
}

pub(crate) fn initial_ranks(graph: &MolGraph) -> Vec<usize> {
    let keys: Vec<[i64; 7]> = (0..graph.atom_count()).map(|i| atom_invariant(graph, i)).collect();
    refine(graph, ranks_from_keys(&keys))
}

struct Search<'a> {
    graph: &'a MolGraph,
    leaves: usize,
    best: Option<String>,
}

impl Search<'_> {
    fn run(&mut self, rank: Vec<usize>) {
        let n = rank.len();
        // first (lowest-rank) non-singleton cell
        let mut counts = vec![0usize; n];
        for &r in &rank {
            counts[r] += 1;
        }
        let cell = (0..n).find(|&r| counts[r] > 1);
        let Some(cell) = cell else {
            self.leaves += 1;
            let s = write_ranked(self.graph, &rank);
            if self.best.as_ref().is_none_or(|b| s < *b) {
                self.best = Some(s);
            }
            return;
        };
        let members: Vec<usize> = (0..n).filter(|&v| rank[v] == cell).collect();
        for (k, &x) in members.iter().enumerate() {
            if k > 0 && self.leaves >= LEAF_BUDGET {
                break;
            }
            let mut r = rank.clone();
            for &y in &members {
                if y != x {
                    r[y] = cell + 1;
                }
            }
            let r = refine(self.graph, r);
            self.run(r);
        }
    }
}

pub fn canonicalize(graph: &MolGraph) -> CanonicalSmiles {
    if graph.atom_count() == 0 {
        return CanonicalSmiles(String::new());
    }
    let mut search = Search {
        graph,
        leaves: 0,
        best: None,
    };
    search.run(initial_ranks(graph));
    CanonicalSmiles(search.best.unwrap())
}
