//! Subgraph monomorphism search for plain-SMILES patterns.

use super::graph::{Atom, MolGraph};

/// Pattern atoms match on element and aromaticity. A pattern atom written in
/// brackets additionally requires at least its hydrogen count and exactly its
/// charge.
fn atom_compatible(p: &Atom, t: &Atom, t_hydrogens: usize) -> bool {
    if p.element != t.element || p.aromatic != t.aromatic {
        return false;
    }
    if p.bracket && (t_hydrogens < p.explicit_h as usize || p.charge != t.charge) {
        return false;
    }
    true
}

/// Order pattern atoms so that every atom after the first of its component is
/// adjacent to an earlier one.
fn match_order(pattern: &MolGraph) -> Vec<(usize, Option<usize>)> {
    let n = pattern.atom_count();
    let mut seen = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut starts: Vec<usize> = (0..n).collect();
    // rarer elements and higher degree first narrow the search fastest
    starts.sort_by_key(|&v| {
        let a = pattern.atom(v);
        (a.element == 6, std::cmp::Reverse(pattern.degree(v)), v)
    });
    for &s in &starts {
        if seen[s] {
            continue;
        }
        seen[s] = true;
        order.push((s, None));
        let mut i = order.len() - 1;
        while i < order.len() {
            let v = order[i].0;
            i += 1;
            for &(w, _) in pattern.neighbors(v) {
                if !seen[w] {
                    seen[w] = true;
                    order.push((w, Some(v)));
                }
            }
        }
    }
    order
}

struct State<'a> {
    pattern: &'a MolGraph,
    target: &'a MolGraph,
    order: Vec<(usize, Option<usize>)>,
    map: Vec<usize>,
    used: Vec<bool>,
}

impl State<'_> {
    fn feasible(&self, p: usize, t: usize) -> bool {
        if self.used[t]
            || !atom_compatible(self.pattern.atom(p), self.target.atom(t), self.target.total_hydrogens(t))
            || self.target.degree(t) < self.pattern.degree(p)
        {
            return false;
        }
        for &(pw, pb) in self.pattern.neighbors(p) {
            let tw = self.map[pw];
            if tw == usize::MAX {
                continue;
            }
            match self.target.bond_between(t, tw) {
                Some(tb) if self.target.bond(tb).order == self.pattern.bond(pb).order => {}
                _ => return false,
            }
        }
        true
    }

    fn extend(&mut self, depth: usize) -> bool {
        if depth == self.order.len() {
            return true;
        }
        let (p, anchor) = self.order[depth];
        let candidates: Vec<usize> = match anchor {
            Some(a) => self.target.neighbors(self.map[a]).iter().map(|&(w, _)| w).collect(),
            None => (0..self.target.atom_count()).collect(),
        };
        for t in candidates {
            if self.feasible(p, t) {
                self.map[p] = t;
                self.used[t] = true;
                if self.extend(depth + 1) {
                    return true;
                }
                self.map[p] = usize::MAX;
                self.used[t] = false;
            }
        }
        false
    }
}

/// True iff `pattern` embeds into `target` as a (not necessarily induced)
/// subgraph preserving element, aromaticity and bond order.
pub fn substructure_match(pattern: &MolGraph, target: &MolGraph) -> bool {
    if pattern.atom_count() > target.atom_count() || pattern.bonds().len() > target.bonds().len() {
        return false;
    }
    if pattern.atom_count() == 0 {
        return true;
    }
    let mut state = State {
        pattern,
        target,
        order: match_order(pattern),
        map: vec![usize::MAX; pattern.atom_count()],
        used: vec![false; target.atom_count()],
    };
    state.extend(0)
}
