//! Turns a raw parse into a sanitized [`MolGraph`]: implicit hydrogens,
//! ring perception, kekulization, valence checks and aromaticity perception.

use super::element;
use super::error::SmilesError;
use super::graph::{Atom, Bond, BondOrder, MolGraph};
use super::parser::RawMolecule;
use super::rings;

pub(crate) fn sanitize(raw: RawMolecule) -> Result<MolGraph, SmilesError> {
    let RawMolecule { mut atoms, bonds } = raw;
    let mut bonds: Vec<Bond> = bonds.into_iter().map(|b| b.into_bond(&atoms)).collect();
    let n = atoms.len();

    let ring_sets = rings::sssr(n, &bonds);
    let probe = MolGraph::assemble(atoms.clone(), bonds.clone(), ring_sets.clone());

    for (i, atom) in atoms.iter().enumerate() {
        if atom.aromatic && !probe.is_ring_atom(i) {
            return Err(SmilesError::Kekulization(format!(
                "non-ring atom {i} marked aromatic"
            )));
        }
    }
    for (bi, bond) in bonds.iter_mut().enumerate() {
        if bond.order == BondOrder::Aromatic
            && (!probe.is_ring_bond(bi) || !atoms[bond.a].aromatic || !atoms[bond.b].aromatic)
        {
            bond.order = BondOrder::Single;
        }
    }

    let sigma: Vec<usize> = (0..n)
        .map(|i| {
            probe
                .neighbors(i)
                .iter()
                .map(|&(_, bi)| bonds[bi].order.sigma_valence() as usize)
                .sum()
        })
        .collect();

    let mut needs_pi = vec![false; n];
    for (i, atom) in atoms.iter_mut().enumerate() {
        let s = sigma[i];
        if atom.bracket {
            if atom.aromatic {
                let total = s + atom.explicit_h as usize + 1;
                needs_pi[i] = element::allowed_valences(atom.element, atom.charge as i32)
                    .is_some_and(|v| v.iter().any(|&x| x as usize == total));
            }
            continue;
        }
        let defaults = element::default_valences(atom.element);
        if atom.aromatic {
            let v0 = defaults[0] as usize;
            if s < v0 {
                needs_pi[i] = true;
                atom.explicit_h = (v0 - s - 1) as u8;
            } else {
                atom.explicit_h = 0;
            }
        } else {
            atom.explicit_h = defaults
                .iter()
                .map(|&v| v as usize)
                .find(|&v| v >= s)
                .map_or(0, |v| (v - s) as u8);
        }
    }

    kekulize(&atoms, &mut bonds, &needs_pi)?;

    let graph = MolGraph::assemble(atoms, bonds, ring_sets);
    check_valences(&graph)?;
    let graph = fold_hydrogens(graph);
    Ok(perceive_aromaticity(graph))
}

fn kekulize(
    atoms: &[Atom],
    bonds: &mut [Bond],
    needs_pi: &[bool],
) -> Result<(), SmilesError> {
    let n = atoms.len();
    let mut adj = vec![Vec::new(); n];
    for (bi, b) in bonds.iter().enumerate() {
        if b.order == BondOrder::Aromatic {
            if needs_pi[b.a] && needs_pi[b.b] {
                adj[b.a].push((b.b, bi));
                adj[b.b].push((b.a, bi));
            }
        }
    }
    let required: Vec<usize> = (0..n).filter(|&i| needs_pi[i]).collect();
    if required.is_empty() {
        return Ok(());
    }
    let plain: Vec<Vec<usize>> = adj
        .iter()
        .map(|l| l.iter().map(|&(w, _)| w).collect())
        .collect();
    let mate = max_matching(&plain);
    if let Some(&bad) = required.iter().find(|&&i| mate[i].is_none()) {
        return Err(SmilesError::Kekulization(format!(
            "no alternating assignment covers atom {bad}"
        )));
    }
    for &i in &required {
        let j = mate[i].unwrap();
        if i < j {
            let bi = adj[i].iter().find(|&&(w, _)| w == j).unwrap().1;
            bonds[bi].kekule = 2;
        }
    }
    Ok(())
}

/// Maximum cardinality matching on a general graph (Edmonds' blossom
/// algorithm), seeded with a greedy matching.
pub(crate) fn max_matching(adj: &[Vec<usize>]) -> Vec<Option<usize>> {
    let n = adj.len();
    let mut mate: Vec<Option<usize>> = vec![None; n];
    for v in 0..n {
        if mate[v].is_none() {
            if let Some(&w) = adj[v].iter().find(|&&w| mate[w].is_none() && w != v) {
                mate[v] = Some(w);
                mate[w] = Some(v);
            }
        }
    }
    for root in 0..n {
        if mate[root].is_none() && !adj[root].is_empty() {
            augment_from(root, adj, &mut mate);
        }
    }
    mate
}

fn augment_from(root: usize, adj: &[Vec<usize>], mate: &mut [Option<usize>]) -> bool {
    let n = adj.len();
    let mut parent: Vec<Option<usize>> = vec![None; n];
    let mut base: Vec<usize> = (0..n).collect();
    let mut used = vec![false; n];
    let mut queue = std::collections::VecDeque::new();
    used[root] = true;
    queue.push_back(root);

    let lca = |a: usize, b: usize, base: &[usize], mate: &[Option<usize>], parent: &[Option<usize>]| {
        let mut seen = vec![false; n];
        let mut a = a;
        loop {
            a = base[a];
            seen[a] = true;
            match mate[a] {
                Some(m) => a = parent[m].expect("alternating tree"),
                None => break,
            }
        }
        let mut b = b;
        loop {
            b = base[b];
            if seen[b] {
                return b;
            }
            b = parent[mate[b].unwrap()].expect("alternating tree");
        }
    };

    fn mark_path(
        mut v: usize,
        b: usize,
        mut child: usize,
        base: &[usize],
        mate: &[Option<usize>],
        parent: &mut [Option<usize>],
        blossom: &mut [bool],
    ) {
        while base[v] != b {
            let m = mate[v].unwrap();
            blossom[base[v]] = true;
            blossom[base[m]] = true;
            parent[v] = Some(child);
            child = m;
            v = parent[m].unwrap();
        }
    }

    while let Some(v) = queue.pop_front() {
        for &to in &adj[v] {
            if base[v] == base[to] || mate[v] == Some(to) {
                continue;
            }
            if to == root || mate[to].is_some_and(|m| parent[m].is_some()) {
                let cur = lca(v, to, &base, mate, &parent);
                let mut blossom = vec![false; n];
                mark_path(v, cur, to, &base, mate, &mut parent, &mut blossom);
                mark_path(to, cur, v, &base, mate, &mut parent, &mut blossom);
                for i in 0..n {
                    if blossom[base[i]] {
                        base[i] = cur;
                        if !used[i] {
                            used[i] = true;
                            queue.push_back(i);
                        }
                    }
                }
            } else if parent[to].is_none() {
                parent[to] = Some(v);
                match mate[to] {
                    None => {
                        let mut u = Some(to);
                        while let Some(x) = u {
                            let pv = parent[x].unwrap();
                            let next = mate[pv];
                            mate[x] = Some(pv);
                            mate[pv] = Some(x);
                            u = next;
                        }
                        return true;
                    }
                    Some(m) => {
                        used[m] = true;
                        queue.push_back(m);
                    }
                }
            }
        }
    }
    false
}

fn check_valences(graph: &MolGraph) -> Result<(), SmilesError> {
    for (i, atom) in graph.atoms().iter().enumerate() {
        if let Some(max) = element::max_valence(atom.element, atom.charge as i32) {
            let v = graph.valence(i);
            if v > max as usize {
                return Err(SmilesError::Valence {
                    atom: i,
                    symbol: atom.symbol().to_string(),
                    valence: v,
                });
            }
        }
    }
    Ok(())
}

/// Plain hydrogen atoms with a single heavy neighbour become hydrogen counts.
fn fold_hydrogens(graph: MolGraph) -> MolGraph {
    let removable: Vec<bool> = graph
        .atoms()
        .iter()
        .enumerate()
        .map(|(i, a)| {
            a.is_hydrogen()
                && a.charge == 0
                && a.isotope.is_none()
                && a.explicit_h == 0
                && graph.degree(i) == 1
                && {
                    let (nbr, bi) = graph.neighbors(i)[0];
                    !graph.atom(nbr).is_hydrogen() && graph.bond(bi).kekule == 1
                }
        })
        .collect();
    if !removable.iter().any(|&r| r) {
        return graph;
    }
    let MolGraph {
        mut atoms, bonds, ..
    } = graph;
    for b in &bonds {
        if removable[b.a] {
            atoms[b.b].explicit_h += 1;
        } else if removable[b.b] {
            atoms[b.a].explicit_h += 1;
        }
    }
    let keep: Vec<usize> = (0..atoms.len()).filter(|&i| !removable[i]).collect();
    let mut map = vec![usize::MAX; atoms.len()];
    for (new, &old) in keep.iter().enumerate() {
        map[old] = new;
    }
    let atoms: Vec<Atom> = keep
        .iter()
        .enumerate()
        .map(|(new, &old)| Atom {
            index: new,
            ..atoms[old].clone()
        })
        .collect();
    let bonds: Vec<Bond> = bonds
        .into_iter()
        .filter(|b| !removable[b.a] && !removable[b.b])
        .map(|b| Bond {
            a: map[b.a],
            b: map[b.b],
            ..b
        })
        .collect();
    let rings = rings::sssr(atoms.len(), &bonds);
    MolGraph::assemble(atoms, bonds, rings)
}

/// Pi electrons an atom donates to a ring system, or `None` if it cannot be
/// part of an aromatic ring.
fn pi_electrons(graph: &MolGraph, atom: usize) -> Option<u32> {
    let a = graph.atom(atom);
    let mut has_double = None;
    for &(_, bi) in graph.neighbors(atom) {
        match graph.bond(bi).kekule {
            3 => return None,
            2 => {
                if has_double.is_some() {
                    return None;
                }
                has_double = Some(bi);
            }
            _ => {}
        }
    }
    let degree = graph.degree(atom) + a.explicit_h as usize;
    if degree > 3 {
        return None;
    }
    if let Some(bi) = has_double {
        return if graph.is_ring_bond(bi) {
            Some(1)
        } else if a.element == element::CARBON {
            Some(0)
        } else {
            None
        };
    }
    let e = match (a.element, a.charge) {
        (element::CARBON, -1) => 2,
        (element::CARBON, 1) => 0,
        (element::BORON, 0) => 0,
        (element::NITROGEN, 0) | (element::PHOSPHORUS, 0) if degree == 3 => 2,
        (element::OXYGEN, 0) | (element::SULFUR, 0) | (34, 0) | (52, 0) if degree == 2 => 2,
        (element::NITROGEN, -1) if degree == 2 => 2,
        _ => return None,
    };
    Some(e)
}

fn huckel(graph: &MolGraph, atoms: &[usize]) -> bool {
    let mut total = 0;
    for &a in atoms {
        match pi_electrons(graph, a) {
            Some(e) => total += e,
            None => return false,
        }
    }
    total >= 2 && (total - 2) % 4 == 0
}

/// Marks rings aromatic when they satisfy the 4n+2 rule on their own, then
/// tries pairs of fused rings whose union satisfies it.
fn perceive_aromaticity(graph: MolGraph) -> MolGraph {
    let rings = graph.rings();
    let mut aromatic = vec![false; rings.len()];
    for (ri, ring) in rings.iter().enumerate() {
        let written = ring.iter().all(|&a| graph.atom(a).aromatic);
        aromatic[ri] = !written && huckel(&graph, ring);
    }
    let covered = |atoms: &[usize], aromatic: &[bool]| {
        atoms.iter().all(|&a| {
            graph.atom(a).aromatic
                || rings
                    .iter()
                    .enumerate()
                    .any(|(ri, r)| aromatic[ri] && r.contains(&a))
        })
    };
    let mut fused = Vec::new();
    for i in 0..rings.len() {
        for j in i + 1..rings.len() {
            let shared = rings[i].iter().filter(|a| rings[j].contains(a)).count();
            if shared < 2 || (aromatic[i] && aromatic[j]) {
                continue;
            }
            let mut union = rings[i].clone();
            union.extend(rings[j].iter().filter(|a| !rings[i].contains(a)));
            if !covered(&union, &aromatic) && huckel(&graph, &union) {
                fused.push((i, j));
            }
        }
    }
    for (i, j) in fused {
        aromatic[i] = true;
        aromatic[j] = true;
    }
    if !aromatic.iter().any(|&a| a) {
        return graph;
    }
    let MolGraph {
        mut atoms,
        mut bonds,
        rings,
        adjacency,
        ..
    } = graph;
    for (ri, ring) in rings.iter().enumerate() {
        if !aromatic[ri] {
            continue;
        }
        for k in 0..ring.len() {
            let (x, y) = (ring[k], ring[(k + 1) % ring.len()]);
            atoms[x].aromatic = true;
            let bi = adjacency[x].iter().find(|(w, _)| *w == y).unwrap().1;
            bonds[bi].order = BondOrder::Aromatic;
        }
    }
    MolGraph::assemble(atoms, bonds, rings)
}
