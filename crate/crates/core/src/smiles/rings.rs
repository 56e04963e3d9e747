//! Ring perception: smallest set of smallest rings via Horton candidate
//! cycles and Gaussian elimination over GF(2).

use std::collections::VecDeque;

use super::graph::Bond;

struct EdgeSet(Vec<u64>);

impl EdgeSet {
    fn new(len: usize) -> Self {
        EdgeSet(vec![0; len.div_ceil(64)])
    }
    fn flip(&mut self, i: usize) {
        self.0[i / 64] ^= 1 << (i % 64);
    }
    fn get(&self, i: usize) -> bool {
        self.0[i / 64] >> (i % 64) & 1 == 1
    }
    fn xor(&mut self, other: &EdgeSet) {
        for (a, b) in self.0.iter_mut().zip(&other.0) {
            *a ^= b;
        }
    }
    fn lowest(&self) -> Option<usize> {
        self.0
            .iter()
            .enumerate()
            .find(|(_, w)| **w != 0)
            .map(|(i, w)| i * 64 + w.trailing_zeros() as usize)
    }
}

/// Number of independent cycles (E - V + components).
pub fn cyclomatic_number(n: usize, bonds: &[Bond]) -> usize {
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], mut x: usize) -> usize {
        while p[x] != x {
            p[x] = p[p[x]];
            x = p[x];
        }
        x
    }
    let mut cycles = 0;
    for b in bonds {
        let (ra, rb) = (find(&mut parent, b.a), find(&mut parent, b.b));
        if ra == rb {
            cycles += 1;
        } else {
            parent[ra] = rb;
        }
    }
    cycles
}

pub fn sssr(n: usize, bonds: &[Bond]) -> Vec<Vec<usize>> {
    let needed = cyclomatic_number(n, bonds);
    if needed == 0 {
        return Vec::new();
    }
    let mut adj: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (i, b) in bonds.iter().enumerate() {
        adj[b.a].push((b.b, i));
        adj[b.b].push((b.a, i));
    }
    // 2-core: strip chains hanging off ring systems.
    let mut degree: Vec<usize> = adj.iter().map(|a| a.len()).collect();
    let mut in_core = vec![true; n];
    let mut stack: Vec<usize> = (0..n).filter(|&v| degree[v] <= 1).collect();
    while let Some(v) = stack.pop() {
        if !in_core[v] {
            continue;
        }
        in_core[v] = false;
        for &(w, _) in &adj[v] {
            if in_core[w] {
                degree[w] -= 1;
                if degree[w] == 1 {
                    stack.push(w);
                }
            }
        }
    }
    let core: Vec<usize> = (0..n).filter(|&v| in_core[v]).collect();
    let core_edges: Vec<usize> = (0..bonds.len())
        .filter(|&i| in_core[bonds[i].a] && in_core[bonds[i].b])
        .collect();

    // Shortest-path trees from every core vertex.
    let mut dist = vec![Vec::new(); n];
    let mut parent = vec![Vec::new(); n];
    for &root in &core {
        let mut d = vec![usize::MAX; n];
        let mut p = vec![usize::MAX; n];
        d[root] = 0;
        let mut queue = VecDeque::from([root]);
        while let Some(v) = queue.pop_front() {
            let mut next: Vec<usize> = adj[v]
                .iter()
                .map(|&(w, _)| w)
                .filter(|&w| in_core[w] && d[w] == usize::MAX)
                .collect();
            next.sort_unstable();
            for w in next {
                d[w] = d[v] + 1;
                p[w] = v;
                queue.push_back(w);
            }
        }
        dist[root] = d;
        parent[root] = p;
    }

    let path = |root: usize, mut x: usize| -> Vec<usize> {
        let mut out = vec![x];
        while x != root {
            x = parent[root][x];
            out.push(x);
        }
        out
    };

    let mut candidates: Vec<(usize, usize, usize)> = Vec::new();
    let mut mark = vec![usize::MAX; n];
    for &root in &core {
        for &ei in &core_edges {
            let (x, y) = (bonds[ei].a, bonds[ei].b);
            let (dx, dy) = (dist[root][x], dist[root][y]);
            if dx == usize::MAX || dy == usize::MAX || dx.abs_diff(dy) > 1 {
                continue;
            }
            if parent[root][x] == y || parent[root][y] == x {
                continue;
            }
            let px = path(root, x);
            for &a in &px {
                mark[a] = ei;
            }
            let py = path(root, y);
            let disjoint = py.iter().all(|&a| a == root || mark[a] != ei);
            for &a in &px {
                mark[a] = usize::MAX;
            }
            if disjoint {
                candidates.push((dx + dy + 1, root, ei));
            }
        }
    }
    candidates.sort_unstable();

    let mut basis: Vec<(usize, EdgeSet)> = Vec::new();
    let mut rings = Vec::new();
    let bond_index = |a: usize, b: usize| -> usize {
        adj[a].iter().find(|(w, _)| *w == b).map(|&(_, i)| i).unwrap()
    };
    for (_, root, ei) in candidates {
        if rings.len() == needed {
            break;
        }
        let (x, y) = (bonds[ei].a, bonds[ei].b);
        let px = path(root, x);
        let py = path(root, y);
        // root .. x, y .. root
        let mut cycle: Vec<usize> = px.iter().rev().copied().collect();
        cycle.extend(py.iter().take(py.len() - 1));
        let mut edges = EdgeSet::new(bonds.len());
        for k in 0..cycle.len() {
            edges.flip(bond_index(cycle[k], cycle[(k + 1) % cycle.len()]));
        }
        let mut reduced = EdgeSet(edges.0.clone());
        for (pivot, vec) in &basis {
            if reduced.get(*pivot) {
                reduced.xor(vec);
            }
        }
        if let Some(pivot) = reduced.lowest() {
            // keep basis in echelon form so single-pass reduction is exact
            for (_, vec) in basis.iter_mut() {
                if vec.get(pivot) {
                    vec.xor(&reduced);
                }
            }
            basis.push((pivot, reduced));
            rings.push(cycle);
        }
    }
    rings
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::smiles::graph::BondOrder;

    fn bonds(pairs: &[(usize, usize)]) -> Vec<Bond> {
        pairs
            .iter()
            .map(|&(a, b)| Bond {
                a,
                b,
                order: BondOrder::Single,
                kekule: 1,
                direction: None,
            })
            .collect()
    }

    #[test]
    fn naphthalene_skeleton_has_two_six_rings() {
        let b = bonds(&[(0, 1), (1, 2), (2, 3), (3, 4), (4, 5), (5, 0), (4, 6), (6, 7), (7, 8), (8, 9), (9, 3)]);
        let rings = sssr(10, &b);
        assert_eq!(rings.len(), 2);
        assert!(rings.iter().all(|r| r.len() == 6));
    }

    #[test]
    fn cubane_has_five_four_rings() {
        let b = bonds(&[
            (0, 1), (1, 2), (2, 3), (3, 0), (4, 5), (5, 6), (6, 7), (7, 4), (0, 4), (1, 5), (2, 6), (3, 7),
        ]);
        let rings = sssr(8, &b);
        assert_eq!(rings.len(), 5);
        assert!(rings.iter().all(|r| r.len() == 4));
    }

    #[test]
    fn chain_has_no_rings() {
        assert!(sssr(4, &bonds(&[(0, 1), (1, 2), (2, 3)])).is_empty());
    }
}
