//! SMILES output for a given atom ranking.

use super::element;
use super::graph::{BondOrder, MolGraph};

/// Hydrogen count and pi requirement the parser would infer for an
/// unbracketed atom in its current bonding environment.
fn bare_interpretation(graph: &MolGraph, atom: usize) -> Option<(usize, bool)> {
    let a = graph.atom(atom);
    let defaults = element::default_valences(a.element);
    if defaults.is_empty() {
        return None;
    }
    let sigma: usize = graph
        .neighbors(atom)
        .iter()
        .map(|&(_, bi)| graph.bond(bi).order.sigma_valence() as usize)
        .sum();
    if a.aromatic {
        let v0 = defaults[0] as usize;
        if sigma < v0 {
            Some((v0 - sigma - 1, true))
        } else {
            Some((0, false))
        }
    } else {
        Some((
            defaults
                .iter()
                .map(|&v| v as usize)
                .find(|&v| v >= sigma)
                .map_or(0, |v| v - sigma),
            false,
        ))
    }
}

fn has_pi(graph: &MolGraph, atom: usize) -> bool {
    graph.neighbors(atom).iter().any(|&(_, bi)| {
        let b = graph.bond(bi);
        b.order == BondOrder::Aromatic && b.kekule == 2
    })
}

pub(crate) fn atom_text(graph: &MolGraph, atom: usize) -> String {
    let a = graph.atom(atom);
    let organic = if a.aromatic {
        element::is_organic_aromatic(a.element)
    } else {
        element::is_organic_subset(a.element)
    };
    if organic && a.charge == 0 && a.isotope.is_none() {
        if let Some((h, pi)) = bare_interpretation(graph, atom) {
            if h == a.explicit_h as usize && (!a.aromatic || pi == has_pi(graph, atom)) {
                return symbol_text(a.element, a.aromatic).to_string();
            }
        }
    }
    let mut out = String::from("[");
    if let Some(iso) = a.isotope {
        out.push_str(&iso.to_string());
    }
    out.push_str(&symbol_text(a.element, a.aromatic));
    match a.explicit_h {
        0 => {}
        1 => out.push('H'),
        h => {
            out.push('H');
            out.push_str(&h.to_string());
        }
    }
    match a.charge {
        0 => {}
        1 => out.push('+'),
        -1 => out.push('-'),
        c if c > 0 => out.push_str(&format!("+{c}")),
        c => out.push_str(&format!("-{}", -c)),
    }
    out.push(']');
    out
}

fn symbol_text(z: u8, aromatic: bool) -> String {
    let s = element::symbol(z);
    if aromatic {
        s.to_ascii_lowercase()
    } else {
        s.to_string()
    }
}

fn bond_text(graph: &MolGraph, bi: usize) -> &'static str {
    let b = graph.bond(bi);
    match b.order {
        BondOrder::Single => {
            if graph.atom(b.a).aromatic && graph.atom(b.b).aromatic {
                "-"
            } else {
                ""
            }
        }
        BondOrder::Double => "=",
        BondOrder::Triple => "#",
        BondOrder::Aromatic => "",
    }
}

fn ring_label(d: usize) -> String {
    if d < 10 {
        d.to_string()
    } else {
        format!("%{d:02}")
    }
}

/// Writes the graph by depth-first traversal. Each component starts at its
/// lowest-ranked atom and neighbours are visited in rank order, so the output
/// depends only on `rank` and the graph.
pub(crate) fn write_ranked(graph: &MolGraph, rank: &[usize]) -> String {
    let n = graph.atom_count();
    let sorted_nbrs: Vec<Vec<(usize, usize)>> = (0..n)
        .map(|v| {
            let mut l = graph.neighbors(v).to_vec();
            l.sort_by_key(|&(w, _)| rank[w]);
            l
        })
        .collect();
    let mut starts: Vec<usize> = (0..n).collect();
    starts.sort_by_key(|&v| rank[v]);

    let mut visited = vec![false; n];
    let mut preorder = vec![usize::MAX; n];
    let mut children: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    // ring bonds at each atom: (partner, bond)
    let mut ring_bonds: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    let mut parent_bond = vec![usize::MAX; n];
    let mut roots = Vec::new();
    let mut counter = 0;

    for &start in &starts {
        if visited[start] {
            continue;
        }
        roots.push(start);
        visited[start] = true;
        preorder[start] = counter;
        counter += 1;
        let mut stack: Vec<(usize, usize)> = vec![(start, 0)];
        while let Some(&mut (v, ref mut next)) = stack.last_mut() {
            if *next >= sorted_nbrs[v].len() {
                stack.pop();
                continue;
            }
            let (w, bi) = sorted_nbrs[v][*next];
            *next += 1;
            if bi == parent_bond[v] {
                continue;
            }
            if !visited[w] {
                visited[w] = true;
                preorder[w] = counter;
                counter += 1;
                parent_bond[w] = bi;
                children[v].push((w, bi));
                stack.push((w, 0));
            } else if preorder[w] < preorder[v] && !ring_bonds[v].iter().any(|&(_, b)| b == bi) {
                ring_bonds[v].push((w, bi));
                ring_bonds[w].push((v, bi));
            }
        }
    }
    enum Task {
        Atom(usize),
        Text(&'static str),
    }
    let mut out = String::new();
    let mut digits: Vec<bool> = Vec::new();
    let mut open: std::collections::HashMap<usize, usize> = Default::default();
    for (ci, &root) in roots.iter().enumerate() {
        if ci > 0 {
            out.push('.');
        }
        let mut tasks = vec![Task::Atom(root)];
        while let Some(task) = tasks.pop() {
            let v = match task {
                Task::Text(t) => {
                    out.push_str(t);
                    continue;
                }
                Task::Atom(v) => v,
            };
            if parent_bond[v] != usize::MAX {
                out.push_str(bond_text(graph, parent_bond[v]));
            }
            out.push_str(&atom_text(graph, v));

            let mut rings = ring_bonds[v].clone();
            rings.sort_by_key(|&(w, _)| (preorder[w] > preorder[v], rank[w]));
            let mut freed = Vec::new();
            for (w, bi) in rings {
                if preorder[w] < preorder[v] {
                    let d = open.remove(&bi).expect("ring bond opened");
                    out.push_str(&ring_label(d));
                    freed.push(d);
                } else {
                    let d = (1..)
                        .find(|&d| !digits.get(d).copied().unwrap_or(false))
                        .unwrap();
                    if digits.len() <= d {
                        digits.resize(d + 1, false);
                    }
                    digits[d] = true;
                    open.insert(bi, d);
                    out.push_str(bond_text(graph, bi));
                    out.push_str(&ring_label(d));
                }
            }
            for d in freed {
                digits[d] = false;
            }

            let kids = &children[v];
            if let Some((&(last, _), rest)) = kids.split_last() {
                tasks.push(Task::Atom(last));
                for &(c, _) in rest.iter().rev() {
                    tasks.push(Task::Text(")"));
                    tasks.push(Task::Atom(c));
                    tasks.push(Task::Text("("));
                }
            }
        }
    }
    out
}
