//! Substructure query patterns used by the descriptor parameter tables.
//!
//! The accepted syntax is the SMARTS subset needed by those tables: atom
//! primitives `* a A #n` element symbols, `H D X v R r` counts, charges,
//! isotopes and recursive `$(...)`; bond primitives `- = # : ~ @`; logical
//! operators `! & , ;`; branches, ring closures and `.`. It is an internal
//! engine, not a user-facing query language.

use std::fmt;

use super::element;
use super::graph::{BondOrder, MolGraph};

#[derive(Debug, Clone, PartialEq)]
pub struct QueryError {
    pub pattern: String,
    pub position: usize,
    pub message: String,
}

impl fmt::Display for QueryError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "bad pattern {:?} at {}: {}", self.pattern, self.position, self.message)
    }
}

impl std::error::Error for QueryError {}

#[derive(Debug, Clone)]
enum AtomPrim {
    Any,
    Aromatic(bool),
    Element { z: u8, aromatic: Option<bool> },
    Hydrogens(u8),
    Degree(u8),
    Connectivity(u8),
    Valence(u8),
    Charge(i8),
    Isotope(u16),
    /// `R` with no count: member of any ring.
    InRing,
    RingCount(u8),
    /// `r<n>`: smallest ring containing the atom has size n.
    RingSize(u8),
    Recursive(Box<Query>),
}

#[derive(Debug, Clone)]
enum Expr<P> {
    Prim(P),
    Not(Box<Expr<P>>),
    And(Vec<Expr<P>>),
    Or(Vec<Expr<P>>),
}

#[derive(Debug, Clone, Copy)]
enum BondPrim {
    Single,
    Double,
    Triple,
    Aromatic,
    Any,
    Ring,
}

#[derive(Debug, Clone)]
struct QBond {
    a: usize,
    b: usize,
    /// `None`: single or aromatic.
    expr: Option<Expr<BondPrim>>,
}

#[derive(Debug, Clone)]
pub struct Query {
    atoms: Vec<Expr<AtomPrim>>,
    bonds: Vec<QBond>,
    adjacency: Vec<Vec<(usize, usize)>>,
    text: String,
}

/// Per-atom properties of a target graph, computed once and shared across
/// many queries.
pub struct Target<'a> {
    graph: &'a MolGraph,
    hydrogens: Vec<u8>,
    min_ring: Vec<u8>,
}

impl<'a> Target<'a> {
    pub fn new(graph: &'a MolGraph) -> Self {
        let n = graph.atom_count();
        let mut min_ring = vec![0u8; n];
        for ring in graph.rings() {
            let len = ring.len().min(255) as u8;
            for &a in ring {
                if min_ring[a] == 0 || len < min_ring[a] {
                    min_ring[a] = len;
                }
            }
        }
        Target {
            graph,
            hydrogens: (0..n).map(|i| graph.total_hydrogens(i) as u8).collect(),
            min_ring,
        }
    }

    pub fn graph(&self) -> &MolGraph {
        self.graph
    }

    fn atom_matches(&self, expr: &Expr<AtomPrim>, i: usize) -> bool {
        match expr {
            Expr::Prim(p) => self.prim_matches(p, i),
            Expr::Not(e) => !self.atom_matches(e, i),
            Expr::And(es) => es.iter().all(|e| self.atom_matches(e, i)),
            Expr::Or(es) => es.iter().any(|e| self.atom_matches(e, i)),
        }
    }

    fn prim_matches(&self, p: &AtomPrim, i: usize) -> bool {
        let g = self.graph;
        let a = g.atom(i);
        match p {
            AtomPrim::Any => true,
            AtomPrim::Aromatic(flag) => a.aromatic == *flag,
            AtomPrim::Element { z, aromatic } => {
                a.element == *z && aromatic.is_none_or(|f| f == a.aromatic)
            }
            AtomPrim::Hydrogens(h) => self.hydrogens[i] == *h,
            AtomPrim::Degree(d) => g.degree(i) == *d as usize,
            AtomPrim::Connectivity(x) => g.degree(i) + a.explicit_h as usize == *x as usize,
            AtomPrim::Valence(v) => g.valence(i) == *v as usize,
            AtomPrim::Charge(c) => a.charge == *c,
            AtomPrim::Isotope(m) => a.isotope == Some(*m),
            AtomPrim::InRing => g.is_ring_atom(i),
            AtomPrim::RingCount(k) => g.ring_count_of(i) == *k as usize,
            AtomPrim::RingSize(0) => !g.is_ring_atom(i),
            AtomPrim::RingSize(s) => self.min_ring[i] == *s,
            AtomPrim::Recursive(q) => q.matches_at(self, i),
        }
    }

    fn bond_matches(&self, expr: &Option<Expr<BondPrim>>, bi: usize) -> bool {
        let order = self.graph.bond(bi).order;
        match expr {
            None => matches!(order, BondOrder::Single | BondOrder::Aromatic),
            Some(e) => self.bond_expr(e, bi, order),
        }
    }

    fn bond_expr(&self, e: &Expr<BondPrim>, bi: usize, order: BondOrder) -> bool {
        match e {
            Expr::Prim(p) => match p {
                BondPrim::Single => order == BondOrder::Single,
                BondPrim::Double => order == BondOrder::Double,
                BondPrim::Triple => order == BondOrder::Triple,
                BondPrim::Aromatic => order == BondOrder::Aromatic,
                BondPrim::Any => true,
                BondPrim::Ring => self.graph.is_ring_bond(bi),
            },
            Expr::Not(e) => !self.bond_expr(e, bi, order),
            Expr::And(es) => es.iter().all(|e| self.bond_expr(e, bi, order)),
            Expr::Or(es) => es.iter().any(|e| self.bond_expr(e, bi, order)),
        }
    }
}

struct Parser<'a> {
    text: &'a [u8],
    pos: usize,
    source: &'a str,
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> QueryError {
        QueryError {
            pattern: self.source.to_string(),
            position: self.pos,
            message: msg.to_string(),
        }
    }
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }
    fn peek_at(&self, k: usize) -> Option<u8> {
        self.text.get(self.pos + k).copied()
    }
    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        let mut v = 0u32;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            v = v * 10 + (c - b'0') as u32;
            self.pos += 1;
        }
        (self.pos > start).then_some(v)
    }

    fn element_symbol(&mut self) -> Option<(u8, Option<bool>)> {
        let c = self.peek()?;
        if c.is_ascii_lowercase() {
            let two = [c, self.peek_at(1).unwrap_or(0)];
            for (sym, z) in [(b"se", 34u8), (b"as", 33), (b"te", 52)] {
                if &two == sym {
                    self.pos += 2;
                    return Some((z, Some(true)));
                }
            }
            let z = match c {
                b'b' => element::BORON,
                b'c' => element::CARBON,
                b'n' => element::NITROGEN,
                b'o' => element::OXYGEN,
                b'p' => element::PHOSPHORUS,
                b's' => element::SULFUR,
                _ => return None,
            };
            self.pos += 1;
            return Some((z, Some(true)));
        }
        if c.is_ascii_uppercase() {
            if let Some(d) = self.peek_at(1).filter(|d| d.is_ascii_lowercase()) {
                if let Some(z) = element::from_symbol(std::str::from_utf8(&[c, d]).unwrap()) {
                    self.pos += 2;
                    return Some((z, Some(false)));
                }
            }
            if c == b'H' {
                return None;
            }
            let z = element::from_symbol(std::str::from_utf8(&[c]).unwrap())?;
            self.pos += 1;
            return Some((z, Some(false)));
        }
        None
    }

    /// Bracket atom body up to the closing `]`.
    fn bracket(&mut self) -> Result<Expr<AtomPrim>, QueryError> {
        // "[H]", "[2H]", "[H+]": a hydrogen atom rather than an H count
        let save = self.pos;
        let iso = self.number();
        if self.peek() == Some(b'H') && matches!(self.peek_at(1), Some(b']' | b'+' | b'-')) {
            self.pos += 1;
            let mut parts = vec![Expr::Prim(AtomPrim::Element {
                z: element::HYDROGEN,
                aromatic: None,
            })];
            if let Some(m) = iso {
                parts.push(Expr::Prim(AtomPrim::Isotope(m as u16)));
            }
            if let Some(c) = self.charge()? {
                parts.push(Expr::Prim(AtomPrim::Charge(c)));
            }
            if self.peek() != Some(b']') {
                return Err(self.err("expected ']'"));
            }
            self.pos += 1;
            return Ok(Expr::And(parts));
        }
        self.pos = save;
        let e = self.low_and()?;
        if self.peek() != Some(b']') {
            return Err(self.err("expected ']'"));
        }
        self.pos += 1;
        Ok(e)
    }

    fn low_and(&mut self) -> Result<Expr<AtomPrim>, QueryError> {
        let mut parts = vec![self.or()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            parts.push(self.or()?);
        }
        Ok(flatten(parts, Expr::And))
    }

    fn or(&mut self) -> Result<Expr<AtomPrim>, QueryError> {
        let mut parts = vec![self.high_and()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            parts.push(self.high_and()?);
        }
        Ok(flatten(parts, Expr::Or))
    }

    fn high_and(&mut self) -> Result<Expr<AtomPrim>, QueryError> {
        let mut parts = vec![self.unary()?];
        loop {
            match self.peek() {
                Some(b'&') => {
                    self.pos += 1;
                    parts.push(self.unary()?);
                }
                Some(b']' | b';' | b',') | None => break,
                _ => parts.push(self.unary()?),
            }
        }
        Ok(flatten(parts, Expr::And))
    }

    fn unary(&mut self) -> Result<Expr<AtomPrim>, QueryError> {
        if self.peek() == Some(b'!') {
            self.pos += 1;
            return Ok(Expr::Not(Box::new(self.unary()?)));
        }
        self.primitive().map(Expr::Prim)
    }

    fn charge(&mut self) -> Result<Option<i8>, QueryError> {
        let sign: i32 = match self.peek() {
            Some(b'+') => 1,
            Some(b'-') => -1,
            _ => return Ok(None),
        };
        let ch = self.peek().unwrap();
        self.pos += 1;
        if let Some(n) = self.number() {
            return Ok(Some((sign * n as i32) as i8));
        }
        let mut v = sign;
        while self.peek() == Some(ch) {
            self.pos += 1;
            v += sign;
        }
        Ok(Some(v as i8))
    }

    fn primitive(&mut self) -> Result<AtomPrim, QueryError> {
        let c = self.peek().ok_or_else(|| self.err("unterminated atom"))?;
        let count = |p: &mut Self, default: u32| p.number().unwrap_or(default).min(255) as u8;
        let prim = match c {
            b'0'..=b'9' => AtomPrim::Isotope(self.number().unwrap() as u16),
            b'*' => {
                self.pos += 1;
                AtomPrim::Any
            }
            b'a' if self.peek_at(1) != Some(b's') => {
                self.pos += 1;
                AtomPrim::Aromatic(true)
            }
            b'A' if !matches!(self.peek_at(1), Some(b'l' | b'r' | b's' | b'g' | b'u' | b'c' | b'm' | b't')) => {
                self.pos += 1;
                AtomPrim::Aromatic(false)
            }
            b'#' => {
                self.pos += 1;
                let z = self.number().ok_or_else(|| self.err("expected atomic number"))?;
                if z == 0 || z > 118 {
                    return Err(self.err("atomic number out of range"));
                }
                AtomPrim::Element {
                    z: z as u8,
                    aromatic: None,
                }
            }
            b'$' => {
                if self.peek_at(1) != Some(b'(') {
                    return Err(self.err("expected '(' after '$'"));
                }
                let start = self.pos + 2;
                let mut depth = 0;
                let mut end = None;
                for (k, &ch) in self.text[self.pos + 1..].iter().enumerate() {
                    match ch {
                        b'(' => depth += 1,
                        b')' => {
                            depth -= 1;
                            if depth == 0 {
                                end = Some(self.pos + 1 + k);
                                break;
                            }
                        }
                        _ => {}
                    }
                }
                let end = end.ok_or_else(|| self.err("unclosed recursive pattern"))?;
                let inner = std::str::from_utf8(&self.text[start..end]).unwrap();
                let q = Query::parse(inner)?;
                self.pos = end + 1;
                AtomPrim::Recursive(Box::new(q))
            }
            b'H' if !matches!(self.peek_at(1), Some(b'e' | b'f' | b'g' | b'o' | b's')) => {
                self.pos += 1;
                AtomPrim::Hydrogens(count(self, 1))
            }
            b'D' if self.peek_at(1) != Some(b'b') && self.peek_at(1) != Some(b's') && self.peek_at(1) != Some(b'y') => {
                self.pos += 1;
                AtomPrim::Degree(count(self, 1))
            }
            b'X' if self.peek_at(1) != Some(b'e') => {
                self.pos += 1;
                AtomPrim::Connectivity(count(self, 1))
            }
            b'v' => {
                self.pos += 1;
                AtomPrim::Valence(count(self, 1))
            }
            b'R' if !matches!(self.peek_at(1), Some(b'a' | b'b' | b'e' | b'f' | b'g' | b'h' | b'n' | b'u')) => {
                self.pos += 1;
                match self.number() {
                    Some(k) => AtomPrim::RingCount(k.min(255) as u8),
                    None => AtomPrim::InRing,
                }
            }
            b'r' => {
                self.pos += 1;
                match self.number() {
                    Some(k) => AtomPrim::RingSize(k.min(255) as u8),
                    None => AtomPrim::InRing,
                }
            }
            b'+' | b'-' => AtomPrim::Charge(self.charge()?.unwrap()),
            _ => {
                let (z, aromatic) = self
                    .element_symbol()
                    .ok_or_else(|| self.err("unknown atom primitive"))?;
                AtomPrim::Element { z, aromatic }
            }
        };
        Ok(prim)
    }

    fn bare_atom(&mut self) -> Option<Expr<AtomPrim>> {
        let c = self.peek()?;
        let two = self.peek_at(1);
        let (prim, len) = match c {
            b'*' => (AtomPrim::Any, 1),
            b'a' => (AtomPrim::Aromatic(true), 1),
            b'A' => (AtomPrim::Aromatic(false), 1),
            b'C' if two == Some(b'l') => (elem(element::CHLORINE, false), 2),
            b'B' if two == Some(b'r') => (elem(element::BROMINE, false), 2),
            b'B' => (elem(element::BORON, false), 1),
            b'C' => (elem(element::CARBON, false), 1),
            b'N' => (elem(element::NITROGEN, false), 1),
            b'O' => (elem(element::OXYGEN, false), 1),
            b'P' => (elem(element::PHOSPHORUS, false), 1),
            b'S' => (elem(element::SULFUR, false), 1),
            b'F' => (elem(element::FLUORINE, false), 1),
            b'I' => (elem(element::IODINE, false), 1),
            b'b' => (elem(element::BORON, true), 1),
            b'c' => (elem(element::CARBON, true), 1),
            b'n' => (elem(element::NITROGEN, true), 1),
            b'o' => (elem(element::OXYGEN, true), 1),
            b'p' => (elem(element::PHOSPHORUS, true), 1),
            b's' => (elem(element::SULFUR, true), 1),
            _ => return None,
        };
        self.pos += len;
        Some(Expr::Prim(prim))
    }

    fn bond_expr(&mut self) -> Result<Option<Expr<BondPrim>>, QueryError> {
        let start = self.pos;
        let e = self.bond_low()?;
        Ok(if self.pos == start { None } else { Some(e) })
    }

    fn bond_low(&mut self) -> Result<Expr<BondPrim>, QueryError> {
        let mut parts = vec![self.bond_or()?];
        while self.peek() == Some(b';') {
            self.pos += 1;
            parts.push(self.bond_or()?);
        }
        Ok(flatten(parts, Expr::And))
    }

    fn bond_or(&mut self) -> Result<Expr<BondPrim>, QueryError> {
        let mut parts = vec![self.bond_and()?];
        while self.peek() == Some(b',') {
            self.pos += 1;
            parts.push(self.bond_and()?);
        }
        Ok(flatten(parts, Expr::Or))
    }

    fn bond_and(&mut self) -> Result<Expr<BondPrim>, QueryError> {
        let mut parts = Vec::new();
        loop {
            match self.peek() {
                Some(b'&') => self.pos += 1,
                Some(b'!') => {
                    self.pos += 1;
                    let p = self.bond_prim().ok_or_else(|| self.err("expected bond primitive"))?;
                    parts.push(Expr::Not(Box::new(Expr::Prim(p))));
                }
                _ => match self.bond_prim() {
                    Some(p) => parts.push(Expr::Prim(p)),
                    None => break,
                },
            }
        }
        if parts.is_empty() {
            // empty operand: only legal when the whole expression is empty
            return Ok(Expr::And(Vec::new()));
        }
        Ok(flatten(parts, Expr::And))
    }

    fn bond_prim(&mut self) -> Option<BondPrim> {
        let p = match self.peek()? {
            b'-' | b'/' | b'\\' => BondPrim::Single,
            b'=' => BondPrim::Double,
            b'#' => BondPrim::Triple,
            b':' => BondPrim::Aromatic,
            b'~' => BondPrim::Any,
            b'@' => BondPrim::Ring,
            _ => return None,
        };
        self.pos += 1;
        Some(p)
    }
}

fn elem(z: u8, aromatic: bool) -> AtomPrim {
    AtomPrim::Element {
        z,
        aromatic: Some(aromatic),
    }
}

fn flatten<P>(mut parts: Vec<Expr<P>>, wrap: fn(Vec<Expr<P>>) -> Expr<P>) -> Expr<P> {
    if parts.len() == 1 {
        parts.pop().unwrap()
    } else {
        wrap(parts)
    }
}

impl Query {
    pub fn parse(text: &str) -> Result<Query, QueryError> {
        let mut p = Parser {
            text: text.as_bytes(),
            pos: 0,
            source: text,
        };
        let mut atoms: Vec<Expr<AtomPrim>> = Vec::new();
        let mut bonds: Vec<QBond> = Vec::new();
        let mut prev: Option<usize> = None;
        let mut stack: Vec<Option<usize>> = Vec::new();
        let mut pending: Option<Expr<BondPrim>> = None;
        let mut open: std::collections::HashMap<u32, (usize, Option<Expr<BondPrim>>)> = Default::default();
        while let Some(c) = p.peek() {
            match c {
                b'(' => {
                    p.pos += 1;
                    stack.push(prev);
                }
                b')' => {
                    p.pos += 1;
                    prev = stack.pop().ok_or_else(|| p.err("unmatched ')'"))?;
                }
                b'.' => {
                    p.pos += 1;
                    prev = None;
                }
                b'0'..=b'9' | b'%' => {
                    let n = if c == b'%' {
                        p.pos += 1;
                        let a = p.peek().filter(u8::is_ascii_digit).ok_or_else(|| p.err("bad ring label"))?;
                        let b = p.peek_at(1).filter(u8::is_ascii_digit).ok_or_else(|| p.err("bad ring label"))?;
                        p.pos += 2;
                        ((a - b'0') * 10 + (b - b'0')) as u32
                    } else {
                        p.pos += 1;
                        (c - b'0') as u32
                    };
                    let cur = prev.ok_or_else(|| p.err("ring label without atom"))?;
                    let e = pending.take();
                    if let Some((other, oe)) = open.remove(&n) {
                        bonds.push(QBond {
                            a: other,
                            b: cur,
                            expr: e.or(oe),
                        });
                    } else {
                        open.insert(n, (cur, e));
                    }
                }
                _ => {
                    let atom = if c == b'[' {
                        p.pos += 1;
                        Some(p.bracket()?)
                    } else {
                        p.bare_atom()
                    };
                    match atom {
                        Some(a) => {
                            let idx = atoms.len();
                            atoms.push(a);
                            if let Some(q) = prev {
                                bonds.push(QBond {
                                    a: q,
                                    b: idx,
                                    expr: pending.take(),
                                });
                            }
                            pending = None;
                            prev = Some(idx);
                        }
                        None => {
                            let e = p.bond_expr()?;
                            if e.is_none() {
                                return Err(p.err("unexpected character"));
                            }
                            pending = e;
                        }
                    }
                }
            }
        }
        if !open.is_empty() || !stack.is_empty() {
            return Err(p.err("unclosed ring or branch"));
        }
        if atoms.is_empty() {
            return Err(p.err("empty pattern"));
        }
        let mut adjacency = vec![Vec::new(); atoms.len()];
        for (i, b) in bonds.iter().enumerate() {
            adjacency[b.a].push((b.b, i));
            adjacency[b.b].push((b.a, i));
        }
        Ok(Query {
            atoms,
            bonds,
            adjacency,
            text: text.to_string(),
        })
    }

    pub fn text(&self) -> &str {
        &self.text
    }

    pub fn atom_count(&self) -> usize {
        self.atoms.len()
    }

    /// Search order: breadth-first from `first`, then the remaining components.
    fn order_from(&self, first: usize) -> Vec<(usize, Option<usize>)> {
        let n = self.atoms.len();
        let mut seen = vec![false; n];
        let mut order = Vec::with_capacity(n);
        for s in std::iter::once(first).chain(0..n) {
            if seen[s] {
                continue;
            }
            seen[s] = true;
            order.push((s, None));
            let mut i = order.len() - 1;
            while i < order.len() {
                let v = order[i].0;
                i += 1;
                for &(w, _) in &self.adjacency[v] {
                    if !seen[w] {
                        seen[w] = true;
                        order.push((w, Some(v)));
                    }
                }
            }
        }
        order
    }

    fn search(
        &self,
        target: &Target,
        order: &[(usize, Option<usize>)],
        depth: usize,
        map: &mut Vec<usize>,
        used: &mut Vec<bool>,
        visit: &mut dyn FnMut(&[usize]) -> bool,
    ) -> bool {
        if depth == order.len() {
            return visit(map);
        }
        let (q, anchor) = order[depth];
        let g = target.graph;
        let candidates: Vec<usize> = match anchor {
            Some(a) => g.neighbors(map[a]).iter().map(|&(w, _)| w).collect(),
            None if depth == 0 && map[q] != usize::MAX => vec![map[q]],
            None => (0..g.atom_count()).collect(),
        };
        let fixed = depth == 0 && map[q] != usize::MAX;
        for t in candidates {
            if (used[t] && !fixed) || !target.atom_matches(&self.atoms[q], t) {
                continue;
            }
            let bonds_ok = self.adjacency[q].iter().all(|&(qw, qb)| {
                let tw = map[qw];
                if tw == usize::MAX || qw == q {
                    return true;
                }
                match g.bond_between(t, tw) {
                    Some(tb) => target.bond_matches(&self.bonds[qb].expr, tb),
                    None => false,
                }
            });
            if !bonds_ok {
                continue;
            }
            map[q] = t;
            used[t] = true;
            if self.search(target, order, depth + 1, map, used, visit) {
                return true;
            }
            used[t] = false;
            if !fixed {
                map[q] = usize::MAX;
            }
        }
        if fixed {
            map[q] = usize::MAX;
        }
        false
    }

    /// True iff some match maps query atom 0 onto target atom `atom`.
    pub fn matches_at(&self, target: &Target, atom: usize) -> bool {
        if !target.atom_matches(&self.atoms[0], atom) {
            return false;
        }
        let order = self.order_from(0);
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; target.graph.atom_count()];
        map[0] = atom;
        self.search(target, &order, 0, &mut map, &mut used, &mut |_| true)
    }

    pub fn has_match(&self, target: &Target) -> bool {
        let order = self.order_from(0);
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; target.graph.atom_count()];
        self.search(target, &order, 0, &mut map, &mut used, &mut |_| true)
    }

    /// Matches that differ in their set of target atoms.
    pub fn unique_matches(&self, target: &Target) -> Vec<Vec<usize>> {
        let order = self.order_from(0);
        let mut map = vec![usize::MAX; self.atoms.len()];
        let mut used = vec![false; target.graph.atom_count()];
        let mut seen = std::collections::BTreeSet::new();
        let mut out = Vec::new();
        self.search(target, &order, 0, &mut map, &mut used, &mut |m| {
            let mut key = m.to_vec();
            key.sort_unstable();
            if seen.insert(key) {
                out.push(m.to_vec());
            }
            false
        });
        out
    }

    pub fn count_unique_matches(&self, target: &Target) -> usize {
        if self.atoms.len() == 1 {
            return (0..target.graph.atom_count())
                .filter(|&i| target.atom_matches(&self.atoms[0], i))
                .count();
        }
        self.unique_matches(target).len()
    }
}
