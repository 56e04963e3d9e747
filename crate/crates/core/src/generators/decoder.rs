//! Grammar and valence state for masked SMILES decoding.

use super::tokens::TokenKind;

pub(crate) const MAX_TOKENS: usize = 200;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Last {
    Start,
    Atom,
    Ring,
    Open,
    Close,
    /// A bond written after an atom or ring label, so a ring label may follow.
    BondAfterAtom,
    Bond,
    Dot,
}

#[derive(Debug, Clone)]
struct OpenRing {
    label: u8,
    atom: usize,
    /// Bond order given at the opening label, if any.
    order: Option<u8>,
    reserved: u8,
}

/// Partial SMILES being decoded.
#[derive(Debug, Clone)]
pub(crate) struct DecodeState {
    budget: Vec<u8>,
    neighbors: Vec<Vec<usize>>,
    current: Option<usize>,
    pending: Option<u8>,
    branches: Vec<usize>,
    rings: Vec<OpenRing>,
    last: Last,
    pub(crate) len: usize,
}

impl DecodeState {
    pub(crate) fn new() -> Self {
        DecodeState {
            budget: Vec::new(),
            neighbors: Vec::new(),
            current: None,
            pending: None,
            branches: Vec::new(),
            rings: Vec::new(),
            last: Last::Start,
            len: 0,
        }
    }

    fn after_atom(&self) -> bool {
        matches!(self.last, Last::Atom | Last::Ring | Last::Close)
    }

    /// Whether some atom that can still grow is reachable, given the budget
    /// of the current atom after a change.
    fn can_grow(&self, current_budget: u8, skip_current: bool) -> bool {
        (!skip_current && current_budget >= 1) || self.branches.iter().any(|&a| self.budget[a] >= 1)
    }

    /// Tokens still needed to close every branch and ring.
    fn obligations(&self, branches: usize, rings: usize) -> usize {
        branches + if rings > 0 { rings + 2 } else { 0 }
    }

    fn fits(&self, branches: usize, rings: usize) -> bool {
        self.len + 1 + self.obligations(branches, rings) <= MAX_TOKENS
    }

    pub(crate) fn can_end(&self) -> bool {
        self.after_atom() && self.branches.is_empty() && self.rings.is_empty() && self.pending.is_none()
    }

    pub(crate) fn allows(&self, kind: TokenKind) -> bool {
        let nb = self.branches.len();
        let nr = self.rings.len();
        match kind {
            TokenKind::Atom { capacity } => match (self.last, self.current) {
                (Last::Start | Last::Dot, _) | (_, None) => capacity > 0 || nr == 0,
                (_, Some(cur)) => {
                    let o = self.pending.unwrap_or(1);
                    if self.budget[cur] < o || capacity < o || !self.fits(nb, nr) {
                        return false;
                    }
                    let own = capacity - o;
                    // the parent may sit on the branch stack with a reduced budget
                    let parent_left = self.budget[cur] - o;
                    nr == 0
                        || own >= 1
                        || self
                            .branches
                            .iter()
                            .any(|&a| if a == cur { parent_left >= 1 } else { self.budget[a] >= 1 })
                }
            },
            TokenKind::Bond(o) => {
                let Some(cur) = self.current else { return false };
                (self.after_atom() || self.last == Last::Open)
                    && self.pending.is_none()
                    && self.budget[cur] >= o
                    && self.fits(nb, nr)
            }
            TokenKind::Open => {
                let Some(cur) = self.current else { return false };
                self.after_atom() && self.pending.is_none() && self.budget[cur] >= 1 && self.fits(nb + 1, nr)
            }
            TokenKind::Close => {
                if !(self.after_atom() && self.pending.is_none() && nb > 0) {
                    return false;
                }
                let parent = self.branches[nb - 1];
                nr == 0
                    || self.budget[parent] >= 1
                    || self.branches[..nb - 1].iter().any(|&a| self.budget[a] >= 1)
            }
            TokenKind::Ring(label) => {
                let Some(cur) = self.current else { return false };
                if !matches!(self.last, Last::Atom | Last::Ring | Last::BondAfterAtom) {
                    return false;
                }
                match self.rings.iter().find(|r| r.label == label) {
                    Some(r) => {
                        let o = match (self.pending, r.order) {
                            (Some(a), Some(b)) if a != b => return false,
                            (p, q) => p.or(q).unwrap_or(1),
                        };
                        r.atom != cur
                            && !self.neighbors[cur].contains(&r.atom)
                            && self.budget[cur] >= o
                            && self.budget[r.atom] + r.reserved >= o
                            && (nr == 1 || self.can_grow(self.budget[cur] - o, false))
                    }
                    None => {
                        let o = self.pending.unwrap_or(1);
                        self.budget[cur] >= o && self.fits(nb, nr + 1) && self.can_grow(self.budget[cur] - o, false)
                    }
                }
            }
            TokenKind::Dot => self.can_end() && self.fits(0, 0),
            TokenKind::AromaticAtom | TokenKind::OtherBond => false,
        }
    }

    /// Apply a token already checked with [`allows`](Self::allows).
    pub(crate) fn apply(&mut self, kind: TokenKind) {
        self.len += 1;
        match kind {
            TokenKind::Atom { capacity } => {
                let id = self.budget.len();
                let mut own = capacity;
                self.neighbors.push(Vec::new());
                if let (Some(cur), false) = (self.current, matches!(self.last, Last::Start | Last::Dot)) {
                    let o = self.pending.take().unwrap_or(1);
                    self.budget[cur] -= o;
                    own -= o;
                    self.neighbors[cur].push(id);
                    self.neighbors[id].push(cur);
                }
                self.budget.push(own);
                self.current = Some(id);
                self.last = Last::Atom;
            }
            TokenKind::Bond(o) => {
                self.pending = Some(o);
                self.last = if self.after_atom() && self.last != Last::Close {
                    Last::BondAfterAtom
                } else {
                    Last::Bond
                };
            }
            TokenKind::Open => {
                self.branches.push(self.current.expect("open after atom"));
                self.last = Last::Open;
            }
            TokenKind::Close => {
                self.current = self.branches.pop();
                self.last = Last::Close;
            }
            TokenKind::Ring(label) => {
                let cur = self.current.expect("ring after atom");
                if let Some(pos) = self.rings.iter().position(|r| r.label == label) {
                    let r = self.rings.remove(pos);
                    let o = self.pending.take().or(r.order).unwrap_or(1);
                    self.budget[cur] -= o;
                    self.budget[r.atom] -= o - r.reserved;
                    self.neighbors[cur].push(r.atom);
                    self.neighbors[r.atom].push(cur);
                } else {
                    let order = self.pending.take();
                    let o = order.unwrap_or(1);
                    self.budget[cur] -= o;
                    self.rings.push(OpenRing {
                        label,
                        atom: cur,
                        order,
                        reserved: o,
                    });
                }
                self.last = Last::Ring;
            }
            TokenKind::Dot => {
                self.last = Last::Dot;
            }
            TokenKind::AromaticAtom | TokenKind::OtherBond => unreachable!("masked token applied"),
        }
    }
}
