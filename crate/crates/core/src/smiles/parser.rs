//! SMILES lexer and parser producing an unsanitized atom/bond list.

use super::element;
use super::error::SmilesError;
use super::graph::{Atom, Bond, BondDirection, BondOrder, Chirality};

/// Atoms and bonds exactly as written, before hydrogen assignment,
/// kekulization and ring perception.
#[derive(Debug, Default)]
pub(crate) struct RawMolecule {
    pub atoms: Vec<Atom>,
    pub bonds: Vec<RawBond>,
}

#[derive(Debug, Clone)]
pub(crate) struct RawBond {
    pub a: usize,
    pub b: usize,
    /// `None` when no bond symbol was written.
    pub symbol: Option<BondSymbol>,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub(crate) enum BondSymbol {
    Single,
    Double,
    Triple,
    Aromatic,
    Up,
    Down,
}

impl RawBond {
    pub fn into_bond(self, atoms: &[Atom]) -> Bond {
        let both_aromatic = atoms[self.a].aromatic && atoms[self.b].aromatic;
        let (order, direction) = match self.symbol {
            None if both_aromatic => (BondOrder::Aromatic, None),
            None => (BondOrder::Single, None),
            Some(BondSymbol::Single) => (BondOrder::Single, None),
            Some(BondSymbol::Double) => (BondOrder::Double, None),
            Some(BondSymbol::Triple) => (BondOrder::Triple, None),
            Some(BondSymbol::Aromatic) => (BondOrder::Aromatic, None),
            Some(BondSymbol::Up) => (BondOrder::Single, Some(BondDirection::Up)),
            Some(BondSymbol::Down) => (BondOrder::Single, Some(BondDirection::Down)),
        };
        let kekule = match order {
            BondOrder::Double => 2,
            BondOrder::Triple => 3,
            _ => 1,
        };
        Bond {
            a: self.a,
            b: self.b,
            order,
            kekule,
            direction,
        }
    }
}

struct Cursor<'a> {
    text: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<u8> {
        self.text.get(self.pos).copied()
    }
    fn peek_at(&self, k: usize) -> Option<u8> {
        self.text.get(self.pos + k).copied()
    }
    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }
    fn lex_error(&self, msg: &str) -> SmilesError {
        SmilesError::Lex {
            position: self.pos,
            message: msg.to_string(),
        }
    }
    fn number(&mut self) -> Option<u32> {
        let start = self.pos;
        let mut value: u32 = 0;
        while let Some(c @ b'0'..=b'9') = self.peek() {
            value = value.saturating_mul(10).saturating_add((c - b'0') as u32);
            self.pos += 1;
        }
        (self.pos > start).then_some(value)
    }
}

fn new_atom(element: u8, aromatic: bool, index: usize) -> Atom {
    Atom {
        element,
        charge: 0,
        isotope: None,
        aromatic,
        explicit_h: 0,
        bracket: false,
        chirality: Chirality::None,
        index,
    }
}

fn organic_atom(cur: &mut Cursor, index: usize) -> Result<Option<Atom>, SmilesError> {
    let c = match cur.peek() {
        Some(c) => c,
        None => return Ok(None),
    };
    let (z, aromatic, len) = match c {
        b'C' if cur.peek_at(1) == Some(b'l') => (element::CHLORINE, false, 2),
        b'B' if cur.peek_at(1) == Some(b'r') => (element::BROMINE, false, 2),
        b'B' => (element::BORON, false, 1),
        b'C' => (element::CARBON, false, 1),
        b'N' => (element::NITROGEN, false, 1),
        b'O' => (element::OXYGEN, false, 1),
        b'P' => (element::PHOSPHORUS, false, 1),
        b'S' => (element::SULFUR, false, 1),
        b'F' => (element::FLUORINE, false, 1),
        b'I' => (element::IODINE, false, 1),
        b'b' => (element::BORON, true, 1),
        b'c' => (element::CARBON, true, 1),
        b'n' => (element::NITROGEN, true, 1),
        b'o' => (element::OXYGEN, true, 1),
        b'p' => (element::PHOSPHORUS, true, 1),
        b's' => (element::SULFUR, true, 1),
        _ => return Ok(None),
    };
    cur.pos += len;
    Ok(Some(new_atom(z, aromatic, index)))
}

fn bracket_atom(cur: &mut Cursor, index: usize) -> Result<Atom, SmilesError> {
    let open = cur.pos;
    cur.bump(); // '['
    let isotope = match cur.number() {
        Some(0) => return Err(cur.lex_error("isotope must be positive")),
        Some(n) if n > u16::MAX as u32 => return Err(cur.lex_error("isotope out of range")),
        Some(n) => Some(n as u16),
        None => None,
    };
    let first = cur.peek().ok_or_else(|| cur.lex_error("unterminated bracket atom"))?;
    let (z, aromatic) = if first.is_ascii_lowercase() {
        // aromatic symbols: two-letter forms first
        let two = [first, cur.peek_at(1).unwrap_or(0)];
        let (sym, len) = match &two {
            b"se" => ("Se", 2),
            b"as" => ("As", 2),
            b"te" => ("Te", 2),
            _ => {
                let s = match first {
                    b'b' => "B",
                    b'c' => "C",
                    b'n' => "N",
                    b'o' => "O",
                    b'p' => "P",
                    b's' => "S",
                    _ => return Err(cur.lex_error("unknown aromatic symbol")),
                };
                (s, 1)
            }
        };
        cur.pos += len;
        (element::from_symbol(sym).unwrap(), true)
    } else if first.is_ascii_uppercase() {
        let second = cur.peek_at(1);
        let two = second
            .filter(|c| c.is_ascii_lowercase())
            .and_then(|c| element::from_symbol(std::str::from_utf8(&[first, c]).ok()?));
        match two {
            Some(z) => {
                cur.pos += 2;
                (z, false)
            }
            None => {
                let z = element::from_symbol(std::str::from_utf8(&[first]).unwrap())
                    .ok_or_else(|| cur.lex_error("unknown element symbol"))?;
                cur.pos += 1;
                (z, false)
            }
        }
    } else {
        return Err(cur.lex_error("expected element symbol in bracket atom"));
    };
    let mut atom = new_atom(z, aromatic, index);
    atom.bracket = true;
    atom.isotope = isotope;

    if cur.peek() == Some(b'@') {
        cur.bump();
        if cur.peek() == Some(b'@') {
            cur.bump();
            atom.chirality = Chirality::Clockwise;
        } else if matches!(cur.peek(), Some(b'T' | b'A' | b'S' | b'O')) {
            let start = cur.pos;
            cur.pos += 2.min(cur.text.len() - cur.pos);
            cur.number();
            let tag = String::from_utf8_lossy(&cur.text[start..cur.pos]).into_owned();
            atom.chirality = Chirality::Other(tag);
        } else {
            atom.chirality = Chirality::Anticlockwise;
        }
    }
    if cur.peek() == Some(b'H') {
        cur.bump();
        let h = cur.number().unwrap_or(1);
        if h > 16 {
            return Err(cur.lex_error("hydrogen count out of range"));
        }
        atom.explicit_h = h as u8;
    }
    match cur.peek() {
        Some(sign @ (b'+' | b'-')) => {
            cur.bump();
            let unit: i32 = if sign == b'+' { 1 } else { -1 };
            let charge = if let Some(n) = cur.number() {
                unit * n as i32
            } else {
                let mut c = unit;
                while cur.peek() == Some(sign) {
                    cur.bump();
                    c += unit;
                }
                c
            };
            if charge.abs() > 15 {
                return Err(cur.lex_error("charge out of range"));
            }
            atom.charge = charge as i8;
        }
        _ => {}
    }
    if cur.peek() == Some(b':') {
        cur.bump();
        if cur.number().is_none() {
            return Err(cur.lex_error("expected atom class number"));
        }
    }
    if cur.bump() != Some(b']') {
        return Err(SmilesError::Lex {
            position: open,
            message: "malformed bracket atom".into(),
        });
    }
    if aromatic && !element::is_bracket_aromatic(z) {
        return Err(cur.lex_error("element cannot be aromatic"));
    }
    Ok(atom)
}

fn ring_number(cur: &mut Cursor) -> Result<Option<u32>, SmilesError> {
    match cur.peek() {
        Some(c @ b'0'..=b'9') => {
            cur.bump();
            Ok(Some((c - b'0') as u32))
        }
        Some(b'%') => {
            cur.bump();
            let (a, b) = (cur.bump(), cur.bump());
            match (a, b) {
                (Some(a @ b'0'..=b'9'), Some(b @ b'0'..=b'9')) => {
                    Ok(Some(((a - b'0') * 10 + (b - b'0')) as u32))
                }
                _ => Err(cur.lex_error("'%' must be followed by two digits")),
            }
        }
        _ => Ok(None),
    }
}

fn bond_symbol(c: u8) -> Option<BondSymbol> {
    Some(match c {
        b'-' => BondSymbol::Single,
        b'=' => BondSymbol::Double,
        b'#' => BondSymbol::Triple,
        b':' => BondSymbol::Aromatic,
        b'/' => BondSymbol::Up,
        b'\\' => BondSymbol::Down,
        _ => return None,
    })
}

fn compatible(a: Option<BondSymbol>, b: Option<BondSymbol>) -> Option<Option<BondSymbol>> {
    use BondSymbol::*;
    match (a, b) {
        (None, x) | (x, None) => Some(x),
        (Some(x), Some(y)) if x == y => Some(Some(x)),
        // direction marks are relative to each side; keep the opener's
        (Some(x @ (Up | Down)), Some(Up | Down)) => Some(Some(x)),
        (Some(x @ (Up | Down)), Some(Single)) | (Some(Single), Some(x @ (Up | Down))) => Some(Some(x)),
        _ => None,
    }
}

pub(crate) fn parse_raw(text: &str) -> Result<RawMolecule, SmilesError> {
    let trimmed = text.trim();
    if trimmed.is_empty() {
        return Err(SmilesError::Empty);
    }
    let offset = text.len() - text.trim_start().len();
    let mut cur = Cursor {
        text: trimmed.as_bytes(),
        pos: 0,
    };
    let mut mol = RawMolecule::default();
    let mut branch_stack: Vec<usize> = Vec::new();
    let mut prev: Option<usize> = None;
    let mut pending: Option<BondSymbol> = None;
    let mut pending_dot = false;
    // ring number -> (atom, bond symbol, position)
    let mut open_rings: std::collections::BTreeMap<u32, (usize, Option<BondSymbol>, usize)> =
        Default::default();

    let shift = |e: SmilesError| match e {
        SmilesError::Lex { position, message } => SmilesError::Lex {
            position: position + offset,
            message,
        },
        other => other,
    };

    while let Some(c) = cur.peek() {
        let at = cur.pos;
        let atom = if c == b'[' {
            Some(bracket_atom(&mut cur, mol.atoms.len()).map_err(shift)?)
        } else {
            organic_atom(&mut cur, mol.atoms.len()).map_err(shift)?
        };
        if let Some(atom) = atom {
            let idx = mol.atoms.len();
            mol.atoms.push(atom);
            if let Some(p) = prev {
                if !pending_dot {
                    mol.bonds.push(RawBond {
                        a: p,
                        b: idx,
                        symbol: pending.take(),
                    });
                }
            } else if pending.is_some() {
                return Err(SmilesError::Syntax {
                    position: at + offset,
                    message: "bond symbol before first atom".into(),
                });
            }
            pending = None;
            pending_dot = false;
            prev = Some(idx);
            continue;
        }
        if let Some(sym) = bond_symbol(c) {
            if prev.is_none() || pending.is_some() || pending_dot {
                return Err(SmilesError::Syntax {
                    position: at + offset,
                    message: "unexpected bond symbol".into(),
                });
            }
            cur.bump();
            pending = Some(sym);
            continue;
        }
        match c {
            b'.' => {
                if prev.is_none() || pending.is_some() || pending_dot {
                    return Err(SmilesError::Syntax {
                        position: at + offset,
                        message: "unexpected '.'".into(),
                    });
                }
                cur.bump();
                pending_dot = true;
            }
            b'(' => {
                let p = prev.ok_or(SmilesError::Syntax {
                    position: at + offset,
                    message: "branch before first atom".into(),
                })?;
                if pending.is_some() || pending_dot {
                    return Err(SmilesError::Syntax {
                        position: at + offset,
                        message: "branch after bond symbol".into(),
                    });
                }
                cur.bump();
                branch_stack.push(p);
                if cur.peek() == Some(b')') {
                    return Err(SmilesError::Syntax {
                        position: cur.pos + offset,
                        message: "empty branch".into(),
                    });
                }
            }
            b')' => {
                if pending.is_some() || pending_dot {
                    return Err(SmilesError::Syntax {
                        position: at + offset,
                        message: "branch closed after bond symbol".into(),
                    });
                }
                let p = branch_stack.pop().ok_or(SmilesError::Syntax {
                    position: at + offset,
                    message: "unmatched ')'".into(),
                })?;
                cur.bump();
                prev = Some(p);
            }
            b'0'..=b'9' | b'%' => {
                let p = match prev {
                    Some(p) if !pending_dot => p,
                    _ => {
                        return Err(SmilesError::Syntax {
                            position: at + offset,
                            message: "ring bond without atom".into(),
                        })
                    }
                };
                let n = ring_number(&mut cur).map_err(shift)?.unwrap();
                let sym = pending.take();
                if let Some((other, osym, _)) = open_rings.remove(&n) {
                    if other == p {
                        return Err(SmilesError::Syntax {
                            position: at + offset,
                            message: "ring bond to itself".into(),
                        });
                    }
                    if mol.bonds.iter().any(|b| (b.a == other && b.b == p) || (b.a == p && b.b == other)) {
                        return Err(SmilesError::Syntax {
                            position: at + offset,
                            message: "duplicate bond".into(),
                        });
                    }
                    let symbol = compatible(osym, sym).ok_or(SmilesError::Syntax {
                        position: at + offset,
                        message: "conflicting ring bond symbols".into(),
                    })?;
                    mol.bonds.push(RawBond { a: other, b: p, symbol });
                } else {
                    open_rings.insert(n, (p, sym, at + offset));
                }
            }
            _ => {
                return Err(SmilesError::Lex {
                    position: at + offset,
                    message: format!("illegal character '{}'", char::from(c).escape_default()),
                })
            }
        }
    }
    if pending.is_some() || pending_dot {
        return Err(SmilesError::Syntax {
            position: text.len(),
            message: "dangling bond at end of input".into(),
        });
    }
    if !branch_stack.is_empty() {
        return Err(SmilesError::UnclosedBranch {
            open: branch_stack.len(),
        });
    }
    if let Some((&n, _)) = open_rings.iter().next() {
        return Err(SmilesError::UnmatchedRingBond { ring: n });
    }
    Ok(mol)
}
