//! SMILES tokenization with multi-character atoms.

use super::GeneratorError;
use crate::smiles::element;
use crate::smiles::parse_smiles;

/// Split a SMILES string into atoms (`Cl`, `Br`, whole bracket atoms),
/// bonds, branch marks, ring labels (`1`, `%12`) and dots.
pub fn tokenize(smiles: &str) -> Result<Vec<String>, GeneratorError> {
    let bytes = smiles.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        let len = match c {
            '[' => match smiles[i..].find(']') {
                Some(end) => end + 1,
                None => return Err(GeneratorError::Token(smiles.to_string(), i)),
            },
            'C' if bytes.get(i + 1) == Some(&b'l') => 2,
            'B' if bytes.get(i + 1) == Some(&b'r') => 2,
            '%' => {
                if bytes.len() >= i + 3 && bytes[i + 1].is_ascii_digit() && bytes[i + 2].is_ascii_digit() {
                    3
                } else {
                    return Err(GeneratorError::Token(smiles.to_string(), i));
                }
            }
            'B' | 'C' | 'N' | 'O' | 'P' | 'S' | 'F' | 'I' | 'b' | 'c' | 'n' | 'o' | 'p' | 's' => 1,
            '-' | '=' | '#' | '$' | ':' | '/' | '\\' | '(' | ')' | '.' => 1,
            d if d.is_ascii_digit() => 1,
            _ => return Err(GeneratorError::Token(smiles.to_string(), i)),
        };
        out.push(smiles[i..i + len].to_string());
        i += len;
    }
    Ok(out)
}

/// Grammar class of a token, with the bonding capacity of atoms.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) enum TokenKind {
    /// Maximum number of bond orders the atom can still take.
    Atom { capacity: u8 },
    /// Aromatic atoms are never emitted by the decoder.
    AromaticAtom,
    Bond(u8),
    /// Bond marks the decoder does not produce (`:`, `/`, `\`, `$`).
    OtherBond,
    Open,
    Close,
    Ring(u8),
    Dot,
}

pub(crate) fn classify(token: &str) -> TokenKind {
    match token {
        "-" => TokenKind::Bond(1),
        "=" => TokenKind::Bond(2),
        "#" => TokenKind::Bond(3),
        "$" | ":" | "/" | "\\" => TokenKind::OtherBond,
        "(" => TokenKind::Open,
        ")" => TokenKind::Close,
        "." => TokenKind::Dot,
        t if t.starts_with('%') => TokenKind::Ring(t[1..].parse().unwrap_or(0)),
        t if t.len() == 1 && t.as_bytes()[0].is_ascii_digit() => TokenKind::Ring(t.as_bytes()[0] - b'0'),
        t if t.starts_with('[') => match parse_smiles(t) {
            Ok(m) if m.atom_count() == 1 => {
                let a = m.atom(0);
                if a.aromatic {
                    return TokenKind::AromaticAtom;
                }
                let max = element::max_valence(a.element, a.charge as i32).unwrap_or(0);
                TokenKind::Atom {
                    capacity: max.saturating_sub(a.explicit_h),
                }
            }
            _ => TokenKind::AromaticAtom,
        },
        t if t.chars().next().is_some_and(|c| c.is_ascii_lowercase()) => TokenKind::AromaticAtom,
        t => {
            let z = element::from_symbol(t).unwrap_or(0);
            TokenKind::Atom {
                capacity: element::default_valences(z).iter().copied().max().unwrap_or(0),
            }
        }
    }
}
