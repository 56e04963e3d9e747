//! Periodic table data: symbols, average atomic weights and the valence model
//! used for implicit hydrogen assignment and valence checks.

/// (symbol, average atomic weight) indexed by atomic number - 1.
const ELEMENTS: [(&str, f64); 118] = [
    ("H", 1.008), ("He", 4.003), ("Li", 6.941), ("Be", 9.012), ("B", 10.812),
    ("C", 12.011), ("N", 14.007), ("O", 15.999), ("F", 18.998), ("Ne", 20.18),
    ("Na", 22.99), ("Mg", 24.305), ("Al", 26.982), ("Si", 28.086), ("P", 30.974),
    ("S", 32.067), ("Cl", 35.453), ("Ar", 39.948), ("K", 39.098), ("Ca", 40.078),
    ("Sc", 44.956), ("Ti", 47.867), ("V", 50.944), ("Cr", 51.996), ("Mn", 54.938),
    ("Fe", 55.845), ("Co", 58.933), ("Ni", 58.693), ("Cu", 63.546), ("Zn", 65.39),
    ("Ga", 69.723), ("Ge", 72.61), ("As", 74.922), ("Se", 78.96), ("Br", 79.904),
    ("Kr", 83.8), ("Rb", 85.468), ("Sr", 87.62), ("Y", 88.906), ("Zr", 91.224),
    ("Nb", 92.906), ("Mo", 95.94), ("Tc", 98.0), ("Ru", 101.07), ("Rh", 102.906),
    ("Pd", 106.42), ("Ag", 107.868), ("Cd", 112.412), ("In", 114.818), ("Sn", 118.711),
    ("Sb", 121.76), ("Te", 127.6), ("I", 126.904), ("Xe", 131.29), ("Cs", 132.905),
    ("Ba", 137.328), ("La", 138.906), ("Ce", 140.116), ("Pr", 140.908), ("Nd", 144.24),
    ("Pm", 145.0), ("Sm", 150.36), ("Eu", 151.964), ("Gd", 157.25), ("Tb", 158.925),
    ("Dy", 162.5), ("Ho", 164.93), ("Er", 167.26), ("Tm", 168.934), ("Yb", 173.04),
    ("Lu", 174.967), ("Hf", 178.49), ("Ta", 180.948), ("W", 183.84), ("Re", 186.207),
    ("Os", 190.23), ("Ir", 192.217), ("Pt", 195.078), ("Au", 196.967), ("Hg", 200.59),
    ("Tl", 204.383), ("Pb", 207.2), ("Bi", 208.98), ("Po", 209.0), ("At", 210.0),
    ("Rn", 222.0), ("Fr", 223.0), ("Ra", 226.0), ("Ac", 227.0), ("Th", 232.038),
    ("Pa", 231.036), ("U", 238.029), ("Np", 237.0), ("Pu", 244.0), ("Am", 243.0),
    ("Cm", 247.0), ("Bk", 247.0), ("Cf", 251.0), ("Es", 252.0), ("Fm", 257.0),
    ("Md", 258.0), ("No", 259.0), ("Lr", 262.0), ("Rf", 267.0), ("Db", 268.0),
    ("Sg", 269.0), ("Bh", 270.0), ("Hs", 269.0), ("Mt", 278.0), ("Ds", 281.0),
    ("Rg", 281.0), ("Cn", 285.0), ("Nh", 284.0), ("Fl", 289.0), ("Mc", 288.0),
    ("Lv", 293.0), ("Ts", 292.0), ("Og", 294.0),
];

pub const HYDROGEN: u8 = 1;
pub const BORON: u8 = 5;
pub const CARBON: u8 = 6;
pub const NITROGEN: u8 = 7;
pub const OXYGEN: u8 = 8;
pub const FLUORINE: u8 = 9;
pub const PHOSPHORUS: u8 = 15;
pub const SULFUR: u8 = 16;
pub const CHLORINE: u8 = 17;
pub const BROMINE: u8 = 35;
pub const IODINE: u8 = 53;

pub fn symbol(z: u8) -> &'static str {
    ELEMENTS[z as usize - 1].0
}

pub fn atomic_weight(z: u8) -> f64 {
    ELEMENTS[z as usize - 1].1
}

pub fn from_symbol(sym: &str) -> Option<u8> {
    ELEMENTS
        .iter()
        .position(|(s, _)| *s == sym)
        .map(|i| (i + 1) as u8)
}

/// Elements that may be written without brackets.
pub fn is_organic_subset(z: u8) -> bool {
    matches!(
        z,
        BORON | CARBON | NITROGEN | OXYGEN | PHOSPHORUS | SULFUR | FLUORINE | CHLORINE | BROMINE | IODINE
    )
}

/// Elements allowed as lowercase aromatic atoms outside brackets.
pub fn is_organic_aromatic(z: u8) -> bool {
    matches!(z, BORON | CARBON | NITROGEN | OXYGEN | PHOSPHORUS | SULFUR)
}

/// Elements allowed as lowercase aromatic atoms inside brackets.
pub fn is_bracket_aromatic(z: u8) -> bool {
    is_organic_aromatic(z) || matches!(z, 33 | 34 | 52) // as, se, te
}

/// Default valences for unbracketed atoms; implicit hydrogens fill up to the
/// smallest listed valence that accommodates the explicit bonds.
pub fn default_valences(z: u8) -> &'static [u8] {
    match z {
        BORON => &[3],
        CARBON => &[4],
        NITROGEN => &[3],
        OXYGEN => &[2],
        PHOSPHORUS => &[3, 5],
        SULFUR => &[2, 4, 6],
        FLUORINE | CHLORINE | BROMINE | IODINE => &[1],
        _ => &[],
    }
}

/// Row of the periodic table (1-based).
fn period(z: u8) -> u8 {
    match z {
        1..=2 => 1,
        3..=10 => 2,
        11..=18 => 3,
        19..=36 => 4,
        37..=54 => 5,
        55..=86 => 6,
        _ => 7,
    }
}

/// Number of valence electrons for main-group elements, `None` otherwise.
fn main_group_electrons(z: u8) -> Option<i32> {
    let group = match z {
        1 | 3 | 11 | 19 | 37 | 55 | 87 => 1,
        4 | 12 | 20 | 38 | 56 | 88 => 2,
        5 | 13 | 31 | 49 | 81 => 3,
        6 | 14 | 32 | 50 | 82 => 4,
        7 | 15 | 33 | 51 | 83 => 5,
        8 | 16 | 34 | 52 | 84 => 6,
        9 | 17 | 35 | 53 | 85 => 7,
        2 | 10 | 18 | 36 | 54 | 86 => 8,
        _ => return None,
    };
    Some(group)
}

/// Allowed total valences (bond orders plus hydrogens) for an atom of element
/// `z` carrying formal charge `charge`. Charged atoms take the valence list of
/// their isoelectronic neutral neighbour. `None` means the element is outside
/// the valence model (transition metals etc.) and is not checked.
pub fn allowed_valences(z: u8, charge: i32) -> Option<Vec<u8>> {
    let electrons = main_group_electrons(z)? - charge;
    let heavy = period(z) >= 3;
    let list: Vec<u8> = match electrons {
        e if e <= 0 => vec![0],
        1 => vec![1],
        2 => vec![2],
        3 => vec![3],
        4 => vec![4],
        5 if heavy => vec![3, 5],
        5 => vec![3],
        6 if heavy => vec![2, 4, 6],
        6 => vec![2],
        7 if heavy => vec![1, 3, 5, 7],
        7 => vec![1],
        8 if heavy => vec![0, 2, 4, 6],
        _ => vec![0],
    };
    if z == HYDROGEN {
        return Some(if charge == 0 { vec![1] } else { vec![0] });
    }
    Some(list)
}

pub fn max_valence(z: u8, charge: i32) -> Option<u8> {
    allowed_valences(z, charge).and_then(|v| v.iter().copied().max())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symbols_round_trip() {
        for z in 1..=118u8 {
            assert_eq!(from_symbol(symbol(z)), Some(z));
        }
        assert_eq!(from_symbol("Xx"), None);
    }

    #[test]
    fn charged_atoms_are_isoelectronic() {
        assert_eq!(allowed_valences(NITROGEN, 1), Some(vec![4]));
        assert_eq!(allowed_valences(OXYGEN, -1), Some(vec![1]));
        assert_eq!(allowed_valences(OXYGEN, 1), Some(vec![3]));
        assert_eq!(allowed_valences(CARBON, -1), Some(vec![3]));
        assert_eq!(allowed_valences(SULFUR, 0), Some(vec![2, 4, 6]));
        assert_eq!(allowed_valences(26, 0), None);
    }
}
