mod common;

use molprompt::smiles::{BondDirection, Chirality};
use molprompt::{canonicalize, is_valid, parse_smiles, write_kekule_smiles, write_smiles, SmilesError};
use proptest::prelude::*;

use common::*;

#[test]
fn corpus_reaches_a_fixed_point() {
    for s in corpus() {
        let c1 = canonicalize(&parse_smiles(&s).unwrap());
        let c2 = canonicalize(&parse_smiles(c1.as_str()).unwrap());
        assert_eq!(c1, c2, "{s}");
    }
}

#[test]
fn kekule_and_aromatic_forms_agree() {
    let pairs = [
        ("c1ccccc1", "C1=CC=CC=C1"),
        ("c1ccncc1", "C1=CC=NC=C1"),
        ("Cc1ccc(O)cc1", "CC1=CC=C(O)C=C1"),
        ("c1cc[nH]c1", "C1=CNC=C1"),
    ];
    for (a, k) in pairs {
        assert_eq!(canonicalize(&parse_smiles(a).unwrap()), canonicalize(&parse_smiles(k).unwrap()), "{a}");
    }
}

#[test]
fn kekule_writer_round_trips_the_corpus() {
    for m in corpus_mols().iter().take(200) {
        let k = write_kekule_smiles(m);
        let outside_brackets: String = k.split('[').map(|p| p.split_once(']').map_or(p, |x| x.1)).collect();
        assert!(!outside_brackets.chars().any(|c| "bcnops".contains(c)), "{k}");
        assert_eq!(canonicalize(&parse_smiles(&k).unwrap()), canonicalize(m), "{k}");
    }
}

#[test]
fn figure_molecule_parses() {
    let m = parse_smiles(FIGURE_MOLECULE).unwrap();
    assert_eq!(m.atom_count(), 21);
    assert_eq!(m.rings().len(), 2);
}

#[test]
fn charges_and_isotopes_survive_canonicalization() {
    for s in ["C[N+](C)(C)C", "[O-]C(=O)C", "[13CH4]", "[2H]OC"] {
        let c = canonicalize(&parse_smiles(s).unwrap());
        assert_eq!(c, canonicalize(&parse_smiles(c.as_str()).unwrap()), "{s}");
    }
    assert!(canonicalize(&parse_smiles("[O-]C(=O)C").unwrap()).as_str().contains("[O-]"));
    assert!(canonicalize(&parse_smiles("[13CH4]").unwrap()).as_str().contains("13"));
}

#[test]
fn stereo_is_kept_on_the_graph_but_not_in_canonical_identity() {
    let l = parse_smiles("N[C@@H](C)C(=O)O").unwrap();
    let d = parse_smiles("N[C@H](C)C(=O)O").unwrap();
    assert_eq!(l.atom(1).chirality, Chirality::Clockwise);
    assert_eq!(d.atom(1).chirality, Chirality::Anticlockwise);
    assert_eq!(canonicalize(&l), canonicalize(&d));
    let trans = parse_smiles("C/C=C/C").unwrap();
    assert!(trans.bonds().iter().any(|b| b.direction == Some(BondDirection::Up)));
    assert_eq!(canonicalize(&trans), canonicalize(&parse_smiles("C/C=C\\C").unwrap()));
}

#[test]
fn malformed_input_is_rejected_with_a_kind() {
    let cases = [
        ("", "Empty"),
        ("C1CC", "UnmatchedRingBond"),
        ("CC(C", "UnclosedBranch"),
        ("C(C)(C)(C)(C)C", "ValenceError"),
        ("c1cccc1", "KekulizationError"),
        ("C%", "LexError"),
    ];
    for (s, kind) in cases {
        let e: SmilesError = parse_smiles(s).unwrap_err();
        assert_eq!(e.kind(), kind, "{s}: {e}");
        assert!(!is_valid(s));
    }
}

#[test]
fn disconnected_components_are_kept() {
    let c = canonicalize(&parse_smiles("CCO.[Na+].[Cl-]").unwrap());
    assert_eq!(c.as_str().matches('.').count(), 2);
}

fn mol_and_order() -> impl Strategy<Value = (String, Vec<usize>)> {
    let corpus = corpus();
    (0..corpus.len()).prop_flat_map(move |i| {
        let s = corpus[i].clone();
        let n = parse_smiles(&s).unwrap().atom_count();
        (Just(s), Just((0..n).collect::<Vec<_>>()).prop_shuffle())
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn canonical_form_ignores_atom_order((s, order) in mol_and_order()) {
        let m = parse_smiles(&s).unwrap();
        let p = m.permute_atoms(&order);
        prop_assert_eq!(canonicalize(&p), canonicalize(&m));
        let written = write_smiles(&p);
        prop_assert_eq!(canonicalize(&parse_smiles(&written).unwrap()), canonicalize(&m));
    }

    #[test]
    fn parser_never_panics(s in "[CNOcn()=#1-9\\[\\]@+H.]{0,24}") {
        let _ = parse_smiles(&s);
    }
}
