mod common;

use std::collections::HashSet;

use molprompt::fingerprints::{default_fingerprint, morgan_fingerprint, tanimoto, Fingerprint};
use molprompt::parse_smiles;
use proptest::prelude::*;

use common::*;

fn bitset(s: &str) -> HashSet<u32> {
    default_fingerprint(&parse_smiles(s).unwrap()).bits().into_iter().collect()
}

#[test]
fn identical_molecules_have_similarity_one() {
    for s in corpus().iter().take(50) {
        let f = default_fingerprint(&parse_smiles(s).unwrap());
        assert_eq!(tanimoto(&f, &f).unwrap(), 1.0);
    }
}

#[test]
fn parameters_must_agree() {
    let m = parse_smiles("CCO").unwrap();
    let a = morgan_fingerprint(&m, 2, 2048).unwrap();
    let b = morgan_fingerprint(&m, 2, 1024).unwrap();
    let c = morgan_fingerprint(&m, 3, 2048).unwrap();
    assert!(tanimoto(&a, &b).is_err());
    assert!(tanimoto(&a, &c).is_err());
    assert!(morgan_fingerprint(&m, 2, 0).is_err());
}

#[test]
fn from_bits_folds_and_checks_size() {
    let f = Fingerprint::from_bits([3, 512 + 3, 7], 2, 512).unwrap();
    assert_eq!(f.bits(), vec![3, 7]);
    assert!(Fingerprint::from_bits([3], 2, 100).is_err());
}

#[test]
fn larger_radius_sets_no_fewer_bits() {
    for m in corpus_mols().iter().take(50) {
        let r1 = morgan_fingerprint(m, 1, 2048).unwrap().count_ones();
        let r2 = morgan_fingerprint(m, 2, 2048).unwrap().count_ones();
        assert!(r2 >= r1);
    }
}

fn pair() -> impl Strategy<Value = (String, String)> {
    let c = corpus();
    let n = c.len();
    (0..n, 0..n).prop_map(move |(i, j)| (c[i].clone(), c[j].clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn tanimoto_matches_set_formula_and_is_symmetric((a, b) in pair()) {
        let fa = default_fingerprint(&parse_smiles(&a).unwrap());
        let fb = default_fingerprint(&parse_smiles(&b).unwrap());
        let t = tanimoto(&fa, &fb).unwrap();
        prop_assert_eq!(t, tanimoto(&fb, &fa).unwrap());
        prop_assert!((t - set_tanimoto(&bitset(&a), &bitset(&b))).abs() <= 1e-12);
        prop_assert!((0.0..=1.0).contains(&t));
    }
}
