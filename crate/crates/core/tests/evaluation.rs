mod common;

use std::collections::HashSet;

use molprompt::dataset::Library;
use molprompt::evaluation::{
    constraints_satisfied, diversity_score, evaluate, novelty_ratio, success_rate, uniqueness_ratio,
    uniqueness_ratio_with, validity_ratio, ConstraintSpec, EvalError, EvalOptions, UniquenessDenominator,
};
use molprompt::teachers::{Lexicon, TeacherSet};
use molprompt::{canonicalize, parse_smiles, CanonicalSmiles};
use proptest::prelude::*;

use common::*;

fn teachers() -> TeacherSet {
    TeacherSet::with_lexicon(Lexicon::bundled())
}

fn canon_set(v: &[String]) -> HashSet<CanonicalSmiles> {
    v.iter().filter_map(|s| parse_smiles(s).ok()).map(|m| canonicalize(&m)).collect()
}

fn strings(v: &[&str]) -> Vec<String> {
    v.iter().map(|s| s.to_string()).collect()
}

#[test]
fn metric_reference_values() {
    let batch = strings(&["CCO", "OCC", "C1CC", "c1ccccc1", "CCN"]);
    assert_eq!(validity_ratio(&batch), 80.0);
    assert_eq!(uniqueness_ratio(&batch), 75.0);
    assert_eq!(uniqueness_ratio_with(&batch, UniquenessDenominator::All), 60.0);
    let training = canon_set(&strings(&["CCO"]));
    assert!((novelty_ratio(&batch, &training) - 200.0 / 3.0).abs() < 1e-12);
    assert_eq!(validity_ratio::<String>(&[]), 0.0);
    assert_eq!(uniqueness_ratio::<String>(&[]), 0.0);
}

#[test]
fn diversity_needs_two_valid_molecules() {
    assert!(matches!(diversity_score(&strings(&["CCO", "C1CC"])), Err(EvalError::TooFewMolecules(1))));
    assert_eq!(diversity_score(&strings(&["CCO", "OCC"])).unwrap(), 0.0);
}

#[test]
fn spec_parsing() {
    let s = ConstraintSpec::parse("FG:benzamide+QED+DRD2").unwrap();
    assert_eq!(s.task_id, "FG+DRD2+QED");
    assert_eq!(s.constraints.len(), 3);
    for bad in ["", "FG", "LogP:x", "QED:x", "FG:a+"] {
        assert!(matches!(ConstraintSpec::parse(bad), Err(EvalError::InvalidSpec(_))), "{bad}");
    }
    let bare = ConstraintSpec::parse("FG:phenyl+LogP").unwrap();
    assert_eq!(bare, ConstraintSpec::parse("FG:phenyl+LogP:1:1").unwrap());
    assert_eq!(bare.task_id, "FG+LogP");
    let t = teachers();
    let unknown = ConstraintSpec::parse("FG:unobtainium").unwrap();
    assert!(matches!(success_rate(&strings(&["CCO"]), &unknown, &t), Err(EvalError::UnknownFGName(_))));
    let no_model = ConstraintSpec::parse("DRD2").unwrap();
    assert!(matches!(success_rate(&strings(&["CCO"]), &no_model, &t), Err(EvalError::MissingModel(_))));
}

#[test]
fn success_rate_counts_invalid_samples_as_failures() {
    let t = teachers();
    let spec = ConstraintSpec::parse("FG:phenyl").unwrap();
    let batch = strings(&["c1ccccc1C", "CCO", "c1ccc", "c1ccccc1O"]);
    assert_eq!(success_rate(&batch, &spec, &t).unwrap(), 50.0);
    assert!(constraints_satisfied(&parse_smiles("c1ccccc1C").unwrap(), &spec, &t).unwrap());
    assert!(!constraints_satisfied(&parse_smiles("CCO").unwrap(), &spec, &t).unwrap());
}

#[test]
fn report_agrees_with_its_parts() {
    let lib = Library::bundled();
    let samples: Vec<String> = lib.entries.iter().skip(100).take(300).map(|e| e.smiles.as_str().to_string()).collect();
    let training: HashSet<_> = lib.entries.iter().take(200).map(|e| e.smiles.clone()).collect();
    let t = teachers();
    let spec = ConstraintSpec::parse("FG:phenyl+QED").unwrap();
    let r = evaluate(&samples, &spec, &training, &t, &EvalOptions::default()).unwrap();
    assert_eq!(r.n_generated, 300);
    assert_eq!(r.validity_pct, 100.0);
    assert_eq!(r.novelty_pct, novelty_ratio(&samples, &training));
    assert_eq!(r.sr_pct, success_rate(&samples, &spec, &t).unwrap());
    assert!((r.diversity.unwrap() - brute_diversity(&samples)).abs() <= 1e-12);
    assert_eq!(r.constraint_sr_pct.len(), 2);
    assert!(r.constraint_sr_pct.iter().all(|&c| c >= r.sr_pct));
    assert!(!r.table().is_empty());
}

fn batch() -> impl Strategy<Value = Vec<String>> {
    let c = corpus();
    let n = c.len();
    proptest::collection::vec((0..n, 0u8..8), 0..60).prop_map(move |v| {
        v.into_iter()
            .map(|(i, k)| match k {
                0 => format!("{}(", c[i]),
                _ => c[i].clone(),
            })
            .collect()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ratios_match_set_oracles(b in batch(), t in batch()) {
        prop_assert_eq!(uniqueness_ratio(&b), brute_uniqueness(&b));
        prop_assert_eq!(novelty_ratio(&b, &canon_set(&t)), brute_novelty(&b, &t));
        let v = validity_ratio(&b);
        prop_assert!((0.0..=100.0).contains(&v));
    }

    #[test]
    fn metrics_ignore_batch_order(b in batch(), seed in any::<u64>()) {
        use rand::seq::SliceRandom;
        use rand::SeedableRng;
        let mut shuffled = b.clone();
        shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(validity_ratio(&b), validity_ratio(&shuffled));
        prop_assert_eq!(uniqueness_ratio(&b), uniqueness_ratio(&shuffled));
        if let (Ok(x), Ok(y)) = (diversity_score(&b), diversity_score(&shuffled)) {
            prop_assert!((x - y).abs() <= 1e-12);
        }
    }

    #[test]
    fn adding_a_constraint_never_raises_success(b in batch(), extra in 0usize..4) {
        let t = teachers();
        let more = ["QED", "SA", "LogP:2.5", "FG:carboxamide"][extra];
        let single = success_rate(&b, &ConstraintSpec::parse("FG:phenyl").unwrap(), &t).unwrap();
        let both = success_rate(&b, &ConstraintSpec::parse(&format!("FG:phenyl+{more}")).unwrap(), &t).unwrap();
        prop_assert!(both <= single);
    }
}
