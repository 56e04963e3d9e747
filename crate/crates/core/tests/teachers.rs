mod common;

use molprompt::parse_smiles;
use molprompt::teachers::{
    annotate, classify_score, f1, iupac_fragments, train_classifier, verify_fact, ClassifierConfig, ClassifierModel,
    Fact, FactKind, FactSource, LabeledSet, Lexicon, ScoreTable, TeacherError, TeacherSet,
};

use common::*;

#[test]
fn worked_iupac_example() {
    assert_eq!(iupac_fragments(WORKED_NAME), ["methyl", "methylsulfonylphenyl", "methanamine"]);
}

#[test]
fn iupac_fixture_names() {
    let rows = iupac_fixture();
    assert_eq!(rows.len(), 50);
    let misses: Vec<&String> = rows.iter().filter(|(n, want)| &iupac_fragments(n) != want).map(|r| &r.0).collect();
    assert!(misses.len() <= 5, "{misses:?}");
}

#[test]
fn figure_molecule_annotation() {
    let t = TeacherSet::with_lexicon(Lexicon::bundled());
    let m = parse_smiles(FIGURE_MOLECULE).unwrap();
    let r = annotate(&m, None, &t).unwrap();
    let groups: Vec<&str> = r.facts.iter().filter_map(|f| f.functional_group()).collect();
    for g in ["pyrrolidine", "methoxy", "chloro", "hydroxy", "phenol"] {
        assert!(groups.contains(&g), "{g} missing from {groups:?}");
    }
    let keys: Vec<_> = r.facts.iter().map(|f| f.key()).collect();
    let mut dedup = keys.clone();
    dedup.sort();
    dedup.dedup();
    assert_eq!(keys.len(), dedup.len());
    for f in &r.facts {
        assert!(verify_fact(&m, f, None, &t), "{f:?}");
    }
}

#[test]
fn verification_rejects_false_facts() {
    let t = TeacherSet::with_lexicon(Lexicon::bundled());
    let benzene = parse_smiles("c1ccccc1").unwrap();
    assert!(!verify_fact(&benzene, &fg("pyridine"), None, &t));
    assert!(verify_fact(&benzene, &fg("phenyl"), None, &t));
    let logp = Fact::new(FactKind::LogP { value: 2.0 }, FactSource::Descriptors);
    assert!(!verify_fact(&benzene, &logp, None, &t));
    let from_name = Fact::new(FactKind::FunctionalGroup { name: "methanamine".into() }, FactSource::Iupac);
    let m = parse_smiles("Cc1ccc(S(C)(=O)=O)cc1CN").unwrap();
    assert!(verify_fact(&m, &from_name, Some(WORKED_NAME), &t));
    assert!(!verify_fact(&m, &from_name, None, &t));
}

#[test]
fn score_table_feeds_named_facts() {
    let mut t = TeacherSet::with_lexicon(Lexicon::bundled());
    t.scores = ScoreTable::parse("# comment\nOCC\tDRD2\t0.8\nc1ccccc1\tBBB\t0.2\n").unwrap();
    let ethanol = parse_smiles("CCO").unwrap();
    let r = annotate(&ethanol, None, &t).unwrap();
    let fact = r.facts.iter().find(|f| matches!(f.kind, FactKind::TargetAffinity { .. })).unwrap();
    assert!(fact.is_positive());
    assert!(verify_fact(&ethanol, fact, None, &t));
    assert!(matches!(ScoreTable::parse("CCO\tDRD2\t1.5"), Err(TeacherError::Format { line: 1, .. })));
    assert!(matches!(ScoreTable::parse("CCO\tDRD2"), Err(TeacherError::Format { line: 1, .. })));
}

#[test]
fn f1_reference_values() {
    assert!((f1(&[true, true, false, true], &[true, true, true, false]) - 2.0 / 3.0).abs() < 1e-12);
    assert_eq!(f1(&[false, false], &[false, false]), 0.0);
    assert_eq!(f1(&[true, false], &[true, false]), 1.0);
}

#[test]
fn classifier_learns_a_substructure_label_and_round_trips() {
    let (set, _) = substructure_task("phenyl");
    let config = ClassifierConfig::default();
    let a = train_classifier("aryl", &set, &config).unwrap();
    let b = train_classifier("aryl", &set, &config).unwrap();
    assert_eq!(a.model.to_bytes(), b.model.to_bytes());
    assert!(a.train_f1 > 0.8, "{}", a.train_f1);
    let back = ClassifierModel::from_bytes(&a.model.to_bytes()).unwrap();
    let m = parse_smiles("c1ccccc1CCO").unwrap();
    assert_eq!(classify_score(&back, &m), classify_score(&a.model, &m));
    let score = classify_score(&back, &m);
    assert!((0.0..=1.0).contains(&score));
}

#[test]
fn classifier_needs_both_labels() {
    let set = LabeledSet::new(vec![("CCO".into(), true), ("CCN".into(), true)]);
    let err = set.and_then(|s| train_classifier("x", &s, &ClassifierConfig::default()).map(|_| ()));
    assert!(matches!(err, Err(TeacherError::DegenerateLabels)));
}
