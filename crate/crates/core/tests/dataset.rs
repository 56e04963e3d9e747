mod common;

use std::collections::{BTreeMap, BTreeSet};

use molprompt::dataset::templates::styles_for;
use molprompt::dataset::{
    build_pairs, match_prompt, parse_dataset, parse_library, render_template, route, select_knowledge_subsets,
    task_ids, write_dataset, BuildConfig, DatasetError, Library, Style, StyleWeights, SubsetPolicy,
};
use molprompt::teachers::{annotate, verify_fact, Fact, FactKind, FactSource, KnowledgeRecord, Lexicon, TeacherSet};
use molprompt::{canonicalize, parse_smiles};
use proptest::prelude::*;

use common::*;

fn teachers() -> TeacherSet {
    TeacherSet::with_lexicon(Lexicon::bundled())
}

fn small_library() -> Library {
    let text: Vec<String> = Library::bundled().entries.iter().take(300).map(|e| e.smiles.as_str().to_string()).collect();
    parse_library(&text.join("\n"))
}

#[test]
fn task_templates_render_verbatim() {
    for row in template_fixture().iter().filter(|r| r.group == "tasks") {
        let got = render_template(&row.task, row.style, &facts_for(&row.task)).unwrap();
        assert_eq!(got, expected_text(&row.text, ""), "{}", row.task);
    }
}

#[test]
fn style_variants_render_verbatim() {
    for row in template_fixture().iter().filter(|r| r.group == "styles") {
        let targets: Vec<&str> = if row.task == "DRD2/GSK3" { vec!["DRD2", "GSK3"] } else { vec![row.task.as_str()] };
        for target in targets {
            let task = format!("FG+{target}");
            let got = render_template(&task, row.style, &facts_for(&task)).unwrap();
            assert_eq!(got, expected_text(&row.text, target), "{task} {}", row.style);
        }
    }
}

#[test]
fn worked_rendering_examples() {
    assert_eq!(
        render_template("FG+QED", Style::T0, &[fg("methoxybenzamide")]).unwrap(),
        "The molecule contains methoxybenzamide, it has a high qed score."
    );
    assert_eq!(
        render_template("FG+HIA", Style::T1, &[fg("methyl"), named("HIA", 0.9)]).unwrap(),
        "I want a molecule that contains methyl and can be absorbed by human intestinal"
    );
    let logp = Fact::new(FactKind::LogP { value: 2.46 }, FactSource::Descriptors);
    assert_eq!(
        render_template("FG+LogP", Style::T0, &[fg("phenyl"), logp]).unwrap(),
        "The molecule contains phenyl, its LogP is 2.5"
    );
}

#[test]
fn every_template_is_recognized_after_rendering() {
    for task in task_ids() {
        for style in styles_for(task) {
            let text = render_template(task, style, &facts_for(task)).unwrap();
            assert_eq!(match_prompt(&text), Some((task, style)), "{text}");
        }
    }
    assert_eq!(match_prompt("The molecule contains a,b."), Some(("2FG", Style::T0)));
    assert_eq!(match_prompt("Something else."), None);
}

#[test]
fn rendering_errors() {
    assert!(matches!(
        render_template("NOPE", Style::T0, &[]),
        Err(DatasetError::UnknownTask { .. })
    ));
    assert!(matches!(
        render_template("2FG", Style::T0, &[fg("benzamide")]),
        Err(DatasetError::MissingSlotFact { .. })
    ));
    assert!(matches!(
        render_template("FG+LogP", Style::T0, &[fg("benzamide")]),
        Err(DatasetError::MissingSlotFact { .. })
    ));
    assert!(matches!(render_template("FG+QED", Style::T1, &facts_for("FG+QED")), Err(DatasetError::UnknownTask { .. })));
}

#[test]
fn routing_follows_slot_signatures() {
    assert_eq!(route(&[fg("a"), fg("b")]), Some("2FG"));
    assert_eq!(route(&facts_for("FG+DRD2+QED+SAs")), Some("FG+DRD2+QED+SAs"));
    assert_eq!(route(&[named("BTK", 0.9)]), Some("BTK"));
    let logp = Fact::new(FactKind::LogP { value: 1.0 }, FactSource::Descriptors);
    assert_eq!(route(&[logp]), None);
}

#[test]
fn build_is_deterministic_and_reverifiable() {
    let lib = small_library();
    let t = teachers();
    let config = BuildConfig::default();
    let a = build_pairs(&lib, &t, &config).unwrap();
    let b = build_pairs(&lib, &t, &config).unwrap();
    assert_eq!(write_dataset(&a.pairs), write_dataset(&b.pairs));
    assert_eq!(a.stats.pairs, a.pairs.len());
    let by_smiles: BTreeMap<_, _> = lib.entries.iter().map(|e| (e.smiles.clone(), e)).collect();
    for p in &a.pairs {
        let e = by_smiles[&p.smiles];
        for f in &p.facts_used {
            assert!(verify_fact(&e.mol, f, e.iupac.as_deref(), &t), "{f:?}");
        }
        assert_eq!(render_template(&p.task_id, p.style, &p.facts_used).unwrap(), p.prompt);
    }
    let mut other_seed = config.clone();
    other_seed.policy.seed = 1;
    assert_ne!(write_dataset(&build_pairs(&lib, &t, &other_seed).unwrap().pairs), write_dataset(&a.pairs));
}

#[test]
fn bundled_build_has_both_mapping_patterns() {
    let ds = build_pairs(&Library::bundled(), &teachers(), &BuildConfig::default()).unwrap();
    assert!(ds.stats.one_to_many >= 1);
    assert!(ds.stats.many_to_one >= 1);
    let mut by_prompt: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for p in &ds.pairs {
        by_prompt.entry(&p.prompt).or_default().insert(p.smiles.as_str());
    }
    assert_eq!(by_prompt.values().filter(|s| s.len() >= 2).count(), ds.stats.one_to_many);
}

#[test]
fn dataset_jsonl_round_trips_and_reports_lines() {
    let ds = build_pairs(&small_library(), &teachers(), &BuildConfig::default()).unwrap();
    let text = write_dataset(&ds.pairs);
    assert_eq!(parse_dataset(&format!("# header\n{text}")).unwrap(), ds.pairs);
    let broken = format!("{text}{{not json\n");
    let line = text.lines().count() + 1;
    assert!(matches!(parse_dataset(&broken), Err(DatasetError::Format { line: l, .. }) if l == line));
}

#[test]
fn task_and_style_filters() {
    let lib = small_library();
    let config = BuildConfig {
        tasks: Some(vec!["FG+QED".into()]),
        styles: StyleWeights::only(Style::T0),
        ..BuildConfig::default()
    };
    let ds = build_pairs(&lib, &teachers(), &config).unwrap();
    assert!(!ds.pairs.is_empty());
    assert!(ds.pairs.iter().all(|p| p.task_id == "FG+QED" && p.style == Style::T0));
}

#[test]
fn library_parsing_dedups_and_counts_errors() {
    let lib = parse_library("CCO\tethanol\nOCC\n# note\n\nC1CC\nc1ccccc1\n");
    assert_eq!(lib.len(), 2);
    assert_eq!(lib.stats.duplicates, 1);
    assert_eq!(lib.stats.invalid, 1);
    assert_eq!(lib.stats.errors[0].0, 5);
    assert_eq!(lib.entries[0].iupac.as_deref(), Some("ethanol"));
    assert!(matches!(
        build_pairs(&parse_library(""), &teachers(), &BuildConfig::default()),
        Err(DatasetError::EmptyLibrary)
    ));
}

#[test]
fn invalid_policy_is_rejected() {
    let rec = annotate(&parse_smiles("CCO").unwrap(), None, &teachers()).unwrap();
    for (min, max) in [(0, 2), (3, 2)] {
        let p = SubsetPolicy { min_facts: min, max_facts: max, ..SubsetPolicy::default() };
        assert!(matches!(select_knowledge_subsets(&rec, &p), Err(DatasetError::InvalidPolicy(_))));
    }
    let p = SubsetPolicy { min_facts: 10, max_facts: 12, ..SubsetPolicy::default() };
    assert!(matches!(select_knowledge_subsets(&rec, &p), Err(DatasetError::TooFewFacts { .. })));
}

fn synthetic_record(n: usize) -> KnowledgeRecord {
    let mut r = KnowledgeRecord::new(canonicalize(&parse_smiles("C").unwrap()), None);
    for i in 0..n {
        r.push(fg(&format!("g{i}")));
    }
    r
}

proptest! {
    #[test]
    fn subsets_are_distinct_sized_and_seeded(
        n in 1usize..9, min in 1usize..4, extra in 0usize..3, k in 1usize..12, seed in any::<u64>()
    ) {
        let policy = SubsetPolicy { min_facts: min, max_facts: min + extra, samples_per_molecule: k, seed };
        let rec = synthetic_record(n);
        match select_knowledge_subsets(&rec, &policy) {
            Err(DatasetError::TooFewFacts { .. }) => prop_assert!(n < min),
            Err(e) => prop_assert!(false, "{e}"),
            Ok(subsets) => {
                let total: usize = (min..=(min + extra).min(n)).map(|s| binom(n, s)).sum();
                prop_assert_eq!(subsets.len(), k.min(total));
                let keys: BTreeSet<Vec<String>> = subsets
                    .iter()
                    .map(|s| s.iter().map(|f| f.functional_group().unwrap().to_string()).collect())
                    .collect();
                prop_assert_eq!(keys.len(), subsets.len());
                for s in &subsets {
                    prop_assert!(s.len() >= min && s.len() <= min + extra);
                }
                prop_assert_eq!(select_knowledge_subsets(&rec, &policy).unwrap(), subsets);
            }
        }
    }
}

fn binom(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}
