mod common;

use std::collections::HashSet;

use molprompt::dataset::{build_pairs, parse_library, BuildConfig, Library};
use molprompt::evaluation::{success_rate, validity_ratio, ConstraintSpec};
use molprompt::generators::{
    external_generate, parse_responses, retrieval_generate, sample, tokenize, train_ngram, BridgeConfig,
    GenerationRequest, GeneratorError, NGramModel, RetrievalIndex,
};
use molprompt::teachers::{Lexicon, TeacherSet};
use molprompt::{canonicalize, parse_smiles};

fn teachers() -> TeacherSet {
    TeacherSet::with_lexicon(Lexicon::bundled())
}

fn small_pairs() -> Vec<molprompt::dataset::TextMoleculePair> {
    let text: Vec<String> = Library::bundled().entries.iter().take(400).map(|e| e.smiles.as_str().to_string()).collect();
    build_pairs(&parse_library(&text.join("\n")), &teachers(), &BuildConfig::default()).unwrap().pairs
}

#[test]
fn tokenizer_splits_multi_char_atoms_and_ring_labels() {
    assert_eq!(tokenize("ClC[NH3+]Br%12").unwrap(), ["Cl", "C", "[NH3+]", "Br", "%12"]);
    assert_eq!(tokenize("C1=CC=CC=C1").unwrap().concat(), "C1=CC=CC=C1");
    assert!(matches!(tokenize("C[NH3"), Err(GeneratorError::Token(_, _))));
}

#[test]
fn ngram_samples_are_valid_seeded_and_survive_serialization() {
    let pairs = small_pairs();
    let model = train_ngram(&pairs, 4).unwrap();
    let task = model.tasks().next().unwrap().to_string();
    let a = sample(&model, &task, 500, 9).unwrap();
    assert_eq!(a.len(), 500);
    assert!(validity_ratio(&a) >= 99.0);
    assert_eq!(a, sample(&model, &task, 500, 9).unwrap());
    assert_ne!(a, sample(&model, &task, 500, 10).unwrap());
    let back = NGramModel::from_bytes(&model.to_bytes()).unwrap();
    assert_eq!(back, model);
    assert_eq!(sample(&back, &task, 500, 9).unwrap(), a);
}

#[test]
fn ngram_errors() {
    let pairs = small_pairs();
    assert!(matches!(train_ngram(&[], 4), Err(GeneratorError::EmptyDataset)));
    assert!(matches!(train_ngram(&pairs, 0), Err(GeneratorError::InvalidOrder(0))));
    assert!(matches!(train_ngram(&pairs, 7), Err(GeneratorError::InvalidOrder(7))));
    let model = train_ngram(&pairs, 3).unwrap();
    assert!(matches!(sample(&model, "NOPE", 5, 0), Err(GeneratorError::UnknownTask(_))));
    assert!(NGramModel::from_bytes(b"garbage").is_err());
}

#[test]
fn retrieval_draws_distinct_library_members_that_satisfy_the_spec() {
    let lib = Library::bundled();
    let index = RetrievalIndex::new(&lib, teachers());
    let spec = ConstraintSpec::parse("FG:pyridine+QED").unwrap();
    let out = retrieval_generate(&index, &spec, 200, 3).unwrap();
    let canon: HashSet<_> = out.iter().map(|s| canonicalize(&parse_smiles(s).unwrap())).collect();
    assert_eq!(canon.len(), out.len());
    assert!(canon.is_subset(&lib.canonical_set()));
    assert_eq!(success_rate(&out, &spec, index.teachers()).unwrap(), 100.0);
    assert_eq!(out, retrieval_generate(&index, &spec, 200, 3).unwrap());
    let impossible = ConstraintSpec::parse("FG:pyridine+LogP:40:0.1").unwrap();
    assert!(matches!(retrieval_generate(&index, &impossible, 5, 0), Err(GeneratorError::EmptyPool(_))));
}

fn requests() -> Vec<GenerationRequest> {
    vec![
        GenerationRequest { id: "a".into(), prompt: "p".into(), task_id: None, n: 2 },
        GenerationRequest { id: "b".into(), prompt: "q".into(), task_id: Some("FG".into()), n: 1 },
    ]
}

#[test]
fn bridge_responses_are_ordered_truncated_and_checked() {
    let reqs = requests();
    let text = "{\"id\":\"b\",\"smiles\":[\"CCO\",\"CCN\"]}\n\n{\"id\":\"a\",\"smiles\":[\"C\"]}\n";
    let out = parse_responses(text, &reqs).unwrap();
    assert_eq!(out[0].id, "a");
    assert_eq!(out[0].smiles_list, ["C"]);
    assert_eq!(out[1].smiles_list, ["CCO"]);
    let missing = parse_responses("{\"id\":\"a\",\"smiles\":[]}", &reqs).unwrap();
    assert!(missing[1].smiles_list.is_empty());
    for (bad, line) in [
        ("{\"id\":\"z\",\"smiles\":[]}", 1),
        ("{\"id\":\"a\",\"smiles\":[]}\n{\"id\":\"a\",\"smiles\":[]}", 2),
        ("not json", 1),
    ] {
        assert!(matches!(parse_responses(bad, &reqs), Err(GeneratorError::Protocol { line: l, .. }) if l == line));
    }
}

#[cfg(unix)]
#[test]
fn bridge_runs_a_command_and_times_out() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("echo.sh");
    std::fs::write(
        &script,
        "#!/bin/sh\nsed 's/\"prompt\":\"[^\"]*\".*/\"smiles\":[\"CCO\"]}/' \"$1\" > \"$2\"\n",
    )
    .unwrap();
    let sh = |s: &str| vec!["sh".to_string(), s.to_string()];
    let config = BridgeConfig::new(sh(script.to_str().unwrap()), dir.path().to_path_buf());
    let out = external_generate(&config, &requests()).unwrap();
    assert_eq!(out[0].smiles_list, ["CCO"]);
    assert_eq!(out[1].smiles_list, ["CCO"]);
    assert!(external_generate(&config, &[]).unwrap().is_empty());

    let mut waiting = BridgeConfig::new(Vec::new(), dir.path().to_path_buf());
    waiting.timeout = std::time::Duration::from_millis(100);
    assert!(matches!(external_generate(&waiting, &requests()), Err(GeneratorError::BridgeTimeout(_))));
}
