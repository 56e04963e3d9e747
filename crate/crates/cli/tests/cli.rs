use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

const FIGURE_MOLECULE: &str = "CCN1CCCC1CNC(=O)c1c(OC)ccc(Cl)c1O";

fn molprompt(data_dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_molprompt"))
        .args(args)
        .env("MOLPROMPT_DATA_DIR", data_dir)
        .env_remove("RUST_LOG")
        .output()
        .expect("binary runs")
}

fn ok(data_dir: &Path, args: &[&str]) -> String {
    let out = molprompt(data_dir, args);
    assert!(
        out.status.success(),
        "{args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

/// First `n` molecules of the bundled library as a small library file.
fn small_library(dir: &Path, n: usize) -> PathBuf {
    let text = include_str!("../../core/data/library_10k.tsv");
    let lines: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).take(n).collect();
    let path = dir.join("small.tsv");
    fs::write(&path, lines.join("\n") + "\n").unwrap();
    path
}

fn manifest(path: &Path) -> serde_json::Value {
    let mut name = path.file_name().unwrap().to_os_string();
    name.push(".manifest.json");
    serde_json::from_str(&fs::read_to_string(path.with_file_name(name)).unwrap()).unwrap()
}

#[test]
fn describe_prints_canonical_form_and_descriptors() {
    let dir = tempfile::tempdir().unwrap();
    let out = ok(dir.path(), &["describe", FIGURE_MOLECULE]);
    let canon = molprompt::canonicalize(&molprompt::parse_smiles(FIGURE_MOLECULE).unwrap());
    assert!(out.starts_with(&format!("canonical   {canon}\n")), "{out}");
    for key in ["mw", "logp", "qed", "sa", "hba", "hbd", "tpsa", "arom_rings"] {
        assert!(out.lines().any(|l| l.split_whitespace().next() == Some(key)), "{key} missing in {out}");
    }
    assert!(out.contains("hbd         2"));
}

#[test]
fn describe_writes_json_with_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("d.json");
    ok(dir.path(), &["describe", "c1ccccc1O", "--out", path.to_str().unwrap()]);
    let v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["description"]["canonical"], "c1ccc(cc1)O");
    assert_eq!(v["description"]["descriptors"]["arom_rings"], 1);
    assert_eq!(manifest(&path)["config_digest"], v["config_digest"]);
}

#[test]
fn usage_errors_exit_1() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(code(&molprompt(dir.path(), &["frobnicate"])), 1);
    assert_eq!(code(&molprompt(dir.path(), &["describe"])), 1);
    assert_eq!(code(&molprompt(dir.path(), &["evaluate"])), 1);
    assert_eq!(code(&molprompt(dir.path(), &["build-dataset", "--style", "T9"])), 1);
    let cfg = dir.path().join("bad.toml");
    fs::write(&cfg, "sede = 1\n").unwrap();
    assert_eq!(code(&molprompt(dir.path(), &["describe", "C", "--config", cfg.to_str().unwrap()])), 1);
    assert_eq!(code(&molprompt(dir.path(), &["--help"])), 0);
}

#[test]
fn data_errors_exit_2_with_module_names_and_positions() {
    let dir = tempfile::tempdir().unwrap();
    let out = molprompt(dir.path(), &["describe", "C1CC"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("SmilesError::"));

    let ds = dir.path().join("bad.jsonl");
    fs::write(&ds, "# comment\n{\"text\": 1}\n").unwrap();
    let out = molprompt(dir.path(), &["train-ngram", "--dataset", ds.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("DatasetError::Format: line 2"), "{err}");

    let smi = dir.path().join("s.smi");
    fs::write(&smi, "CCO\n").unwrap();
    let out = molprompt(
        dir.path(),
        &["evaluate", "--samples", smi.to_str().unwrap(), "--spec", "FG:nosuchgroup"],
    );
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("EvalError::UnknownFGName"));

    let out = molprompt(dir.path(), &["ingest", "--library", "/no/such/file.tsv"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn missing_configured_path_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "[paths]\nlexicon = \"/no/such/lexicon.tsv\"\n").unwrap();
    let out = molprompt(dir.path(), &["describe", "C", "--config", cfg.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
}

#[test]
fn flags_override_config_and_seed_is_recorded() {
    let dir = tempfile::tempdir().unwrap();
    let lib = small_library(dir.path(), 50);
    let cfg = dir.path().join("c.toml");
    fs::write(&cfg, "seed = 5\n[policy]\nsamples_per_molecule = 2\n").unwrap();
    let c = cfg.to_str().unwrap();
    let l = lib.to_str().unwrap();
    ok(dir.path(), &["build-dataset", "--config", c, "--library", l]);
    let ds = dir.path().join("dataset.jsonl");
    let m = manifest(&ds);
    assert_eq!(m["seed"], 5);
    assert_eq!(m["config"]["policy"]["samples_per_molecule"], 2);
    ok(dir.path(), &["build-dataset", "--config", c, "--library", l, "--seed", "7"]);
    let m7 = manifest(&ds);
    assert_eq!(m7["seed"], 7);
    assert_ne!(m["config_digest"], m7["config_digest"]);
    let head = fs::read_to_string(&ds).unwrap();
    let first = head.lines().next().unwrap();
    assert!(first.starts_with("# molprompt build-dataset config="));
    assert!(first.contains(m7["config_digest"].as_str().unwrap()));
    assert!(first.ends_with("seed=7"));
}

#[test]
fn style_and_task_flags_shape_the_dataset() {
    let dir = tempfile::tempdir().unwrap();
    let lib = small_library(dir.path(), 200);
    let out = dir.path().join("t.jsonl");
    ok(
        dir.path(),
        &[
            "build-dataset",
            "--library",
            lib.to_str().unwrap(),
            "--task",
            "FG+QED",
            "--out",
            out.to_str().unwrap(),
        ],
    );
    let pairs = molprompt::dataset::read_dataset(&out).unwrap();
    assert!(!pairs.is_empty());
    assert!(pairs.iter().all(|p| p.task_id == "FG+QED"));
}

#[test]
fn env_var_sets_the_data_dir() {
    let dir = tempfile::tempdir().unwrap();
    let lib = small_library(dir.path(), 20);
    let data = dir.path().join("nested/data");
    ok(&data, &["ingest", "--library", lib.to_str().unwrap()]);
    assert!(data.join("library.tsv").exists());
    assert!(data.join("library.tsv.manifest.json").exists());
    let leftovers: Vec<_> = fs::read_dir(&data)
        .unwrap()
        .map(|e| e.unwrap().file_name().to_string_lossy().into_owned())
        .filter(|n| n.contains(".tmp"))
        .collect();
    assert!(leftovers.is_empty(), "{leftovers:?}");
}

fn pipeline(data: &Path, lib: &Path) -> Vec<(String, Vec<u8>)> {
    let l = lib.to_str().unwrap();
    ok(data, &["ingest", "--library", l, "--seed", "11"]);
    ok(data, &["build-dataset", "--seed", "11"]);
    ok(data, &["train-ngram", "--seed", "11"]);
    ok(data, &["generate", "--task", "FG+QED", "--n", "300", "--seed", "11"]);
    let table = ok(data, &["evaluate", "--spec", "FG:phenyl+QED", "--seed", "11"]);
    for key in ["validity", "uniqueness", "novelty", "diversity", "SR"] {
        assert!(table.lines().any(|l| l.starts_with(key)), "{key} missing from\n{table}");
    }
    ["library.tsv", "dataset.jsonl", "model.ngram", "generated.smi", "report.json"]
        .iter()
        .map(|f| (f.to_string(), fs::read(data.join(f)).unwrap()))
        .collect()
}

#[test]
fn pipeline_is_byte_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let lib = small_library(dir.path(), 400);
    let a = pipeline(&dir.path().join("a"), &lib);
    let b = pipeline(&dir.path().join("b"), &lib);
    for ((name, x), (_, y)) in a.iter().zip(&b) {
        assert!(x == y, "{name} differs between runs");
    }
    let model = &a.iter().find(|(n, _)| n == "model.ngram").unwrap().1;
    let digest = manifest(&dir.path().join("a/model.ngram"))["config_digest"].clone();
    let text = String::from_utf8_lossy(model);
    assert!(text.contains(&format!("config\t{}", digest.as_str().unwrap())));
    let report: serde_json::Value = serde_json::from_slice(&a.last().unwrap().1).unwrap();
    assert_eq!(report["evaluation"]["n_generated"], 300);
    assert_eq!(report["evaluation"]["validity_pct"], 100.0);
}

#[test]
fn bundled_library_dataset_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.jsonl");
    let b = dir.path().join("b.jsonl");
    ok(dir.path(), &["build-dataset", "--out", a.to_str().unwrap()]);
    ok(dir.path(), &["build-dataset", "--out", b.to_str().unwrap()]);
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    assert!(manifest(&a)["inputs"][0]["path"] == "<bundled library>");
}

#[test]
fn bridge_round_trip_through_a_script() {
    let dir = tempfile::tempdir().unwrap();
    let script = dir.path().join("echo.sh");
    fs::write(
        &script,
        "#!/bin/sh\nsed 's/.*\"id\":\"\\([^\"]*\\)\".*/{\"id\":\"\\1\",\"smiles\":[\"CCO\",\"c1ccccc1\"]}/' \"$1\" > \"$2\"\n",
    )
    .unwrap();
    #[cfg(unix)]
    {
        use std::os::unix::fs::PermissionsExt;
        fs::set_permissions(&script, fs::Permissions::from_mode(0o755)).unwrap();
    }
    let out = ok(
        dir.path(),
        &[
            "generate",
            "--prompt",
            "The molecule contains benzamide.",
            "--bridge",
            script.to_str().unwrap(),
            "--n",
            "2",
        ],
    );
    assert!(out.contains("generated 2 molecules"));
    let smi = fs::read_to_string(dir.path().join("generated.smi")).unwrap();
    assert_eq!(smi.lines().skip(1).collect::<Vec<_>>(), ["CCO", "c1ccccc1"]);
    let req = fs::read_to_string(dir.path().join("bridge/requests.jsonl")).unwrap();
    assert!(req.contains("\"task_id\":\"FG\""), "{req}");
}

#[test]
fn retrieval_generate_and_classifier_training() {
    let dir = tempfile::tempdir().unwrap();
    let lib = small_library(dir.path(), 2000);
    let l = lib.to_str().unwrap();
    let pos = dir.path().join("pos.smi");
    ok(
        dir.path(),
        &["generate", "--method", "retrieval", "--spec", "FG:phenyl", "--library", l, "--n", "60", "--out", pos.to_str().unwrap()],
    );
    let table = ok(
        dir.path(),
        &["evaluate", "--samples", pos.to_str().unwrap(), "--spec", "FG:phenyl", "--training", l],
    );
    assert!(table.contains("SR            100.00"), "{table}");
    assert!(table.contains("novelty         0.00"), "{table}");

    let positives: Vec<String> = fs::read_to_string(&pos)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#'))
        .map(str::to_string)
        .collect();
    let lib_text = fs::read_to_string(&lib).unwrap();
    let negatives: Vec<&str> = lib_text
        .lines()
        .map(|l| l.split('\t').next().unwrap())
        .filter(|s| !s.contains("c1ccccc1") && !s.contains("c1ccc"))
        .take(60)
        .collect();
    let labels = dir.path().join("labels.tsv");
    let mut text = String::new();
    for s in &positives {
        text.push_str(&format!("{s}\t1\n"));
    }
    for s in &negatives {
        text.push_str(&format!("{s}\t0\n"));
    }
    fs::write(&labels, text).unwrap();
    let out = ok(dir.path(), &["train-classifier", "--name", "PHEN", "--labels", labels.to_str().unwrap()]);
    assert!(out.starts_with("PHEN:"));
    let model = dir.path().join("phen.classifier");
    assert!(model.exists());
    assert_eq!(code(&molprompt(dir.path(), &["train-classifier", "--labels", labels.to_str().unwrap()])), 1);
    let table = ok(
        dir.path(),
        &["evaluate", "--samples", pos.to_str().unwrap(), "--spec", "PHEN", "--classifier", model.to_str().unwrap(), "--training", l],
    );
    assert!(table.contains("PHEN:0.5"));
}
