use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::time::Duration;

use molprompt::artifact::{file_digest, sha256_hex};
use molprompt::augmentation::run_augmentation_experiment;
use molprompt::dataset::{build_pairs, ingest_library, match_prompt, parse_dataset, write_dataset, Library};
use molprompt::descriptors::{compute_descriptors_with, DescriptorSet, FragmentTable};
use molprompt::evaluation::{evaluate as eval_batch, ConstraintSpec, EvalOptions, EvalReport};
use molprompt::generators::{
    external_generate, retrieval_generate, sample, train_ngram as fit_ngram, BridgeConfig, GenerationRequest, GeneratorError,
    NGramModel, RetrievalIndex,
};
use molprompt::teachers::{annotate as annotate_mol, train_classifier as fit_classifier, ClassifierModel, LabeledSet, Lexicon, ScoreTable, TeacherSet};
use molprompt::{canonicalize, parse_smiles, CanonicalSmiles};
use rayon::prelude::*;
use serde::Serialize;

use crate::config::{Method, RunConfig};
use crate::error::CliError;
use crate::manifest::Run;

fn out_path(cfg: &RunConfig, out: Option<PathBuf>, default: &str) -> PathBuf {
    out.unwrap_or_else(|| cfg.data_path(default))
}

fn read_text(path: &Path) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))
}

fn report_written(paths: &[PathBuf]) {
    for p in paths {
        log::info!("wrote {}", p.display());
    }
}

/// An explicit or configured library, else `library.tsv` in the data
/// directory when `prefer_ingested`, else the bundled sample library.
fn load_library(cfg: &RunConfig, prefer_ingested: bool, run: &mut Run) -> Result<Library, CliError> {
    let ingested = cfg.data_path("library.tsv");
    let path = cfg
        .paths
        .library
        .clone()
        .or_else(|| (prefer_ingested && ingested.exists()).then_some(ingested));
    match path {
        Some(p) => {
            let lib = ingest_library(&p)?;
            run.input_digest(p.display().to_string(), file_digest(&p).map_err(|e| CliError::io(&p, e))?);
            Ok(lib)
        }
        None => {
            let lib = Library::bundled();
            run.input_bytes("<bundled library>", lib.to_tsv().as_bytes());
            Ok(lib)
        }
    }
}

fn load_teachers(cfg: &RunConfig, run: &mut Run) -> Result<TeacherSet, CliError> {
    let lexicon = match &cfg.paths.lexicon {
        Some(p) => Lexicon::load(p)?,
        None => Lexicon::bundled(),
    };
    let label = cfg.paths.lexicon.as_ref().map_or("<bundled lexicon>".into(), |p| p.display().to_string());
    run.input_digest(label, lexicon.digest());
    let mut classifiers = Vec::new();
    for p in &cfg.paths.models {
        let m = ClassifierModel::load(p)?;
        run.input_digest(p.display().to_string(), m.digest());
        classifiers.push(m);
    }
    let mut scores = ScoreTable::default();
    for p in &cfg.paths.scores {
        scores.merge(ScoreTable::load(p)?);
        run.input_digest(p.display().to_string(), file_digest(p).map_err(|e| CliError::io(p, e))?);
    }
    let fragments = load_fragments(cfg, run)?;
    Ok(TeacherSet {
        lexicon: Some(lexicon),
        classifiers,
        scores,
        fragments,
    })
}

fn load_fragments(cfg: &RunConfig, run: &mut Run) -> Result<Option<FragmentTable>, CliError> {
    match &cfg.paths.fragments {
        Some(p) => {
            let t = FragmentTable::load(p)?;
            run.input_digest(p.display().to_string(), t.digest());
            Ok(Some(t))
        }
        None => {
            run.input_digest("<bundled fragment table>", FragmentTable::bundled().digest());
            Ok(None)
        }
    }
}

/// SMILES lines; blank and `#` lines are skipped, and only the first
/// whitespace-separated field is read.
fn read_smiles_list(path: &Path, run: &mut Run) -> Result<Vec<String>, CliError> {
    let text = read_text(path)?;
    run.input_bytes(path.display().to_string(), text.as_bytes());
    Ok(text
        .lines()
        .filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|l| l.split_whitespace().next().unwrap_or("").to_string())
        .collect())
}

fn smiles_body(smiles: &[String]) -> String {
    let mut body = String::new();
    for s in smiles {
        body.push_str(s);
        body.push('\n');
    }
    body
}

pub fn ingest(cfg: &RunConfig, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("ingest", cfg);
    let lib = load_library(cfg, false, &mut run)?;
    if lib.is_empty() {
        return Err(molprompt::dataset::DatasetError::EmptyLibrary.into());
    }
    let s = &lib.stats;
    println!(
        "read {} lines: {} molecules, {} invalid, {} duplicates",
        s.read,
        lib.len(),
        s.invalid,
        s.duplicates
    );
    let path = out_path(cfg, out, "library.tsv");
    run.text(&path, &lib.to_tsv());
    report_written(&run.finish()?);
    Ok(())
}

pub fn annotate(cfg: &RunConfig, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("annotate", cfg);
    let lib = load_library(cfg, true, &mut run)?;
    let teachers = load_teachers(cfg, &mut run)?;
    let lines: Vec<Option<String>> = lib
        .entries
        .par_iter()
        .map(|e| match annotate_mol(&e.mol, e.iupac.as_deref(), &teachers) {
            Ok(r) => Some(serde_json::to_string(&r).expect("record serializes")),
            Err(err) => {
                log::warn!("molecule {} ({}): {err}", e.index, e.smiles);
                None
            }
        })
        .collect();
    let mut body = String::new();
    let mut n = 0;
    for l in lines.into_iter().flatten() {
        body.push_str(&l);
        body.push('\n');
        n += 1;
    }
    println!("annotated {n} of {} molecules", lib.len());
    let path = out_path(cfg, out, "annotations.jsonl");
    run.text(&path, &body);
    report_written(&run.finish()?);
    Ok(())
}

pub fn build_dataset(cfg: &RunConfig, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("build-dataset", cfg);
    let lib = load_library(cfg, true, &mut run)?;
    let teachers = load_teachers(cfg, &mut run)?;
    let dataset = build_pairs(&lib, &teachers, &cfg.build_config())?;
    let s = &dataset.stats;
    println!(
        "{} pairs from {} molecules ({} distinct prompts, one-to-many {}, many-to-one {})",
        s.pairs, s.molecules, s.distinct_prompts, s.one_to_many, s.many_to_one
    );
    let path = out_path(cfg, out, "dataset.jsonl");
    run.text(&path, &write_dataset(&dataset.pairs));
    let mut stats_path = path.clone().into_os_string();
    stats_path.push(".stats.json");
    run.json(Path::new(&stats_path), "stats", s);
    report_written(&run.finish()?);
    Ok(())
}

pub fn train_ngram(cfg: &RunConfig, dataset: Option<PathBuf>, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("train-ngram", cfg);
    let path = dataset.unwrap_or_else(|| cfg.data_path("dataset.jsonl"));
    let text = read_text(&path)?;
    run.input_bytes(path.display().to_string(), text.as_bytes());
    let pairs = parse_dataset(&text)?;
    let mut model = fit_ngram(&pairs, cfg.ngram.order)?;
    model.seed = cfg.seed;
    println!(
        "order-{} model over {} tokens for {} tasks",
        model.order,
        model.vocabulary.len() - 1,
        model.tasks().count()
    );
    let out = out_path(cfg, out, "model.ngram");
    run.blob(&out, &model.to_bytes());
    report_written(&run.finish()?);
    Ok(())
}

pub fn train_classifier(cfg: &RunConfig, labels: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let name = cfg
        .classifier
        .name
        .clone()
        .ok_or_else(|| CliError::Usage("train-classifier needs --name".into()))?;
    let mut run = Run::new("train-classifier", cfg);
    let data = LabeledSet::load(labels)?;
    run.input_digest(labels.display().to_string(), file_digest(labels).map_err(|e| CliError::io(labels, e))?);
    let outcome = fit_classifier(&name, &data, &cfg.classifier_config())?;
    println!(
        "{name}: {} molecules, train F1 {:.4}, validation F1 {:.4}",
        data.len(),
        outcome.train_f1,
        outcome.val_f1
    );
    let out = out_path(cfg, out, &format!("{}.classifier", name.to_ascii_lowercase()));
    run.blob(&out, &outcome.model.to_bytes());
    report_written(&run.finish()?);
    Ok(())
}

fn resolve_task(cfg: &RunConfig) -> Result<String, CliError> {
    let g = &cfg.generate;
    if let Some(t) = &g.task {
        return Ok(t.clone());
    }
    if let Some(p) = &g.prompt {
        return match_prompt(p)
            .map(|(task, _)| task.to_string())
            .ok_or_else(|| CliError::Usage(format!("prompt {p:?} matches no template")));
    }
    if let Some(s) = &g.spec {
        return Ok(ConstraintSpec::parse(s)?.task_id);
    }
    Err(CliError::Usage("generate needs --task, --prompt or --spec".into()))
}

pub fn generate(cfg: &RunConfig, model: Option<PathBuf>, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("generate", cfg);
    let n = cfg.generate.n;
    let smiles = match cfg.generate.method {
        Method::Ngram => {
            let path = model.unwrap_or_else(|| cfg.data_path("model.ngram"));
            let bytes = std::fs::read(&path).map_err(|e| CliError::io(&path, e))?;
            run.input_bytes(path.display().to_string(), &bytes);
            let model = NGramModel::from_bytes(&bytes)?;
            let task = resolve_task(cfg)?;
            sample(&model, &task, n, cfg.seed)?
        }
        Method::Retrieval => {
            let spec_text = cfg
                .generate
                .spec
                .as_deref()
                .ok_or_else(|| CliError::Usage("retrieval needs --spec".into()))?;
            let spec = ConstraintSpec::parse(spec_text)?;
            let lib = load_library(cfg, true, &mut run)?;
            let teachers = load_teachers(cfg, &mut run)?;
            let index = RetrievalIndex::new(&lib, teachers);
            retrieval_generate(&index, &spec, n, cfg.seed)?
        }
        Method::Bridge => {
            let prompt = cfg
                .generate
                .prompt
                .clone()
                .ok_or_else(|| CliError::Usage("the bridge needs --prompt".into()))?;
            let task_id = cfg
                .generate
                .task
                .clone()
                .or_else(|| match_prompt(&prompt).map(|(t, _)| t.to_string()));
            let bridge = BridgeConfig {
                timeout: Duration::from_secs(cfg.bridge.timeout_secs),
                ..BridgeConfig::new(cfg.bridge.command.clone(), cfg.data_path("bridge"))
            };
            let request = GenerationRequest {
                id: "0".into(),
                prompt,
                task_id,
                n,
            };
            let mut batches = external_generate(&bridge, &[request])?;
            let batch = batches.pop().ok_or(GeneratorError::Protocol {
                line: 0,
                message: "no response".into(),
            })?;
            let resp = bridge.response_path();
            run.input_digest(resp.display().to_string(), file_digest(&resp).map_err(|e| CliError::io(&resp, e))?);
            batch.smiles_list
        }
    };
    println!("generated {} molecules", smiles.len());
    let path = out_path(cfg, out, "generated.smi");
    run.text(&path, &smiles_body(&smiles));
    report_written(&run.finish()?);
    Ok(())
}

/// Canonical training set from a dataset (`.jsonl`) or a library file.
fn load_training(
    cfg: &RunConfig,
    training: Option<PathBuf>,
    run: &mut Run,
) -> Result<HashSet<CanonicalSmiles>, CliError> {
    let default = cfg.data_path("dataset.jsonl");
    let path = training.or_else(|| default.exists().then_some(default));
    match path {
        Some(p) if p.extension().is_some_and(|e| e == "jsonl") => {
            let text = read_text(&p)?;
            run.input_bytes(p.display().to_string(), text.as_bytes());
            Ok(parse_dataset(&text)?.into_iter().map(|pair| pair.smiles).collect())
        }
        Some(p) => {
            let lib = ingest_library(&p)?;
            run.input_digest(p.display().to_string(), file_digest(&p).map_err(|e| CliError::io(&p, e))?);
            Ok(lib.canonical_set())
        }
        None => Ok(load_library(cfg, true, run)?.canonical_set()),
    }
}

#[derive(Serialize)]
struct EvaluationFile<'a> {
    samples_sha256: &'a str,
    teacher_digests: &'a [(String, String)],
    #[serde(flatten)]
    report: &'a EvalReport,
}

pub fn evaluate(
    cfg: &RunConfig,
    samples: Option<PathBuf>,
    training: Option<PathBuf>,
    out: Option<PathBuf>,
) -> Result<(), CliError> {
    cfg.check_paths()?;
    let spec_text = cfg
        .evaluate
        .spec
        .clone()
        .or_else(|| cfg.generate.spec.clone())
        .ok_or_else(|| CliError::Usage("evaluate needs --spec".into()))?;
    let spec = ConstraintSpec::parse(&spec_text)?;
    let mut run = Run::new("evaluate", cfg);
    let samples_path = samples.unwrap_or_else(|| cfg.data_path("generated.smi"));
    let smiles = read_smiles_list(&samples_path, &mut run)?;
    let samples_sha = sha256_hex(smiles_body(&smiles).as_bytes());
    let training = load_training(cfg, training, &mut run)?;
    let mut teacher_run = Run::new("evaluate", cfg);
    let teachers = load_teachers(cfg, &mut teacher_run)?;
    let options = EvalOptions {
        uniqueness_denominator: cfg.evaluate.uniqueness,
    };
    let report = eval_batch(&smiles, &spec, &training, &teachers, &options)?;
    print!("{}", report.table());
    let teacher_digests = teacher_run.inputs();
    for (label, digest) in &teacher_digests {
        run.input_digest(label.clone(), digest.clone());
    }
    let path = out_path(cfg, out, "report.json");
    run.json(
        &path,
        "evaluation",
        &EvaluationFile {
            samples_sha256: &samples_sha,
            teacher_digests: &teacher_digests,
            report: &report,
        },
    );
    report_written(&run.finish()?);
    Ok(())
}

pub fn augment(cfg: &RunConfig, labels: &Path, pseudo: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("augment", cfg);
    let data = LabeledSet::load(labels)?;
    run.input_digest(labels.display().to_string(), file_digest(labels).map_err(|e| CliError::io(labels, e))?);
    let pool = read_smiles_list(pseudo, &mut run)?;
    let report = run_augmentation_experiment(&data, &pool, &cfg.augmentation_config())?;
    println!("{:>6}  {:>8}  {:>8}", "k", "mean F1", "sd");
    for r in &report.rows {
        println!("{:>6}  {:>8.4}  {:>8.4}", r.pseudo_count, r.mean_f1, r.std_f1);
    }
    let path = out_path(cfg, out, "augmentation.json");
    run.json(&path, "augmentation", &report);
    run.text(&path.with_extension("tsv"), &report.plot_tsv());
    report_written(&run.finish()?);
    Ok(())
}

#[derive(Serialize)]
struct Description<'a> {
    canonical: &'a str,
    descriptors: &'a DescriptorSet,
}

pub fn describe(cfg: &RunConfig, smiles: &str, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("describe", cfg);
    let mol = parse_smiles(smiles)?;
    let canon = canonicalize(&mol);
    let table = load_fragments(cfg, &mut run)?;
    let d = compute_descriptors_with(&mol, table.as_ref().unwrap_or_else(|| FragmentTable::bundled()))?;
    println!("canonical   {canon}");
    println!("mw          {:.3}", d.mw);
    println!("logp        {:.3}", d.logp);
    println!("qed         {:.3}", d.qed);
    println!("sa          {:.3}", d.sa);
    println!("hba         {}", d.hba);
    println!("hbd         {}", d.hbd);
    println!("tpsa        {:.2}", d.tpsa);
    println!("arom_rings  {}", d.arom_rings);
    if let Some(path) = out {
        run.input_bytes("<smiles argument>", smiles.as_bytes());
        run.json(
            &path,
            "description",
            &Description {
                canonical: canon.as_str(),
                descriptors: &d,
            },
        );
        report_written(&run.finish()?);
    }
    Ok(())
}

pub fn build_sa_table(cfg: &RunConfig, corpus: &Path, out: Option<PathBuf>) -> Result<(), CliError> {
    cfg.check_paths()?;
    let mut run = Run::new("build-sa-table", cfg);
    let smiles = read_smiles_list(corpus, &mut run)?;
    let mols: Vec<_> = smiles
        .par_iter()
        .filter_map(|s| match parse_smiles(s) {
            Ok(m) => Some(m),
            Err(e) => {
                log::warn!("skipping {s}: {e}");
                None
            }
        })
        .collect();
    if mols.is_empty() {
        return Err(CliError::Data(format!("{}: no valid SMILES", corpus.display())));
    }
    let source = corpus.file_name().map(|n| n.to_string_lossy().into_owned()).unwrap_or_default();
    let table = FragmentTable::build(&mols, source);
    println!("{} fragments from {} molecules", table.len(), mols.len());
    let path = out_path(cfg, out, "sa_fragments.bin");
    run.blob(&path, &table.to_bytes());
    report_written(&run.finish()?);
    Ok(())
}
