//! Acceptance run: one PASS/FAIL line per criterion, non-zero exit if any
//! criterion fails.

mod common;

use std::collections::{BTreeMap, BTreeSet, HashSet};
use std::path::Path;
use std::time::{Duration, Instant};

use molprompt::artifact::write_atomic;
use molprompt::augmentation::{run_augmentation_experiment, AugmentationConfig};
use molprompt::dataset::{
    build_pairs, ingest_library, parse_dataset, parse_library, render_template, write_dataset, BuildConfig, Dataset,
    Library,
};
use molprompt::descriptors::{crippen_logp, qed, sa_score};
use molprompt::evaluation::{
    diversity_score, evaluate, novelty_ratio, success_rate, uniqueness_ratio, ConstraintSpec, EvalOptions,
};
use molprompt::generators::{retrieval_generate, sample, train_ngram, NGramModel, RetrievalIndex};
use molprompt::teachers::{iupac_fragments, verify_fact, Lexicon, TeacherSet};
use molprompt::{canonicalize, parse_smiles, write_smiles};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::*;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: String) -> Outcome {
    Outcome { pass, detail }
}

fn teachers() -> TeacherSet {
    TeacherSet::with_lexicon(Lexicon::bundled())
}

fn parser_round_trip() -> Outcome {
    let corpus = corpus();
    let start = Instant::now();
    let mut fixed = 0;
    for s in &corpus {
        let Ok(m) = parse_smiles(s) else { continue };
        let c1 = canonicalize(&m);
        let Ok(m2) = parse_smiles(c1.as_str()) else { continue };
        if canonicalize(&m2) == c1 {
            fixed += 1;
        }
    }
    let elapsed = start.elapsed();
    outcome(
        corpus.len() >= 500 && fixed == corpus.len() && elapsed < Duration::from_secs(10),
        format!("{fixed}/{} at a canonical fixed point in {elapsed:.2?}", corpus.len()),
    )
}

fn canonical_invariance() -> Outcome {
    let mols = corpus_mols();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut same, mut total) = (0, 0);
    for m in mols.iter().take(200) {
        let reference = canonicalize(m);
        for _ in 0..10 {
            let mut order: Vec<usize> = (0..m.atom_count()).collect();
            order.shuffle(&mut rng);
            let permuted = m.permute_atoms(&order);
            let reparsed = parse_smiles(&write_smiles(&permuted)).unwrap();
            total += 1;
            if canonicalize(&permuted) == reference && canonicalize(&reparsed) == reference {
                same += 1;
            }
        }
    }
    outcome(
        total == 2000 && same == total,
        format!("{same}/{total} permutations give the reference string"),
    )
}

fn diversity_oracle() -> Outcome {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let n = rng.gen_range(2..=50);
        let subset: Vec<String> = corpus.choose_multiple(&mut rng, n).cloned().collect();
        let d = diversity_score(&subset).unwrap();
        worst = worst.max((d - brute_diversity(&subset)).abs());
    }
    outcome(worst <= 1e-12, format!("max |diversity - brute force| = {worst:.3e} over 100 subsets"))
}

fn crippen_additivity() -> Outcome {
    let corpus = corpus();
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut worst = 0.0f64;
    for _ in 0..100 {
        let a = corpus.choose(&mut rng).unwrap();
        let b = corpus.choose(&mut rng).unwrap();
        let joint = crippen_logp(&parse_smiles(&format!("{a}.{b}")).unwrap()).unwrap();
        let sum = crippen_logp(&parse_smiles(a).unwrap()).unwrap() + crippen_logp(&parse_smiles(b).unwrap()).unwrap();
        worst = worst.max((joint - sum).abs());
    }
    outcome(worst <= 1e-9, format!("max |logP(A.B) - logP(A) - logP(B)| = {worst:.3e} over 100 pairs"))
}

fn descriptor_parity() -> Outcome {
    let rows = descriptor_oracle();
    let (mut qed_err, mut logp_err, mut sa_err) = (0.0f64, 0.0f64, 0.0f64);
    let mut ours = Vec::new();
    let mut theirs = Vec::new();
    for r in &rows {
        let m = parse_smiles(&r.smiles).unwrap();
        qed_err = qed_err.max((qed(&m).unwrap() - r.qed).abs());
        logp_err = logp_err.max((crippen_logp(&m).unwrap() - r.logp).abs());
        let sa = sa_score(&m).unwrap();
        sa_err = sa_err.max((sa - r.sa).abs());
        ours.push(sa);
        theirs.push(r.sa);
    }
    let rho = spearman(&ours, &theirs);
    outcome(
        rows.len() == 100 && qed_err <= 1e-3 && logp_err <= 1e-3 && sa_err <= 0.5 && rho >= 0.8,
        format!(
            "{} molecules: max dQED {qed_err:.2e}, max dlogP {logp_err:.2e}, max dSA {sa_err:.3}, SA Spearman {rho:.3}",
            rows.len()
        ),
    )
}

fn iupac_dissection() -> Outcome {
    let worked = iupac_fragments(WORKED_NAME) == ["methyl", "methylsulfonylphenyl", "methanamine"];
    let fixture = iupac_fixture();
    let exact = fixture.iter().filter(|(name, want)| &iupac_fragments(name) == want).count();
    let rate = exact as f64 / fixture.len() as f64;
    outcome(
        worked && fixture.len() == 50 && rate >= 0.9,
        format!(
            "worked example {}, fixture {exact}/{} exact ({:.0}%)",
            if worked { "exact" } else { "WRONG" },
            fixture.len(),
            100.0 * rate
        ),
    )
}

fn template_fidelity() -> Outcome {
    let rows = template_fixture();
    let mut ok: BTreeMap<&str, usize> = BTreeMap::new();
    let mut count: BTreeMap<&str, usize> = BTreeMap::new();
    for row in &rows {
        *count.entry(&row.group).or_default() += 1;
        let tasks: Vec<(String, &str)> = match row.task.as_str() {
            "DRD2/GSK3" => vec![("FG+DRD2".into(), "DRD2"), ("FG+GSK3".into(), "GSK3")],
            t if row.group == "styles" => vec![(format!("FG+{t}"), "")],
            t => vec![(t.to_string(), "")],
        };
        let all = tasks.iter().all(|(task, target)| {
            render_template(task, row.style, &facts_for(task)).ok().as_deref()
                == Some(expected_text(&row.text, target).as_str())
        });
        if all {
            *ok.entry(&row.group).or_default() += 1;
        }
    }
    let get = |m: &BTreeMap<&str, usize>, k: &str| m.get(k).copied().unwrap_or(0);
    let (tasks, styles) = ((get(&ok, "tasks"), get(&count, "tasks")), (get(&ok, "styles"), get(&count, "styles")));
    outcome(
        tasks == (20, 20) && styles == (9, 9),
        format!("task templates: {}/{} exact, style variants: {}/{} exact", tasks.0, tasks.1, styles.0, styles.1),
    )
}

fn pattern_guarantee(library: &Library, dataset: &Dataset) -> Outcome {
    let teachers = teachers();
    let mut by_prompt: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut by_mol: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let iupac: BTreeMap<&str, Option<&str>> = library
        .entries
        .iter()
        .map(|e| (e.smiles.as_str(), e.iupac.as_deref()))
        .collect();
    let mut verified = 0;
    for p in &dataset.pairs {
        by_prompt.entry(&p.prompt).or_default().insert(p.smiles.as_str());
        by_mol.entry(p.smiles.as_str()).or_default().insert(&p.prompt);
        let m = parse_smiles(p.smiles.as_str()).unwrap();
        let name = iupac[p.smiles.as_str()];
        let facts_hold = p.facts_used.iter().all(|f| verify_fact(&m, f, name, &teachers));
        let rerendered = render_template(&p.task_id, p.style, &p.facts_used).ok().as_deref() == Some(p.prompt.as_str());
        if facts_hold && rerendered {
            verified += 1;
        }
    }
    let one_to_many = by_prompt.values().filter(|s| s.len() >= 2).count();
    let many_to_one = by_mol.values().filter(|s| s.len() >= 2).count();
    let n = dataset.pairs.len();
    outcome(
        one_to_many >= 1 && many_to_one >= 1 && n > 0 && verified == n,
        format!(
            "{n} pairs, one-to-many prompts {one_to_many}, many-to-one molecules {many_to_one}, re-verified {verified}/{n}"
        ),
    )
}

fn generator_validity(dataset: &Dataset) -> Outcome {
    let start = Instant::now();
    let model = train_ngram(&dataset.pairs, 4).unwrap();
    let samples = sample(&model, "FG+QED", 5000, 0).unwrap();
    let elapsed = start.elapsed();
    let validity = molprompt::evaluation::validity_ratio(&samples);
    outcome(
        samples.len() == 5000 && validity >= 99.0 && elapsed < Duration::from_secs(60),
        format!("validity {validity:.2}% over {} samples, train + sample {elapsed:.2?}", samples.len()),
    )
}

fn harness_self_consistency(library: &Library) -> Outcome {
    let index = RetrievalIndex::new(library, teachers());
    let training = library.canonical_set();
    let mut details = Vec::new();
    let mut pass = true;
    for (k, spec) in ["FG:benzamide+QED", "FG:phenyl+SA", "FG:sulfonamide+LogP:2", "QED+SA"].iter().enumerate() {
        let spec = ConstraintSpec::parse(spec).unwrap();
        let samples = retrieval_generate(&index, &spec, 500, k as u64).unwrap();
        let sr = success_rate(&samples, &spec, index.teachers()).unwrap();
        let novelty = novelty_ratio(&samples, &training);
        pass &= !samples.is_empty() && sr == 100.0 && novelty == 0.0;
        details.push(format!("{spec} n={} SR {sr:.0}% novelty {novelty:.0}%", samples.len()));
    }
    outcome(pass, details.join("; "))
}

fn fixed_samples(library: &Library, dataset: &Dataset) -> Vec<String> {
    let model = train_ngram(&dataset.pairs, 3).unwrap();
    let mut samples = sample(&model, "FG", 500, 5).unwrap();
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    samples.extend(
        library
            .entries
            .choose_multiple(&mut rng, 490)
            .map(|e| e.smiles.as_str().to_string()),
    );
    samples.extend((0..10).map(|i| format!("C1CC{i}")));
    samples
}

fn conjunction_monotonicity(samples: &[String]) -> Outcome {
    let teachers = teachers();
    let base = ["FG:phenyl", "FG:carboxamide", "QED", "SA", "LogP:2.5"];
    let sr = |parts: &[&str]| {
        success_rate(samples, &ConstraintSpec::parse(&parts.join("+")).unwrap(), &teachers).unwrap()
    };
    let single: Vec<f64> = base.iter().map(|c| sr(&[c])).collect();
    let (mut checked, mut violations) = (0, 0);
    for mask in 1u32..(1 << base.len()) {
        let parts: Vec<&str> = (0..base.len()).filter(|i| mask >> i & 1 == 1).map(|i| base[i]).collect();
        if parts.len() < 2 {
            continue;
        }
        let s = sr(&parts);
        for i in (0..base.len()).filter(|i| mask >> i & 1 == 1) {
            checked += 1;
            if s > single[i] {
                violations += 1;
            }
        }
    }
    outcome(
        samples.len() == 1000 && checked > 0 && violations == 0,
        format!("{checked} (single, superset) pairs over {} samples, {violations} violations", samples.len()),
    )
}

fn uniqueness_novelty_oracle(library: &Library) -> Outcome {
    let pool: Vec<String> = library.entries.iter().take(400).map(|e| e.smiles.as_str().to_string()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut mismatches = 0;
    for _ in 0..50 {
        let n = rng.gen_range(0..120);
        let mut batch = Vec::with_capacity(n);
        for _ in 0..n {
            let s = pool.choose(&mut rng).unwrap();
            match rng.gen_range(0..10) {
                0 => batch.push(format!("{s}(")),
                1..=3 => {
                    let m = parse_smiles(s).unwrap();
                    let mut order: Vec<usize> = (0..m.atom_count()).collect();
                    order.shuffle(&mut rng);
                    batch.push(write_smiles(&m.permute_atoms(&order)));
                }
                _ => batch.push(s.clone()),
            }
        }
        let t = rng.gen_range(0..200);
        let training: Vec<String> = pool.choose_multiple(&mut rng, t).cloned().collect();
        let train_set: HashSet<_> = training.iter().map(|s| canonicalize(&parse_smiles(s).unwrap())).collect();
        if uniqueness_ratio(&batch) != brute_uniqueness(&batch)
            || novelty_ratio(&batch, &train_set) != brute_novelty(&batch, &training)
        {
            mismatches += 1;
        }
    }
    outcome(mismatches == 0, format!("{} of 50 batches match the set-based oracle exactly", 50 - mismatches))
}

fn augmentation_direction() -> Outcome {
    let (labeled, pool) = substructure_task("sulfonamide");
    let config = AugmentationConfig {
        target: "sulfonamide".into(),
        pseudo_counts: vec![0, 50, 100],
        trials: 100,
        seed: 7,
        ..Default::default()
    };
    let start = Instant::now();
    let a = run_augmentation_experiment(&labeled, &pool, &config).unwrap();
    let b = run_augmentation_experiment(&labeled, &pool, &config).unwrap();
    let elapsed = start.elapsed();
    let bits = |r: &molprompt::augmentation::AugmentationReport| -> Vec<u64> {
        r.trial_f1.iter().flatten().map(|v| v.to_bits()).collect()
    };
    let deterministic = bits(&a) == bits(&b) && a == b;
    let f0 = a.row(0).unwrap().mean_f1;
    let f100 = a.row(100).unwrap().mean_f1;
    outcome(
        f100 >= f0 - 0.02 && deterministic && elapsed < Duration::from_secs(300),
        format!(
            "mean F1 k=0 {f0:.4}, k=50 {:.4}, k=100 {f100:.4}; repeat bit-identical: {deterministic}; two runs {elapsed:.2?}",
            a.row(50).unwrap().mean_f1
        ),
    )
}

/// ingest, build-dataset, train-ngram, generate, evaluate; every artifact
/// goes through a file.
fn pipeline(dir: &Path, seed: u64) -> Vec<(String, Vec<u8>)> {
    let source = Path::new(env!("CARGO_MANIFEST_DIR")).join("data/library_10k.tsv");
    let library = ingest_library(&source).unwrap();
    let lib_path = dir.join("library.tsv");
    write_atomic(&lib_path, library.to_tsv().as_bytes()).unwrap();
    let library = parse_library(&std::fs::read_to_string(&lib_path).unwrap());
    let mut config = BuildConfig::default();
    config.policy.seed = seed;
    let teachers = teachers();
    let dataset = build_pairs(&library, &teachers, &config).unwrap();
    let ds_path = dir.join("dataset.jsonl");
    write_atomic(&ds_path, write_dataset(&dataset.pairs).as_bytes()).unwrap();
    let pairs = parse_dataset(&std::fs::read_to_string(&ds_path).unwrap()).unwrap();
    let mut model = train_ngram(&pairs, 4).unwrap();
    model.seed = seed;
    let model_path = dir.join("model.ngram");
    write_atomic(&model_path, &model.to_bytes()).unwrap();
    let model = NGramModel::load(&model_path).unwrap();
    let samples = sample(&model, "FG+QED", 5000, seed).unwrap();
    let gen_path = dir.join("generated.smi");
    write_atomic(&gen_path, (samples.join("\n") + "\n").as_bytes()).unwrap();
    let samples: Vec<String> = std::fs::read_to_string(&gen_path).unwrap().lines().map(str::to_string).collect();
    let training: HashSet<_> = pairs.iter().map(|p| p.smiles.clone()).collect();
    let spec = ConstraintSpec::parse("FG:benzamide+QED").unwrap();
    let report = evaluate(&samples, &spec, &training, &teachers, &EvalOptions::default()).unwrap();
    let report_path = dir.join("report.json");
    write_atomic(&report_path, serde_json::to_string_pretty(&report).unwrap().as_bytes()).unwrap();
    ["library.tsv", "dataset.jsonl", "model.ngram", "generated.smi", "report.json"]
        .iter()
        .map(|f| (f.to_string(), std::fs::read(dir.join(f)).unwrap()))
        .collect()
}

fn end_to_end_determinism() -> Outcome {
    let a = tempfile::tempdir().unwrap();
    let b = tempfile::tempdir().unwrap();
    let ra = pipeline(a.path(), 42);
    let rb = pipeline(b.path(), 42);
    let differing: Vec<&str> = ra
        .iter()
        .zip(&rb)
        .filter(|(x, y)| x.1 != y.1)
        .map(|(x, _)| x.0.as_str())
        .collect();
    let sizes: Vec<String> = ra.iter().map(|(n, b)| format!("{n} {}B", b.len())).collect();
    outcome(
        differing.is_empty(),
        format!("{}; differing: {differing:?}", sizes.join(", ")),
    )
}

fn main() {
    let library = Library::bundled();
    let dataset = build_pairs(&library, &teachers(), &BuildConfig::default()).unwrap();
    let samples = fixed_samples(&library, &dataset);
    let criteria: Vec<(&str, Box<dyn Fn() -> Outcome + '_>)> = vec![
        ("parser round-trip", Box::new(parser_round_trip)),
        ("canonical invariance", Box::new(canonical_invariance)),
        ("diversity oracle", Box::new(diversity_oracle)),
        ("crippen additivity", Box::new(crippen_additivity)),
        ("descriptor oracle parity", Box::new(descriptor_parity)),
        ("iupac dissection", Box::new(iupac_dissection)),
        ("template fidelity", Box::new(template_fidelity)),
        ("pattern guarantee", Box::new(|| pattern_guarantee(&library, &dataset))),
        ("generator validity", Box::new(|| generator_validity(&dataset))),
        ("harness self-consistency", Box::new(|| harness_self_consistency(&library))),
        ("conjunction monotonicity", Box::new(|| conjunction_monotonicity(&samples))),
        ("uniqueness/novelty oracle", Box::new(|| uniqueness_novelty_oracle(&library))),
        ("augmentation direction", Box::new(augmentation_direction)),
        ("end-to-end determinism", Box::new(end_to_end_determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        let o = check();
        if !o.pass {
            failed += 1;
        }
        println!("{} {name}: {}", if o.pass { "PASS" } else { "FAIL" }, o.detail);
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
