#![allow(dead_code)]

use std::collections::HashSet;

use molprompt::dataset::Style;
use molprompt::fingerprints::default_fingerprint;
use molprompt::teachers::{Fact, FactKind, FactSource, LabeledSet, Lexicon};
use molprompt::{canonicalize, parse_smiles, substructure_match, MolGraph};

pub const FIGURE_MOLECULE: &str = "CCN1CCCC1CNC(=O)c1c(OC)ccc(Cl)c1O";
pub const WORKED_NAME: &str = "(2-methyl-5-methylsulfonylphenyl)methanamine";

fn fixture(name: &str) -> String {
    let path = format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

fn data_lines(text: &str) -> impl Iterator<Item = &str> {
    text.lines().filter(|l| !l.trim().is_empty() && !l.starts_with('#'))
}

pub fn corpus() -> Vec<String> {
    data_lines(&fixture("corpus.smi")).map(|l| l.trim().to_string()).collect()
}

pub fn corpus_mols() -> Vec<MolGraph> {
    corpus().iter().map(|s| parse_smiles(s).unwrap()).collect()
}

pub struct OracleRow {
    pub smiles: String,
    pub logp: f64,
    pub qed: f64,
    pub sa: f64,
}

/// Frozen reference values (logP, QED, SA) for 100 molecules.
pub fn descriptor_oracle() -> Vec<OracleRow> {
    data_lines(&fixture("descriptor_oracle.tsv"))
        .filter(|l| !l.starts_with("smiles"))
        .map(|l| {
            let f: Vec<&str> = l.split('\t').collect();
            OracleRow {
                smiles: f[0].to_string(),
                logp: f[1].parse().unwrap(),
                qed: f[2].parse().unwrap(),
                sa: f[3].parse().unwrap(),
            }
        })
        .collect()
}

/// (name, expected fragments) pairs.
pub fn iupac_fixture() -> Vec<(String, Vec<String>)> {
    data_lines(&fixture("iupac_names.tsv"))
        .map(|l| {
            let (name, frags) = l.split_once('\t').unwrap();
            (name.to_string(), frags.split('|').map(str::to_string).collect())
        })
        .collect()
}

pub struct TemplateRow {
    /// `tasks`: one T0 template per task; `styles`: the T0/T1/T2 variants.
    pub group: String,
    pub task: String,
    pub style: Style,
    pub text: String,
}

pub fn template_fixture() -> Vec<TemplateRow> {
    data_lines(&fixture("templates.tsv"))
        .map(|l| {
            let f: Vec<&str> = l.splitn(4, '\t').collect();
            TemplateRow {
                group: f[0].to_string(),
                task: f[1].to_string(),
                style: f[2].parse().unwrap(),
                text: f[3].to_string(),
            }
        })
        .collect()
}

pub fn fg(name: &str) -> Fact {
    Fact::new(FactKind::FunctionalGroup { name: name.into() }, FactSource::Lexicon)
}

pub fn named(name: &str, score: f64) -> Fact {
    let kind = if name == "BBB" || name == "HIA" {
        FactKind::AdmetFlag {
            flag: name.into(),
            score,
        }
    } else {
        FactKind::TargetAffinity {
            target: name.into(),
            score,
        }
    };
    Fact::new(kind, FactSource::Scores(name.into()))
}

/// Facts filling every slot of `task` (task ids as in the templates).
pub fn facts_for(task: &str) -> Vec<Fact> {
    let mut facts = Vec::new();
    if task == "2FG" {
        return vec![fg("pyridine"), fg("benzamide")];
    }
    for part in task.split('+') {
        match part {
            "FG" => facts.push(fg("benzamide")),
            "LogP" => facts.push(Fact::new(FactKind::LogP { value: 2.46 }, FactSource::Descriptors)),
            "QED" => facts.push(Fact::new(FactKind::QedHigh { value: true }, FactSource::Descriptors)),
            "SA" | "SAs" => facts.push(Fact::new(FactKind::SaGood { value: true }, FactSource::Descriptors)),
            name => facts.push(named(name, 0.9)),
        }
    }
    facts
}

/// Fill a verbatim template text the way the facts of [`facts_for`] should.
pub fn expected_text(template: &str, target: &str) -> String {
    template
        .replace("[FG1]", "pyridine")
        .replace("[FG2]", "benzamide")
        .replace("[FG]", "benzamide")
        .replace("[VALUE]", "2.5")
        .replace("[D2D2/GSK3]", target)
}

/// |A ∩ B| / |A ∪ B| on explicit bit sets.
pub fn set_tanimoto(a: &HashSet<u32>, b: &HashSet<u32>) -> f64 {
    let union = a.union(b).count();
    if union == 0 {
        return 1.0;
    }
    a.intersection(b).count() as f64 / union as f64
}

/// 1 - mean pairwise Tanimoto, summed pair by pair over valid samples.
pub fn brute_diversity(samples: &[String]) -> f64 {
    let sets: Vec<HashSet<u32>> = samples
        .iter()
        .filter_map(|s| parse_smiles(s).ok())
        .map(|m| default_fingerprint(&m).bits().into_iter().collect())
        .collect();
    let n = sets.len();
    let mut total = 0.0;
    let mut pairs = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            total += set_tanimoto(&sets[i], &sets[j]);
            pairs += 1;
        }
    }
    1.0 - total / pairs as f64
}

fn canonical_strings(samples: &[String]) -> Vec<String> {
    samples
        .iter()
        .filter_map(|s| parse_smiles(s).ok())
        .map(|m| canonicalize(&m).as_str().to_string())
        .collect()
}

pub fn brute_uniqueness(samples: &[String]) -> f64 {
    let canon = canonical_strings(samples);
    if canon.is_empty() {
        return 0.0;
    }
    let distinct: HashSet<&String> = canon.iter().collect();
    100.0 * distinct.len() as f64 / canon.len() as f64
}

pub fn brute_novelty(samples: &[String], training: &[String]) -> f64 {
    let canon = canonical_strings(samples);
    let distinct: HashSet<&String> = canon.iter().collect();
    if distinct.is_empty() {
        return 0.0;
    }
    let train: HashSet<String> = canonical_strings(training).into_iter().collect();
    let novel = distinct.iter().filter(|c| !train.contains(**c)).count();
    100.0 * novel as f64 / distinct.len() as f64
}

fn ranks(v: &[f64]) -> Vec<f64> {
    let mut idx: Vec<usize> = (0..v.len()).collect();
    idx.sort_by(|&a, &b| v[a].partial_cmp(&v[b]).unwrap());
    let mut r = vec![0.0; v.len()];
    let mut i = 0;
    while i < idx.len() {
        let mut j = i;
        while j + 1 < idx.len() && v[idx[j + 1]] == v[idx[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for k in i..=j {
            r[idx[k]] = avg;
        }
        i = j + 1;
    }
    r
}

/// Spearman rank correlation with average ranks for ties.
pub fn spearman(x: &[f64], y: &[f64]) -> f64 {
    let (rx, ry) = (ranks(x), ranks(y));
    let n = x.len() as f64;
    let (mx, my) = (rx.iter().sum::<f64>() / n, ry.iter().sum::<f64>() / n);
    let cov: f64 = rx.iter().zip(&ry).map(|(a, b)| (a - mx) * (b - my)).sum();
    let vx: f64 = rx.iter().map(|a| (a - mx).powi(2)).sum();
    let vy: f64 = ry.iter().map(|b| (b - my).powi(2)).sum();
    cov / (vx * vy).sqrt()
}

/// Synthetic separable task: the label is whether a lexicon group is
/// present. Returns 300 labelled library molecules and a pool of 400 other
/// library molecules that carry the group.
pub fn substructure_task(group: &str) -> (LabeledSet, Vec<String>) {
    let lib = molprompt::dataset::Library::bundled();
    let lex = Lexicon::bundled();
    let pattern = &lex.get(group).unwrap().pattern;
    let labelled: Vec<(String, bool)> = lib
        .entries
        .iter()
        .map(|e| (e.smiles.as_str().to_string(), substructure_match(pattern, &e.mol)))
        .collect();
    let set = LabeledSet::new(labelled[..300].to_vec()).unwrap();
    let pool = labelled[300..]
        .iter()
        .filter(|x| x.1)
        .take(400)
        .map(|x| x.0.clone())
        .collect();
    (set, pool)
}
