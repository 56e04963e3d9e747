use std::collections::{BTreeMap, BTreeSet};
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::library::{Library, LibraryEntry};
use super::subsets::{select_knowledge_subsets, SubsetPolicy};
use super::templates::{render_template, styles_for, task_ids, task_signature, Style};
use super::DatasetError;
use crate::rng::stream_seed;
use crate::smiles::CanonicalSmiles;
use crate::teachers::{annotate, Fact, KnowledgeRecord, Slot, TeacherSet};

/// One dataset line.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TextMoleculePair {
    #[serde(rename = "text")]
    pub prompt: String,
    pub smiles: CanonicalSmiles,
    #[serde(rename = "task")]
    pub task_id: String,
    #[serde(rename = "facts")]
    pub facts_used: Vec<Fact>,
    pub style: Style,
    /// Name the IUPAC facts were read from.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub iupac: Option<String>,
}

/// Relative style weights; styles a task has no template for are skipped.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StyleWeights {
    pub t0: f64,
    pub t1: f64,
    pub t2: f64,
}

impl Default for StyleWeights {
    fn default() -> Self {
        StyleWeights {
            t0: 1.0,
            t1: 0.0,
            t2: 0.0,
        }
    }
}

impl StyleWeights {
    pub fn only(style: Style) -> Self {
        let mut w = StyleWeights {
            t0: 0.0,
            t1: 0.0,
            t2: 0.0,
        };
        *w.weight_mut(style) = 1.0;
        w
    }

    pub fn weight(&self, style: Style) -> f64 {
        match style {
            Style::T0 => self.t0,
            Style::T1 => self.t1,
            Style::T2 => self.t2,
        }
    }

    fn weight_mut(&mut self, style: Style) -> &mut f64 {
        match style {
            Style::T0 => &mut self.t0,
            Style::T1 => &mut self.t1,
            Style::T2 => &mut self.t2,
        }
    }

    fn pick(&self, available: &[Style], rng: &mut ChaCha8Rng) -> Option<Style> {
        let options: Vec<(Style, f64)> = available
            .iter()
            .map(|&s| (s, self.weight(s)))
            .filter(|&(_, w)| w > 0.0)
            .collect();
        let total: f64 = options.iter().map(|o| o.1).sum();
        if options.is_empty() {
            return None;
        }
        let mut x = rng.gen::<f64>() * total;
        for &(s, w) in &options {
            if x < w {
                return Some(s);
            }
            x -= w;
        }
        options.last().map(|o| o.0)
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BuildConfig {
    pub policy: SubsetPolicy,
    /// Allowed task ids; `None` allows every task.
    pub tasks: Option<Vec<String>>,
    pub styles: StyleWeights,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct BuildStats {
    pub molecules: usize,
    /// Molecules the teachers could not annotate.
    pub skipped: usize,
    /// Molecules with fewer usable facts than `min_facts`.
    pub too_few_facts: usize,
    pub subsets: usize,
    /// Subsets with no template for their slot signature or allowed styles.
    pub dropped_subsets: usize,
    pub pairs: usize,
    pub distinct_prompts: usize,
    /// Prompts paired with at least two molecules.
    pub one_to_many: usize,
    /// Molecules paired with at least two prompts.
    pub many_to_one: usize,
}

#[derive(Debug, Clone, Default)]
pub struct Dataset {
    pub pairs: Vec<TextMoleculePair>,
    pub stats: BuildStats,
}

struct Router {
    /// (task, sorted signature)
    tasks: Vec<(&'static str, Vec<Slot>)>,
    slots: BTreeSet<Slot>,
}

impl Router {
    fn new(filter: Option<&[String]>) -> Result<Self, DatasetError> {
        let all = task_ids();
        let chosen: Vec<&'static str> = match filter {
            None => all,
            Some(names) => names
                .iter()
                .map(|n| {
                    all.iter().copied().find(|t| t == n).ok_or_else(|| DatasetError::UnknownTask {
                        task: n.clone(),
                        style: Style::T0,
                    })
                })
                .collect::<Result<_, _>>()?,
        };
        let tasks: Vec<_> = chosen.into_iter().map(|t| (t, task_signature(t))).collect();
        let slots = tasks.iter().flat_map(|t| t.1.iter().cloned()).collect();
        Ok(Router { tasks, slots })
    }

    fn route(&self, facts: &[Fact]) -> Option<&'static str> {
        let mut sig: Vec<Slot> = facts.iter().map(Fact::slot).collect();
        sig.sort();
        self.tasks.iter().find(|t| t.1 == sig).map(|t| t.0)
    }
}

#[derive(Default)]
struct MoleculeOutcome {
    pairs: Vec<TextMoleculePair>,
    skipped: bool,
    too_few: bool,
    subsets: usize,
    dropped: usize,
}

fn build_one(
    entry: &LibraryEntry,
    teachers: &TeacherSet,
    config: &BuildConfig,
    router: &Router,
) -> Result<MoleculeOutcome, DatasetError> {
    let mut out = MoleculeOutcome::default();
    let record = match annotate(&entry.mol, entry.iupac.as_deref(), teachers) {
        Ok(r) => r,
        Err(e) => {
            log::warn!("molecule {} ({}): {e}", entry.index, entry.smiles);
            out.skipped = true;
            return Ok(out);
        }
    };
    let usable = KnowledgeRecord {
        facts: record
            .positive_facts()
            .into_iter()
            .filter(|f| router.slots.contains(&f.slot()))
            .collect(),
        ..record
    };
    let policy = config.policy.for_molecule(entry.index);
    let subsets = match select_knowledge_subsets(&usable, &policy) {
        Ok(s) => s,
        Err(DatasetError::TooFewFacts { .. }) => {
            out.too_few = true;
            return Ok(out);
        }
        Err(e) => return Err(e),
    };
    out.subsets = subsets.len();
    for (k, facts) in subsets.into_iter().enumerate() {
        let Some(task) = router.route(&facts) else {
            out.dropped += 1;
            continue;
        };
        let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(policy.seed, k as u64));
        let Some(style) = config.styles.pick(&styles_for(task), &mut rng) else {
            out.dropped += 1;
            continue;
        };
        let prompt = render_template(task, style, &facts)?;
        out.pairs.push(TextMoleculePair {
            prompt,
            smiles: usable.canonical_smiles.clone(),
            task_id: task.to_string(),
            facts_used: facts,
            style,
            iupac: usable.iupac.clone(),
        });
    }
    Ok(out)
}

/// Annotate every molecule, sample fact subsets, route each subset to its
/// task template and render. Output order is molecule index, then subset
/// lattice order, whatever the thread count.
pub fn build_pairs(library: &Library, teachers: &TeacherSet, config: &BuildConfig) -> Result<Dataset, DatasetError> {
    if library.is_empty() {
        return Err(DatasetError::EmptyLibrary);
    }
    config.policy.validate()?;
    let router = Router::new(config.tasks.as_deref())?;
    let outcomes: Vec<MoleculeOutcome> = library
        .entries
        .par_iter()
        .map(|e| build_one(e, teachers, config, &router))
        .collect::<Result<_, _>>()?;
    let mut stats = BuildStats {
        molecules: library.len(),
        ..Default::default()
    };
    let mut pairs = Vec::new();
    for o in outcomes {
        stats.skipped += o.skipped as usize;
        stats.too_few_facts += o.too_few as usize;
        stats.subsets += o.subsets;
        stats.dropped_subsets += o.dropped;
        pairs.extend(o.pairs);
    }
    stats.pairs = pairs.len();
    let mut by_prompt: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    let mut by_mol: BTreeMap<&str, BTreeSet<&str>> = BTreeMap::new();
    for p in &pairs {
        by_prompt.entry(&p.prompt).or_default().insert(p.smiles.as_str());
        by_mol.entry(p.smiles.as_str()).or_default().insert(&p.prompt);
    }
    stats.distinct_prompts = by_prompt.len();
    stats.one_to_many = by_prompt.values().filter(|s| s.len() >= 2).count();
    stats.many_to_one = by_mol.values().filter(|s| s.len() >= 2).count();
    Ok(Dataset { pairs, stats })
}

/// JSON lines, one pair per line.
pub fn write_dataset(pairs: &[TextMoleculePair]) -> String {
    let mut out = String::new();
    for p in pairs {
        out.push_str(&serde_json::to_string(p).expect("pair serializes"));
        out.push('\n');
    }
    out
}

pub fn read_dataset(path: &Path) -> Result<Vec<TextMoleculePair>, DatasetError> {
    let text = std::fs::read_to_string(path).map_err(|e| DatasetError::Io(format!("{}: {e}", path.display())))?;
    parse_dataset(&text)
}

/// JSON lines; blank lines and `#` comment lines are skipped.
pub fn parse_dataset(text: &str) -> Result<Vec<TextMoleculePair>, DatasetError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty() && !l.starts_with('#'))
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| DatasetError::Format {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
