//! Task-conditioned n-gram model over SMILES tokens with masked sampling.

use std::collections::BTreeMap;
use std::path::Path;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::decoder::{DecodeState, MAX_TOKENS};
use super::tokens::{classify, tokenize, TokenKind};
use super::GeneratorError;
use crate::artifact::{sha256_hex, HeaderBlob};
use crate::dataset::TextMoleculePair;
use crate::rng::stream_seed;
use crate::smiles::{is_valid, parse_smiles, write_kekule_smiles};

const MODEL_MAGIC: &str = "molprompt-ngram v1";
/// Token id of the end marker; real tokens start at 1.
pub const END: u32 = 0;
const START: u32 = u32::MAX;
pub const MAX_ORDER: usize = 6;
pub const RESTARTS: usize = 20;

/// Counts of the next token after each context of one task.
pub type ContextTable = BTreeMap<Vec<u32>, BTreeMap<u32, u32>>;

#[derive(Debug, Clone, PartialEq)]
pub struct NGramModel {
    pub order: usize,
    /// `vocabulary[0]` is the end marker.
    pub vocabulary: Vec<String>,
    pub tables: BTreeMap<String, ContextTable>,
    pub seed: u64,
}

/// Kekulé tokens of a dataset SMILES.
fn training_tokens(smiles: &str) -> Result<Vec<String>, GeneratorError> {
    let mol = parse_smiles(smiles).map_err(|e| GeneratorError::Dataset(format!("{smiles}: {e}")))?;
    tokenize(&write_kekule_smiles(&mol))
}

fn context(history: &[u32], order: usize) -> Vec<u32> {
    let k = order - 1;
    let mut ctx = vec![START; k.saturating_sub(history.len())];
    ctx.extend_from_slice(&history[history.len().saturating_sub(k)..]);
    ctx
}

pub fn train_ngram(dataset: &[TextMoleculePair], order: usize) -> Result<NGramModel, GeneratorError> {
    if dataset.is_empty() {
        return Err(GeneratorError::EmptyDataset);
    }
    if !(1..=MAX_ORDER).contains(&order) {
        return Err(GeneratorError::InvalidOrder(order));
    }
    let tokenized: Vec<(String, Vec<String>)> = dataset
        .par_iter()
        .map(|p| Ok((p.task_id.clone(), training_tokens(p.smiles.as_str())?)))
        .collect::<Result<_, GeneratorError>>()?;
    let mut names: Vec<&str> = tokenized.iter().flat_map(|(_, t)| t.iter().map(String::as_str)).collect();
    names.sort_unstable();
    names.dedup();
    let mut vocabulary = vec![String::new()];
    vocabulary.extend(names.into_iter().map(str::to_string));
    let index: BTreeMap<&str, u32> = vocabulary.iter().enumerate().map(|(i, t)| (t.as_str(), i as u32)).collect();
    let mut tables: BTreeMap<String, ContextTable> = BTreeMap::new();
    for (task, toks) in &tokenized {
        let table = tables.entry(task.clone()).or_default();
        let mut ids: Vec<u32> = toks.iter().map(|t| index[t.as_str()]).collect();
        ids.push(END);
        for i in 0..ids.len() {
            *table.entry(context(&ids[..i], order)).or_default().entry(ids[i]).or_insert(0) += 1;
        }
    }
    Ok(NGramModel {
        order,
        vocabulary,
        tables,
        seed: 0,
    })
}

impl NGramModel {
    pub fn tasks(&self) -> impl Iterator<Item = &str> {
        self.tables.keys().map(String::as_str)
    }

    /// Add-one smoothed probabilities of every vocabulary entry after `ctx`.
    fn weights(&self, table: &ContextTable, ctx: &[u32], out: &mut [f64]) {
        out.iter_mut().for_each(|w| *w = 1.0);
        if let Some(next) = table.get(ctx) {
            for (&t, &c) in next {
                out[t as usize] += c as f64;
            }
        }
    }

    fn decode(&self, table: &ContextTable, kinds: &[TokenKind], rng: &mut ChaCha8Rng) -> Option<String> {
        let mut state = DecodeState::new();
        let mut history: Vec<u32> = Vec::new();
        let mut weights = vec![0.0; self.vocabulary.len()];
        let mut out = String::new();
        loop {
            self.weights(table, &context(&history, self.order), &mut weights);
            let mut total = 0.0;
            for (t, w) in weights.iter_mut().enumerate() {
                let ok = if t == END as usize {
                    state.can_end()
                } else {
                    state.len < MAX_TOKENS && state.allows(kinds[t])
                };
                if !ok {
                    *w = 0.0;
                }
                total += *w;
            }
            if total == 0.0 {
                return None;
            }
            let mut x = rng.gen::<f64>() * total;
            let mut pick = weights.len() - 1;
            for (t, &w) in weights.iter().enumerate() {
                if x < w {
                    pick = t;
                    break;
                }
                x -= w;
            }
            while weights[pick] == 0.0 {
                pick -= 1;
            }
            if pick == END as usize {
                return Some(out);
            }
            state.apply(kinds[pick]);
            out.push_str(&self.vocabulary[pick]);
            history.push(pick as u32);
        }
    }

    /// One sample, restarting a stalled decode up to [`RESTARTS`] times.
    fn sample_one(&self, table: &ContextTable, kinds: &[TokenKind], seed: u64) -> Result<String, GeneratorError> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        for _ in 0..=RESTARTS {
            if let Some(s) = self.decode(table, kinds, &mut rng) {
                if is_valid(&s) {
                    return Ok(s);
                }
                log::debug!("masked decode produced unparsable {s}");
            }
        }
        Err(GeneratorError::DecodingStall { attempts: RESTARTS + 1 })
    }

    pub fn digest(&self) -> String {
        sha256_hex(&self.to_bytes())
    }

    /// Header plus one line per context: `task TAB context ids TAB id:count ...`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut blob = HeaderBlob::new(MODEL_MAGIC)
            .field("order", self.order)
            .field("seed", self.seed)
            .field("vocabulary", self.vocabulary[1..].join(" "));
        let mut body = String::new();
        for (task, table) in &self.tables {
            for (ctx, next) in table {
                let ctx: Vec<String> = ctx
                    .iter()
                    .map(|&t| if t == START { "^".to_string() } else { t.to_string() })
                    .collect();
                let next: Vec<String> = next.iter().map(|(t, c)| format!("{t}:{c}")).collect();
                body.push_str(&format!("{task}\t{}\t{}\n", ctx.join(" "), next.join(" ")));
            }
        }
        blob.body = body.into_bytes();
        blob.to_bytes()
    }

    pub fn from_bytes(data: &[u8]) -> Result<Self, GeneratorError> {
        let bad = |m: String| GeneratorError::Model(m);
        let blob = HeaderBlob::parse(data, MODEL_MAGIC).map_err(|e| bad(e.to_string()))?;
        let field = |k: &str| blob.get(k).map_err(|e| bad(e.to_string()));
        let order: usize = field("order")?.parse().map_err(|_| bad("bad order".into()))?;
        let seed: u64 = field("seed")?.parse().map_err(|_| bad("bad seed".into()))?;
        let mut vocabulary = vec![String::new()];
        vocabulary.extend(field("vocabulary")?.split(' ').filter(|s| !s.is_empty()).map(str::to_string));
        let body = std::str::from_utf8(&blob.body).map_err(|_| bad("body is not UTF-8".into()))?;
        let mut tables: BTreeMap<String, ContextTable> = BTreeMap::new();
        let n = vocabulary.len() as u32;
        for (i, line) in body.lines().enumerate() {
            let err = || bad(format!("body line {}", i + 1));
            let mut cols = line.split('\t');
            let (Some(task), Some(ctx), Some(next)) = (cols.next(), cols.next(), cols.next()) else {
                return Err(err());
            };
            let ctx: Vec<u32> = ctx
                .split(' ')
                .filter(|s| !s.is_empty())
                .map(|s| if s == "^" { Ok(START) } else { s.parse().map_err(|_| err()) })
                .collect::<Result<_, _>>()?;
            let mut counts = BTreeMap::new();
            for item in next.split(' ') {
                let (t, c) = item.split_once(':').ok_or_else(err)?;
                let t: u32 = t.parse().map_err(|_| err())?;
                let c: u32 = c.parse().map_err(|_| err())?;
                if t >= n || c == 0 {
                    return Err(err());
                }
                counts.insert(t, c);
            }
            if ctx.len() != order - 1 {
                return Err(err());
            }
            tables.entry(task.to_string()).or_default().insert(ctx, counts);
        }
        Ok(NGramModel {
            order,
            vocabulary,
            tables,
            seed,
        })
    }

    pub fn load(path: &Path) -> Result<Self, GeneratorError> {
        let data = std::fs::read(path).map_err(|e| GeneratorError::Io(format!("{}: {e}", path.display())))?;
        Self::from_bytes(&data)
    }
}

/// `n` masked samples for `task_id`. Sample `i` draws from its own stream
/// derived from `seed` and `i`, so output does not depend on thread count.
pub fn sample(model: &NGramModel, task_id: &str, n: usize, seed: u64) -> Result<Vec<String>, GeneratorError> {
    let table = model
        .tables
        .get(task_id)
        .ok_or_else(|| GeneratorError::UnknownTask(task_id.to_string()))?;
    let kinds: Vec<TokenKind> = model.vocabulary.iter().map(|t| classify(t)).collect();
    (0..n)
        .into_par_iter()
        .map(|i| {
            let s = stream_seed(seed, i as u64);
            model.sample_one(table, &kinds, s)
        })
        .collect()
}
