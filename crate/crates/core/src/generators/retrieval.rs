use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use super::GeneratorError;
use crate::dataset::Library;
use crate::evaluation::{ConstraintSpec, EvalError};
use crate::smiles::{CanonicalSmiles, MolGraph};
use crate::teachers::TeacherSet;

/// Library molecules plus the teachers that judge them.
#[derive(Debug, Clone)]
pub struct RetrievalIndex {
    entries: Vec<(CanonicalSmiles, MolGraph)>,
    teachers: TeacherSet,
}

impl RetrievalIndex {
    pub fn new(library: &Library, teachers: TeacherSet) -> Self {
        RetrievalIndex {
            entries: library.entries.iter().map(|e| (e.smiles.clone(), e.mol.clone())).collect(),
            teachers,
        }
    }

    pub fn teachers(&self) -> &TeacherSet {
        &self.teachers
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Library positions of every molecule meeting the spec.
    pub fn pool(&self, spec: &ConstraintSpec) -> Result<Vec<usize>, EvalError> {
        spec.check_context(&self.teachers)?;
        let hits: Vec<bool> = self
            .entries
            .par_iter()
            .map(|(_, m)| crate::evaluation::constraints_satisfied(m, spec, &self.teachers))
            .collect::<Result<_, _>>()?;
        Ok(hits.iter().enumerate().filter(|(_, &h)| h).map(|(i, _)| i).collect())
    }
}

/// Up to `n` distinct library molecules drawn uniformly from those meeting
/// every constraint, in draw order.
pub fn retrieval_generate(
    index: &RetrievalIndex,
    spec: &ConstraintSpec,
    n: usize,
    seed: u64,
) -> Result<Vec<String>, GeneratorError> {
    let pool = index.pool(spec)?;
    if pool.is_empty() {
        return Err(GeneratorError::EmptyPool(spec.to_string()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = n.min(pool.len());
    Ok(index::sample(&mut rng, pool.len(), k)
        .into_iter()
        .map(|i| index.entries[pool[i]].0.as_str().to_string())
        .collect())
}
