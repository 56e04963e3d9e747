use std::collections::BTreeSet;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::DatasetError;
use crate::rng::stream_seed;
use crate::teachers::{Fact, KnowledgeRecord};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SubsetPolicy {
    pub min_facts: usize,
    pub max_facts: usize,
    pub samples_per_molecule: usize,
    pub seed: u64,
}

impl Default for SubsetPolicy {
    fn default() -> Self {
        SubsetPolicy {
            min_facts: 1,
            max_facts: 2,
            samples_per_molecule: 4,
            seed: 0,
        }
    }
}

impl SubsetPolicy {
    pub fn validate(&self) -> Result<(), DatasetError> {
        if self.min_facts < 1 || self.min_facts > self.max_facts {
            return Err(DatasetError::InvalidPolicy(format!(
                "need 1 <= min_facts <= max_facts, got {}..{}",
                self.min_facts, self.max_facts
            )));
        }
        Ok(())
    }

    /// Policy with the seed mixed with a molecule index.
    pub fn for_molecule(&self, index: usize) -> SubsetPolicy {
        SubsetPolicy {
            seed: stream_seed(self.seed, index as u64),
            ..self.clone()
        }
    }
}

fn binom(n: usize, k: usize) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut r: u128 = 1;
    for i in 0..k {
        r = r.saturating_mul((n - i) as u128) / (i as u128 + 1);
    }
    r
}

/// The `rank`-th `k`-combination of `0..n` in lexicographic order.
fn unrank(n: usize, k: usize, mut rank: u128) -> Vec<usize> {
    let mut out = Vec::with_capacity(k);
    let mut next = 0;
    for slot in 0..k {
        let left = k - slot - 1;
        loop {
            let c = binom(n - next - 1, left);
            if rank < c {
                break;
            }
            rank -= c;
            next += 1;
        }
        out.push(next);
        next += 1;
    }
    out
}

/// Lattice index to subset: sizes ascending, then lexicographic.
fn lattice_subset(n: usize, min: usize, max: usize, mut rank: u128) -> Vec<usize> {
    for k in min..=max {
        let c = binom(n, k);
        if rank < c {
            return unrank(n, k, rank);
        }
        rank -= c;
    }
    unreachable!("rank beyond lattice")
}

/// Up to `samples_per_molecule` distinct fact subsets, uniform without
/// replacement over all subsets with size in `[min_facts, max_facts]`,
/// returned in lattice order.
pub fn select_knowledge_subsets(record: &KnowledgeRecord, policy: &SubsetPolicy) -> Result<Vec<Vec<Fact>>, DatasetError> {
    policy.validate()?;
    let n = record.facts.len();
    if n < policy.min_facts {
        return Err(DatasetError::TooFewFacts {
            have: n,
            need: policy.min_facts,
        });
    }
    let max = policy.max_facts.min(n);
    let total: u128 = (policy.min_facts..=max).map(|k| binom(n, k)).sum();
    let want = (policy.samples_per_molecule as u128).min(total);
    let ranks: BTreeSet<u128> = if want == total {
        (0..total).collect()
    } else {
        // Floyd's algorithm
        let mut rng = ChaCha8Rng::seed_from_u64(policy.seed);
        let mut chosen = BTreeSet::new();
        for j in total - want..total {
            let t = rng.gen_range(0..=j);
            if !chosen.insert(t) {
                chosen.insert(j);
            }
        }
        chosen
    };
    Ok(ranks
        .into_iter()
        .map(|r| {
            lattice_subset(n, policy.min_facts, max, r)
                .into_iter()
                .map(|i| record.facts[i].clone())
                .collect()
        })
        .collect())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lattice_enumeration_is_complete() {
        let mut seen = BTreeSet::new();
        let total: u128 = (1..=3).map(|k| binom(6, k)).sum();
        for r in 0..total {
            let s = lattice_subset(6, 1, 3, r);
            assert!(s.windows(2).all(|w| w[0] < w[1]));
            assert!(seen.insert(s));
        }
        assert_eq!(seen.len(), 6 + 15 + 20);
    }
}
