use rand::seq::index;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::mapping::MappingSpec;

use super::BenchError;

/// Keeps a uniformly random `k`-subset of the attribute bindings, in their
/// original order, plus the table bindings of tables that keep at least one
/// attribute. Prefixes and hints are retained.
pub fn subsample_attributes(m: &MappingSpec, k: usize, seed: u64) -> Result<MappingSpec, BenchError> {
    let total = m.attributes.len();
    if k > total {
        return Err(BenchError::SampleTooLarge { requested: k, available: total });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut picked = index::sample(&mut rng, total, k).into_vec();
    picked.sort_unstable();
    let attributes: Vec<_> = picked.into_iter().map(|i| m.attributes[i].clone()).collect();
    let tables = m
        .tables
        .iter()
        .filter(|t| attributes.iter().any(|a| a.table == t.table))
        .cloned()
        .collect();
    Ok(MappingSpec {
        prefixes: m.prefixes.clone(),
        tables,
        attributes,
        hints: m.hints.clone(),
    })
}
