//! Benchmark fixtures.

use asdim_core::engine::PipelineConfig;
use asdim_core::group::Word;
use asdim_core::tree::{TreeMetric, TreeSlice};
use asdim_core::Group;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn config(name: &str) -> PipelineConfig {
    let path = format!("{}/../../configs/{name}.toml", env!("CARGO_MANIFEST_DIR"));
    PipelineConfig::from_toml(&std::fs::read_to_string(path).unwrap()).unwrap()
}

pub fn group(name: &str) -> Group {
    Group::from_spec(&config(name).group).unwrap()
}

pub fn random_words(g: &Group, n: usize, len: usize, seed: u64) -> Vec<Word> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let letters = g.letters();
    (0..n)
        .map(|_| (0..len).map(|_| letters[rng.gen_range(0..letters.len())]).collect())
        .collect()
}

/// Random tree where each vertex hangs off one of the `reach` vertices
/// before it, rooted at 0.
pub fn random_tree(n: usize, reach: usize, seed: u64) -> TreeMetric {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let parents: Vec<Option<u32>> = (0..n)
        .map(|v| (v > 0).then(|| rng.gen_range(v.saturating_sub(reach)..v) as u32))
        .collect();
    let t = TreeSlice::from_parents(&parents, (0..n).map(|v| v.to_string()).collect()).unwrap();
    TreeMetric::new(&t, 0).unwrap()
}
