//! Shared inputs for the benchmarks.

use dmgi_core::graph::{generate_synthetic_multiplex, BlockProbabilities, SyntheticConfig};
use dmgi_core::MultiplexNetwork;

/// Planted-partition network with `relations` informative layers.
pub fn planted(nodes: usize, relations: usize, seed: u64) -> MultiplexNetwork {
    let block = BlockProbabilities { p_in: 0.1, p_out: 0.01 };
    let mut cfg = SyntheticConfig::new(nodes, 3, vec![block; relations]);
    cfg.seed = seed;
    generate_synthetic_multiplex(&cfg).expect("valid benchmark config")
}
