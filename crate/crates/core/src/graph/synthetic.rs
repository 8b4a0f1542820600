//! Planted-partition multiplex benchmark generator.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::corrupt::random_permutation;
use crate::graph::{MultiplexNetwork, Relation, Split};
use crate::tensor::{DenseMatrix, SparseMatrix};

/// Edge probabilities of one relation: within a class and across classes.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlockProbabilities {
    pub p_in: f64,
    pub p_out: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SyntheticConfig {
    pub nodes: usize,
    pub classes: usize,
    pub relations: Vec<BlockProbabilities>,
    pub attr_dim: usize,
    pub attr_noise: f64,
    /// Fractions of nodes tagged train and val; the rest are test.
    pub train_fraction: f64,
    pub val_fraction: f64,
    pub seed: u64,
}

impl SyntheticConfig {
    pub fn new(nodes: usize, classes: usize, relations: Vec<BlockProbabilities>) -> Self {
        Self {
            nodes,
            classes,
            relations,
            attr_dim: 50,
            attr_noise: 0.2,
            train_fraction: 0.1,
            val_fraction: 0.1,
            seed: 0,
        }
    }
}

/// Class of node `i` when `n` nodes are split into `classes` contiguous,
/// balanced blocks.
pub fn planted_class(i: usize, n: usize, classes: usize) -> usize {
    i * classes / n
}

/// Draws a labeled multiplex network with planted classes.
///
/// Per relation, every unordered pair is an edge with probability `p_in`
/// inside a class and `p_out` across classes. Attributes start as a class
/// indicator block of width `attr_dim / classes`, then every entry is flipped
/// with probability `attr_noise`. The same config always yields the same
/// network.
pub fn generate_synthetic_multiplex(config: &SyntheticConfig) -> Result<MultiplexNetwork> {
    let SyntheticConfig {
        nodes: n,
        classes,
        attr_dim,
        attr_noise,
        ..
    } = *config;
    if classes < 2 {
        return Err(Error::contract("the generator needs at least two classes"));
    }
    if n < classes {
        return Err(Error::contract(format!(
            "{n} nodes cannot fill {classes} classes"
        )));
    }
    if attr_dim < classes {
        return Err(Error::contract(format!(
            "attribute dimension {attr_dim} is smaller than the class count {classes}"
        )));
    }
    if !(0.0..=1.0).contains(&attr_noise) {
        return Err(Error::contract("attribute noise must lie in [0, 1]"));
    }
    if config.relations.is_empty() {
        return Err(Error::contract("at least one relation is required"));
    }
    for (r, p) in config.relations.iter().enumerate() {
        if !(0.0 <= p.p_out && p.p_out <= p.p_in && p.p_in <= 1.0) {
            return Err(Error::contract(format!(
                "relation {r}: need 0 <= p_out <= p_in <= 1, got p_in={} p_out={}",
                p.p_in, p.p_out
            )));
        }
    }
    let tf = config.train_fraction;
    let vf = config.val_fraction;
    if !(tf >= 0.0 && vf >= 0.0 && tf + vf <= 1.0) {
        return Err(Error::contract("split fractions must be nonnegative and sum to at most 1"));
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let class: Vec<usize> = (0..n).map(|i| planted_class(i, n, classes)).collect();

    let mut relations = Vec::with_capacity(config.relations.len());
    for (r, p) in config.relations.iter().enumerate() {
        let mut edges = Vec::new();
        for i in 0..n {
            for j in i + 1..n {
                let prob = if class[i] == class[j] { p.p_in } else { p.p_out };
                if rng.gen_bool(prob) {
                    edges.push((i, j));
                }
            }
        }
        relations.push(Relation {
            name: format!("r{r}"),
            adjacency: SparseMatrix::from_undirected_edges(n, &edges)?,
        });
    }

    let block = attr_dim / classes;
    let mut attributes = DenseMatrix::zeros(n, attr_dim);
    for i in 0..n {
        let lo = class[i] * block;
        for j in 0..attr_dim {
            let mut v = (lo..lo + block).contains(&j);
            if rng.gen_bool(attr_noise) {
                v = !v;
            }
            attributes.set(i, j, if v { 1.0 } else { 0.0 });
        }
    }

    let order = random_permutation(n, &mut rng);
    let n_train = (tf * n as f64).round() as usize;
    let n_val = ((vf * n as f64).round() as usize).min(n - n_train);
    let mut splits = vec![Some(Split::Test); n];
    for (rank, &node) in order.iter().enumerate() {
        if rank < n_train {
            splits[node] = Some(Split::Train);
        } else if rank < n_train + n_val {
            splits[node] = Some(Split::Val);
        }
    }

    MultiplexNetwork::new(relations, attributes)?
        .with_labels(classes, class.into_iter().map(Some).collect())?
        .with_splits(splits)
}
