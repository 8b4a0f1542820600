//! Fixtures and independent reference computations shared by the
//! integration tests.

#![allow(dead_code)]

use dmgi_core::graph::{
    generate_synthetic_multiplex, BlockProbabilities, MultiplexNetwork, Relation, Split,
    SyntheticConfig,
};
use dmgi_core::model::{DmgiModel, ModelConfig, ModelParameters};
use dmgi_core::tensor::{finite_difference, relative_error};
use dmgi_core::train::{initialize_parameters, model_dims};
use dmgi_core::tensor::{DenseMatrix, SparseMatrix};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// A small random attributed multiplex network with labels and splits.
pub fn tiny_network(seed: u64, n: usize, f: usize, relations: usize, classes: usize) -> MultiplexNetwork {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let rels = (0..relations)
        .map(|r| {
            let mut edges = Vec::new();
            for i in 0..n {
                for j in i + 1..n {
                    if rng.gen_bool(0.4) {
                        edges.push((i, j));
                    }
                }
            }
            Relation {
                name: format!("rel{r}"),
                adjacency: SparseMatrix::from_undirected_edges(n, &edges).unwrap(),
            }
        })
        .collect();
    let x = DenseMatrix::from_fn(n, f, |_, _| rng.gen_range(0.0..1.0));
    let labels = (0..n).map(|i| Some(i % classes)).collect();
    let splits = (0..n)
        .map(|i| match i % 4 {
            0 | 1 => Some(Split::Train),
            2 => Some(Split::Val),
            _ => Some(Split::Test),
        })
        .collect();
    MultiplexNetwork::new(rels, x)
        .unwrap()
        .with_labels(classes, labels)
        .unwrap()
        .with_splits(splits)
        .unwrap()
}

/// The planted-partition benchmark: 300 nodes, 3 classes, two informative
/// relations, plus an optional pure-noise third relation.
pub fn benchmark(seed: u64, with_noise_relation: bool) -> MultiplexNetwork {
    let informative = BlockProbabilities {
        p_in: 0.1,
        p_out: 0.01,
    };
    let mut relations = vec![informative, informative];
    if with_noise_relation {
        relations.push(BlockProbabilities {
            p_in: 0.05,
            p_out: 0.05,
        });
    }
    let mut cfg = SyntheticConfig::new(300, 3, relations);
    cfg.attr_dim = 50;
    cfg.attr_noise = 0.2;
    cfg.seed = seed;
    generate_synthetic_multiplex(&cfg).unwrap()
}

pub fn dgi_config() -> ModelConfig {
    ModelConfig {
        alpha: 0.0,
        beta: 0.0,
        ..ModelConfig::default()
    }
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

/// Straight-line single-graph infomax cross entropy:
/// dense normalization of `A + wI`, `relu(ÂXW)`, sigmoid mean readout,
/// bilinear logits, and `-Σ ln σ(pos) - Σ ln(1 - σ(neg))`.
pub fn straight_line_dgi(
    adjacency: &SparseMatrix,
    x: &DenseMatrix,
    perm: &[usize],
    w: &DenseMatrix,
    m: &DenseMatrix,
    self_weight: f64,
) -> f64 {
    let n = x.rows();
    let f = x.cols();
    let d = w.cols();
    let mut a = vec![vec![0.0; n]; n];
    for &(i, j, v) in adjacency.entries() {
        a[i][j] = v;
    }
    for (i, row) in a.iter_mut().enumerate() {
        row[i] += self_weight;
    }
    let deg: Vec<f64> = a.iter().map(|row| row.iter().sum()).collect();
    let encode = |rows: &dyn Fn(usize) -> usize| -> Vec<Vec<f64>> {
        let mut h = vec![vec![0.0; d]; n];
        for i in 0..n {
            for k in 0..d {
                let mut acc = 0.0;
                for j in 0..n {
                    let norm = a[i][j] / (deg[i] * deg[j]).sqrt();
                    if norm == 0.0 {
                        continue;
                    }
                    for l in 0..f {
                        acc += norm * x.get(rows(j), l) * w.get(l, k);
                    }
                }
                h[i][k] = acc.max(0.0);
            }
        }
        h
    };
    let h = encode(&|j| j);
    let h_neg = encode(&|j| perm[j]);
    let s: Vec<f64> = (0..d)
        .map(|k| sigmoid(h.iter().map(|r| r[k]).sum::<f64>() / n as f64))
        .collect();
    let logit = |hi: &[f64]| -> f64 {
        let mut acc = 0.0;
        for p in 0..d {
            for q in 0..d {
                acc += hi[p] * m.get(p, q) * s[q];
            }
        }
        acc
    };
    let mut loss = 0.0;
    for i in 0..n {
        loss -= sigmoid(logit(&h[i])).ln();
        loss -= (1.0 - sigmoid(logit(&h_neg[i]))).ln();
    }
    loss
}

pub const STEP: f64 = 1e-6;
pub const TOLERANCE: f64 = 1e-5;

pub fn floor(loss: f64) -> f64 {
    1e-3 * loss.abs().max(1.0)
}

pub fn params_for(model: &DmgiModel<'_>, net: &MultiplexNetwork, d: usize, seed: u64) -> ModelParameters {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut p = initialize_parameters(model_dims(net, model, d), model.config(), &mut rng);
    // spread the attention logits so that the softmax is not flat
    for q in &mut p.attention {
        q.as_mut_slice().iter_mut().for_each(|v| *v *= 3.0);
    }
    p
}

/// Largest relative error between tape and finite-difference gradients.
pub fn gradient_error(net: &MultiplexNetwork, config: ModelConfig, d: usize, seed: u64) -> f64 {
    let model = DmgiModel::new(net, config).unwrap();
    let params = params_for(&model, net, d, seed);
    let draw = model.draw_corruption(&mut ChaCha8Rng::seed_from_u64(seed + 1));
    let (terms, grads) = model.objective_and_gradients(&params, &draw).unwrap();
    let numeric = finite_difference(&params.to_tensors(), STEP, |ts| {
        model.objective(&params.with_tensors(ts).unwrap(), &draw).unwrap().total
    });
    let fl = floor(terms.total);
    grads
        .tensors()
        .iter()
        .zip(&numeric)
        .flat_map(|(a, n)| {
            a.as_slice()
                .iter()
                .zip(n.as_slice())
                .map(|(x, y)| relative_error(*x, *y, fl))
                .collect::<Vec<_>>()
        })
        .fold(0.0, f64::max)
}
