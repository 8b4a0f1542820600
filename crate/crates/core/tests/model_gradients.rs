mod common;

use common::{dgi_config, gradient_error, params_for, straight_line_dgi, tiny_network, TOLERANCE};
use dmgi_core::graph::{MultiplexNetwork, Relation};
use dmgi_core::model::{Aggregation, Corruption, DmgiModel, ModelConfig, Readout};
use dmgi_core::tensor::{DenseMatrix, SparseMatrix};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

#[test]
fn gradients_match_across_modes() {
    let variants: Vec<(&str, ModelConfig)> = vec![
        ("default", ModelConfig::default()),
        (
            "maxpool",
            ModelConfig {
                readout: Readout::Maxpool,
                ..ModelConfig::default()
            },
        ),
        (
            "adjacency",
            ModelConfig {
                corruption: Corruption::Adjacency,
                ..ModelConfig::default()
            },
        ),
        (
            "untied",
            ModelConfig {
                untied_discriminator: true,
                ..ModelConfig::default()
            },
        ),
        (
            "no-negative",
            ModelConfig {
                consensus_negative: false,
                alpha: 0.5,
                ..ModelConfig::default()
            },
        ),
        (
            "attention-semi",
            ModelConfig {
                aggregation: Aggregation::Attention,
                semi_supervised: true,
                alpha: 0.3,
                beta: 0.01,
                gamma: 0.7,
                ..ModelConfig::default()
            },
        ),
        (
            "regularize-subset",
            ModelConfig {
                aggregation: Aggregation::Attention,
                regularize_all: false,
                beta: 0.2,
                ..ModelConfig::default()
            },
        ),
    ];
    for (seed, (name, cfg)) in variants.into_iter().enumerate() {
        let net = tiny_network(seed as u64, 8, 5, 3, 3);
        let err = gradient_error(&net, cfg, 4, seed as u64 * 11);
        assert!(err < TOLERANCE, "{name}: relative error {err}");
    }
}

#[test]
fn untied_relation_gradient_stays_on_its_matrix() {
    // With α = β = 0 only the relation losses remain. Swapping relation 1's
    // graph must leave the gradient of M⁽⁰⁾ unchanged and vice versa.
    let net_a = tiny_network(5, 8, 5, 2, 2);
    let alt = tiny_network(6, 8, 5, 2, 2);
    let net_b = MultiplexNetwork::new(
        vec![net_a.relations()[0].clone(), alt.relations()[1].clone()],
        net_a.attributes().clone(),
    )
    .unwrap();
    let cfg = ModelConfig {
        untied_discriminator: true,
        ..dgi_config()
    };
    let model_a = DmgiModel::new(&net_a, cfg.clone()).unwrap();
    let model_b = DmgiModel::new(&net_b, cfg).unwrap();
    let params = params_for(&model_a, &net_a, 4, 3);
    let draw = model_a.draw_corruption(&mut ChaCha8Rng::seed_from_u64(4));
    let (_, ga) = model_a.objective_and_gradients(&params, &draw).unwrap();
    let (_, gb) = model_b.objective_and_gradients(&params, &draw).unwrap();
    assert_eq!(ga.scoring[0], gb.scoring[0]);
    assert_ne!(ga.scoring[1], gb.scoring[1]);
    assert_eq!(ga.encoders[0], gb.encoders[0]);
}

#[test]
fn shared_discriminator_sees_every_relation() {
    let net_a = tiny_network(5, 8, 5, 2, 2);
    let alt = tiny_network(6, 8, 5, 2, 2);
    let net_b = MultiplexNetwork::new(
        vec![net_a.relations()[0].clone(), alt.relations()[1].clone()],
        net_a.attributes().clone(),
    )
    .unwrap();
    let model_a = DmgiModel::new(&net_a, dgi_config()).unwrap();
    let model_b = DmgiModel::new(&net_b, dgi_config()).unwrap();
    let params = params_for(&model_a, &net_a, 4, 3);
    let draw = model_a.draw_corruption(&mut ChaCha8Rng::seed_from_u64(4));
    let (_, ga) = model_a.objective_and_gradients(&params, &draw).unwrap();
    let (_, gb) = model_b.objective_and_gradients(&params, &draw).unwrap();
    assert_eq!(params.scoring.len(), 1);
    assert_ne!(ga.scoring[0], gb.scoring[0]);
}

#[test]
fn attention_scaling_concentrates() {
    let net = tiny_network(9, 10, 5, 3, 2);
    let cfg = ModelConfig {
        aggregation: Aggregation::Attention,
        ..ModelConfig::default()
    };
    let model = DmgiModel::new(&net, cfg).unwrap();
    let mut params = params_for(&model, &net, 4, 2);
    let draw = model.identity_corruption();
    let base = model.forward(&params, &draw).unwrap();
    for q in &mut params.attention {
        q.as_mut_slice().iter_mut().for_each(|v| *v *= 100.0);
    }
    let scaled = model.forward(&params, &draw).unwrap();
    for i in 0..net.n() {
        // logits q·h, recomputed to find the argmax relation
        let logits: Vec<f64> = (0..3)
            .map(|r| {
                base.positive[r]
                    .row(i)
                    .iter()
                    .zip(params.attention[r].row(0))
                    .map(|(h, q)| h * q)
                    .sum()
            })
            .collect();
        let top = (0..3).fold(0, |b, r| if logits[r] > logits[b] { r } else { b });
        let mut sorted = logits.clone();
        sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
        if sorted[0] - sorted[1] < 0.1 {
            continue;
        }
        assert!(scaled.attention.get(i, top) > 0.99, "node {i}: {:?}", scaled.attention.row(i));
    }
}

#[test]
fn forward_output_invariants() {
    for (seed, agg) in [(1u64, Aggregation::Average), (2, Aggregation::Attention)] {
        let net = tiny_network(seed, 9, 4, 3, 3);
        let cfg = ModelConfig {
            aggregation: agg,
            ..ModelConfig::default()
        };
        let model = DmgiModel::new(&net, cfg).unwrap();
        let params = params_for(&model, &net, 5, seed);
        let out = model
            .forward(&params, &model.draw_corruption(&mut ChaCha8Rng::seed_from_u64(seed)))
            .unwrap();
        for s in &out.summaries {
            assert!(s.iter().all(|&v| v > 0.0 && v < 1.0));
        }
        for h in out.positive.iter().chain(&out.negative) {
            assert!(h.as_slice().iter().all(|&v| v >= 0.0));
        }
        for i in 0..net.n() {
            let row = out.attention.row(i);
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-12);
            if agg == Aggregation::Average {
                assert!(row.iter().all(|&a| a == 1.0 / 3.0));
            }
        }
    }
}

#[test]
fn objective_is_deterministic() {
    let net = tiny_network(3, 8, 5, 2, 2);
    let model = DmgiModel::new(&net, ModelConfig::default()).unwrap();
    let params = params_for(&model, &net, 4, 1);
    let draw = model.draw_corruption(&mut ChaCha8Rng::seed_from_u64(2));
    let a = model.objective(&params, &draw).unwrap();
    let b = model.objective(&params, &draw).unwrap();
    assert_eq!(a.total.to_bits(), b.total.to_bits());
}

#[test]
fn composition_without_regularizers() {
    // β = γ = 0 leaves Σ ℒ⁽ʳ⁾ + α ℓ_cs
    let net = tiny_network(4, 8, 5, 2, 2);
    let cfg = ModelConfig {
        alpha: 0.37,
        beta: 0.0,
        ..ModelConfig::default()
    };
    let model = DmgiModel::new(&net, cfg).unwrap();
    let params = params_for(&model, &net, 4, 8);
    let draw = model.draw_corruption(&mut ChaCha8Rng::seed_from_u64(9));
    let t = model.objective(&params, &draw).unwrap();
    let expected = t.relation_losses.iter().sum::<f64>() + 0.37 * t.consensus;
    assert!((t.total - expected).abs() < 1e-12 * expected.abs().max(1.0));
}

#[test]
fn single_relation_reduces_to_straight_line() {
    let mut rng = ChaCha8Rng::seed_from_u64(77);
    for trial in 0..3u64 {
        let net = tiny_network(100 + trial, 7, 4, 1, 2);
        let model = DmgiModel::new(&net, dgi_config()).unwrap();
        let params = params_for(&model, &net, 3, trial);
        let draw = model.draw_corruption(&mut rng);
        let got = model.objective(&params, &draw).unwrap().total;
        let want = straight_line_dgi(
            &net.relations()[0].adjacency,
            net.attributes(),
            &draw.permutations[0],
            &params.encoders[0],
            &params.scoring[0],
            3.0,
        );
        assert!((got - want).abs() < 1e-12, "trial {trial}: {got} vs {want}");
    }
}

#[test]
fn isolated_node_needs_self_weight() {
    let adj = SparseMatrix::from_undirected_edges(3, &[(0, 1)]).unwrap();
    let net = MultiplexNetwork::new(
        vec![Relation {
            name: "r".into(),
            adjacency: adj,
        }],
        DenseMatrix::filled(3, 2, 1.0),
    )
    .unwrap();
    let cfg = ModelConfig {
        self_weight: 0.0,
        ..ModelConfig::default()
    };
    assert!(DmgiModel::new(&net, cfg).is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(8))]

    #[test]
    fn random_instances_match_finite_differences(seed in any::<u64>(), attn in any::<bool>(), semi in any::<bool>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let net = tiny_network(seed, 8, 5, 2, 3);
        let cfg = ModelConfig {
            aggregation: if attn { Aggregation::Attention } else { Aggregation::Average },
            semi_supervised: semi,
            alpha: rng.gen_range(0.0..1.0),
            beta: rng.gen_range(0.0..0.1),
            gamma: rng.gen_range(0.0..1.0),
            ..ModelConfig::default()
        };
        let err = gradient_error(&net, cfg, 4, seed);
        prop_assert!(err < TOLERANCE, "relative error {}", err);
    }
}
