use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{normalize_adjacency, random_permutation, validate_permutation, MultiplexNetwork};
use crate::model::ops::{
    build_aggregate, build_consensus, build_encoder, build_infomax_loss, build_readout,
    build_squared_norm, build_supervised_loss, target_matrix,
};
use crate::model::{Aggregation, Corruption, ModelConfig, ModelParameters};
use crate::tensor::{DenseMatrix, SparseMatrix, Tape, Var};

/// One node permutation per relation, used to build that relation's
/// negative patches.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorruptionDraw {
    pub permutations: Vec<Vec<usize>>,
}

/// Value of the joint objective and its unweighted components.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveTerms {
    pub total: f64,
    /// Negated relation cross entropies, in relation order.
    pub relation_losses: Vec<f64>,
    pub consensus: f64,
    pub l2: f64,
    pub supervised: Option<f64>,
    /// Mean relation weight over nodes; uniform without attention.
    pub mean_attention: Vec<f64>,
}

/// Intermediate values of one forward pass.
#[derive(Debug, Clone)]
pub struct ForwardOutputs {
    pub positive: Vec<DenseMatrix>,
    pub negative: Vec<DenseMatrix>,
    pub summaries: Vec<Vec<f64>>,
    pub positive_logits: Vec<Vec<f64>>,
    pub negative_logits: Vec<Vec<f64>>,
    pub aggregated: DenseMatrix,
    pub aggregated_negative: DenseMatrix,
    /// n×|R| relation weights per node; uniform without attention.
    pub attention: DenseMatrix,
}

fn column_means(m: &DenseMatrix) -> Vec<f64> {
    let (n, c) = m.shape();
    (0..c)
        .map(|j| (0..n).map(|i| m.get(i, j)).sum::<f64>() / n as f64)
        .collect()
}

impl ForwardOutputs {
    /// Mean attention weight per relation.
    pub fn mean_attention(&self) -> Vec<f64> {
        column_means(&self.attention)
    }

    /// Per relation: mean discriminator probability on true pairs minus the
    /// mean on corrupted pairs.
    pub fn discriminator_gap(&self) -> Vec<f64> {
        let mean_prob = |l: &[f64]| {
            l.iter().map(|&x| crate::tensor::sigmoid(x)).sum::<f64>() / l.len() as f64
        };
        self.positive_logits
            .iter()
            .zip(&self.negative_logits)
            .map(|(p, n)| mean_prob(p) - mean_prob(n))
            .collect()
    }
}

/// Which matrix to report as the node embedding.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum EmbeddingSource {
    /// The trainable consensus matrix `Z`.
    #[default]
    Consensus,
    /// The aggregate of the relation embeddings.
    Aggregated,
}

struct Supervision {
    classes: usize,
    train: DenseMatrix,
    train_count: usize,
    val: Option<(DenseMatrix, usize)>,
}

struct Recorded {
    params: Vec<Var>,
    positive: Vec<Var>,
    negative: Vec<Var>,
    summaries: Vec<Var>,
    positive_logits: Vec<Var>,
    negative_logits: Vec<Var>,
    relation_losses: Vec<Var>,
    aggregated: Var,
    aggregated_negative: Var,
    attention: Option<Var>,
    consensus: Var,
    l2: Var,
    supervised: Option<Var>,
    total: Var,
}

/// A network prepared for training: normalized adjacencies plus the
/// supervision targets when the semi-supervised term is active.
pub struct DmgiModel<'n> {
    network: &'n MultiplexNetwork,
    config: ModelConfig,
    adjacency: Vec<SparseMatrix>,
    supervision: Option<Supervision>,
}

impl<'n> DmgiModel<'n> {
    pub fn new(network: &'n MultiplexNetwork, config: ModelConfig) -> Result<Self> {
        config.validate()?;
        let adjacency = network
            .relations()
            .iter()
            .map(|r| normalize_adjacency(&r.adjacency, config.self_weight))
            .collect::<Result<Vec<_>>>()?;
        let supervision = if config.semi_supervised {
            let labels = network
                .labels()
                .ok_or_else(|| Error::contract("semi-supervised mode requires labels"))?;
            let masks = network
                .split_masks()
                .ok_or_else(|| Error::contract("semi-supervised mode requires splits"))?;
            if masks.train.is_empty() {
                return Err(Error::contract(
                    "semi-supervised mode requires at least one training node",
                ));
            }
            let classes = network.classes();
            let n = network.n();
            let val = if masks.val.is_empty() {
                None
            } else {
                Some((target_matrix(n, classes, labels, &masks.val)?, masks.val.len()))
            };
            Some(Supervision {
                classes,
                train: target_matrix(n, classes, labels, &masks.train)?,
                train_count: masks.train.len(),
                val,
            })
        } else {
            None
        };
        Ok(Self {
            network,
            config,
            adjacency,
            supervision,
        })
    }

    pub fn network(&self) -> &MultiplexNetwork {
        self.network
    }

    pub fn config(&self) -> &ModelConfig {
        &self.config
    }

    pub fn relation_count(&self) -> usize {
        self.adjacency.len()
    }

    pub fn normalized_adjacency(&self) -> &[SparseMatrix] {
        &self.adjacency
    }

    /// Number of classes the classifier head predicts, when present.
    pub fn classifier_classes(&self) -> Option<usize> {
        self.supervision.as_ref().map(|s| s.classes)
    }

    pub fn draw_corruption<R: Rng + ?Sized>(&self, rng: &mut R) -> CorruptionDraw {
        let n = self.network.n();
        CorruptionDraw {
            permutations: (0..self.relation_count())
                .map(|_| random_permutation(n, rng))
                .collect(),
        }
    }

    pub fn identity_corruption(&self) -> CorruptionDraw {
        let n = self.network.n();
        CorruptionDraw {
            permutations: vec![(0..n).collect(); self.relation_count()],
        }
    }

    pub fn check_parameters(&self, params: &ModelParameters) -> Result<()> {
        let r = self.relation_count();
        let n = self.network.n();
        let f = self.network.attribute_dim();
        let bad = |what: String| Err(Error::shape("parameters", what));
        if params.encoders.len() != r {
            return bad(format!("{} encoders for {r} relations", params.encoders.len()));
        }
        let d = params.consensus.cols();
        if params.consensus.rows() != n {
            return bad(format!("consensus has {} rows for {n} nodes", params.consensus.rows()));
        }
        if let Some(w) = params.encoders.iter().find(|w| w.shape() != (f, d)) {
            return bad(format!("encoder {:?}, expected {:?}", w.shape(), (f, d)));
        }
        let scoring = if self.config.untied_discriminator { r } else { 1 };
        if params.scoring.len() != scoring {
            return bad(format!("{} scoring matrices, expected {scoring}", params.scoring.len()));
        }
        if let Some(m) = params.scoring.iter().find(|m| m.shape() != (d, d)) {
            return bad(format!("scoring {:?}, expected {:?}", m.shape(), (d, d)));
        }
        let attention = match self.config.aggregation {
            Aggregation::Attention => r,
            Aggregation::Average => 0,
        };
        if params.attention.len() != attention {
            return bad(format!("{} attention vectors, expected {attention}", params.attention.len()));
        }
        if let Some(q) = params.attention.iter().find(|q| q.shape() != (1, d)) {
            return bad(format!("attention vector {:?}, expected {:?}", q.shape(), (1, d)));
        }
        match (&self.supervision, &params.classifier) {
            (None, None) => {}
            (Some(s), Some(c)) => {
                if c.weights.shape() != (d, s.classes) || c.bias.shape() != (1, s.classes) {
                    return bad(format!(
                        "classifier {:?} + {:?}, expected {:?} + {:?}",
                        c.weights.shape(),
                        c.bias.shape(),
                        (d, s.classes),
                        (1, s.classes)
                    ));
                }
            }
            (Some(_), None) => return bad("semi-supervised mode needs a classifier".into()),
            (None, Some(_)) => return bad("classifier present without semi-supervision".into()),
        }
        Ok(())
    }

    fn corrupted_adjacency(&self, draw: &CorruptionDraw) -> Result<Vec<SparseMatrix>> {
        self.check_draw(draw)?;
        match self.config.corruption {
            Corruption::Attributes => Ok(Vec::new()),
            Corruption::Adjacency => self
                .adjacency
                .iter()
                .zip(&draw.permutations)
                .map(|(a, p)| a.permute_symmetric(p))
                .collect(),
        }
    }

    fn check_draw(&self, draw: &CorruptionDraw) -> Result<()> {
        if draw.permutations.len() != self.relation_count() {
            return Err(Error::contract(format!(
                "{} permutations for {} relations",
                draw.permutations.len(),
                self.relation_count()
            )));
        }
        for p in &draw.permutations {
            validate_permutation(p, self.network.n())?;
        }
        Ok(())
    }

    fn record<'t>(
        &'t self,
        tape: &mut Tape<'t>,
        params: &ModelParameters,
        draw: &CorruptionDraw,
        permuted: &'t [SparseMatrix],
    ) -> Result<Recorded> {
        self.check_parameters(params)?;
        let cfg = &self.config;
        let param_vars = params
            .tensors()
            .into_iter()
            .map(|t| tape.param(t.clone()))
            .collect::<Result<Vec<_>>>()?;
        let r_count = self.relation_count();
        let encoders = &param_vars[..r_count];
        let n_scoring = params.scoring.len();
        let scoring = &param_vars[r_count..r_count + n_scoring];
        let z = param_vars[r_count + n_scoring];
        let attention = &param_vars[r_count + n_scoring + 1..r_count + n_scoring + 1 + params.attention.len()];
        let classifier = &param_vars[r_count + n_scoring + 1 + params.attention.len()..];

        let x_value = self.network.attributes();
        let x = tape.constant(x_value.clone())?;

        let mut rec_pos = Vec::with_capacity(r_count);
        let mut rec_neg = Vec::with_capacity(r_count);
        let mut summaries = Vec::with_capacity(r_count);
        let mut pos_logits = Vec::with_capacity(r_count);
        let mut neg_logits = Vec::with_capacity(r_count);
        let mut relation_losses = Vec::with_capacity(r_count);
        for r in 0..r_count {
            let w = encoders[r];
            let h = build_encoder(tape, &self.adjacency[r], x, w)?;
            let h_neg = match cfg.corruption {
                Corruption::Attributes => {
                    let shuffled = tape.constant(x_value.gather_rows(&draw.permutations[r]))?;
                    build_encoder(tape, &self.adjacency[r], shuffled, w)?
                }
                Corruption::Adjacency => build_encoder(tape, &permuted[r], x, w)?,
            };
            let s = build_readout(tape, h, cfg.readout)?;
            let m = if cfg.untied_discriminator { scoring[r] } else { scoring[0] };
            let (loss, pl, nl) = build_infomax_loss(tape, h, h_neg, s, m)?;
            rec_pos.push(h);
            rec_neg.push(h_neg);
            summaries.push(s);
            pos_logits.push(pl);
            neg_logits.push(nl);
            relation_losses.push(loss);
        }

        let attention_vars = match cfg.aggregation {
            Aggregation::Attention => Some(attention),
            Aggregation::Average => None,
        };
        let (aggregated, weights) = build_aggregate(tape, &rec_pos, attention_vars)?;
        let (aggregated_negative, _) = build_aggregate(tape, &rec_neg, attention_vars)?;
        let consensus = build_consensus(tape, z, aggregated, aggregated_negative, cfg.consensus_negative)?;

        let mut regularized: Vec<Var> = param_vars[..r_count + n_scoring + 1].to_vec();
        if cfg.regularize_all {
            regularized.extend_from_slice(attention);
            regularized.extend_from_slice(classifier);
        }
        let l2 = build_squared_norm(tape, &regularized)?;

        let supervised = match &self.supervision {
            Some(s) => {
                let targets = tape.constant(s.train.clone())?;
                Some(build_supervised_loss(
                    tape,
                    z,
                    classifier[0],
                    classifier[1],
                    targets,
                    s.train_count,
                )?)
            }
            None => None,
        };

        let mut total = relation_losses[0];
        for &l in &relation_losses[1..] {
            total = tape.add(total, l)?;
        }
        if cfg.alpha > 0.0 {
            let t = tape.scale(consensus, cfg.alpha)?;
            total = tape.add(total, t)?;
        }
        if cfg.beta > 0.0 {
            let t = tape.scale(l2, cfg.beta)?;
            total = tape.add(total, t)?;
        }
        if let Some(sup) = supervised {
            if cfg.gamma > 0.0 {
                let t = tape.scale(sup, cfg.gamma)?;
                total = tape.add(total, t)?;
            }
        }

        Ok(Recorded {
            params: param_vars,
            positive: rec_pos,
            negative: rec_neg,
            summaries,
            positive_logits: pos_logits,
            negative_logits: neg_logits,
            relation_losses,
            aggregated,
            aggregated_negative,
            attention: weights,
            consensus,
            l2,
            supervised,
            total,
        })
    }

    fn terms(tape: &Tape<'_>, rec: &Recorded) -> ObjectiveTerms {
        ObjectiveTerms {
            total: tape.scalar(rec.total),
            relation_losses: rec.relation_losses.iter().map(|&v| tape.scalar(v)).collect(),
            consensus: tape.scalar(rec.consensus),
            l2: tape.scalar(rec.l2),
            supervised: rec.supervised.map(|v| tape.scalar(v)),
            mean_attention: match rec.attention {
                Some(a) => column_means(tape.value(a)),
                None => {
                    let r = rec.relation_losses.len();
                    vec![1.0 / r as f64; r]
                }
            },
        }
    }

    /// Evaluates the joint objective for one corruption draw.
    pub fn objective(&self, params: &ModelParameters, draw: &CorruptionDraw) -> Result<ObjectiveTerms> {
        let permuted = self.corrupted_adjacency(draw)?;
        let mut tape = Tape::new();
        let rec = self.record(&mut tape, params, draw, &permuted)?;
        Ok(Self::terms(&tape, &rec))
    }

    /// Objective plus its gradient with respect to every parameter, laid out
    /// like `params`.
    pub fn objective_and_gradients(
        &self,
        params: &ModelParameters,
        draw: &CorruptionDraw,
    ) -> Result<(ObjectiveTerms, ModelParameters)> {
        let permuted = self.corrupted_adjacency(draw)?;
        let mut tape = Tape::new();
        let rec = self.record(&mut tape, params, draw, &permuted)?;
        let mut grads = tape.backward(rec.total)?;
        let tensors: Vec<DenseMatrix> = rec.params.iter().map(|&v| grads.take(v)).collect();
        Ok((Self::terms(&tape, &rec), params.with_tensors(&tensors)?))
    }

    pub fn forward(&self, params: &ModelParameters, draw: &CorruptionDraw) -> Result<ForwardOutputs> {
        let permuted = self.corrupted_adjacency(draw)?;
        let mut tape = Tape::new();
        let rec = self.record(&mut tape, params, draw, &permuted)?;
        let values = |vs: &[Var]| vs.iter().map(|&v| tape.value(v).clone()).collect::<Vec<_>>();
        let columns = |vs: &[Var]| {
            vs.iter()
                .map(|&v| tape.value(v).as_slice().to_vec())
                .collect::<Vec<_>>()
        };
        let n = self.network.n();
        let r = self.relation_count();
        Ok(ForwardOutputs {
            positive: values(&rec.positive),
            negative: values(&rec.negative),
            summaries: columns(&rec.summaries),
            positive_logits: columns(&rec.positive_logits),
            negative_logits: columns(&rec.negative_logits),
            aggregated: tape.value(rec.aggregated).clone(),
            aggregated_negative: tape.value(rec.aggregated_negative).clone(),
            attention: match rec.attention {
                Some(a) => tape.value(a).clone(),
                None => DenseMatrix::filled(n, r, 1.0 / r as f64),
            },
        })
    }

    /// Cross entropy of the classifier head on the validation split, when
    /// semi-supervised mode is on and validation nodes exist.
    pub fn validation_loss(&self, params: &ModelParameters) -> Result<Option<f64>> {
        let (Some(sup), Some(clf)) = (&self.supervision, &params.classifier) else {
            return Ok(None);
        };
        let Some((targets, count)) = &sup.val else {
            return Ok(None);
        };
        let mut tape = Tape::new();
        let z = tape.constant(params.consensus.clone())?;
        let w = tape.constant(clf.weights.clone())?;
        let b = tape.constant(clf.bias.clone())?;
        let t = tape.constant(targets.clone())?;
        let loss = build_supervised_loss(&mut tape, z, w, b, t, *count)?;
        Ok(Some(tape.scalar(loss)))
    }

    pub fn embedding(&self, params: &ModelParameters, source: EmbeddingSource) -> Result<DenseMatrix> {
        self.check_parameters(params)?;
        match source {
            EmbeddingSource::Consensus => Ok(params.consensus.clone()),
            EmbeddingSource::Aggregated => {
                Ok(self.forward(params, &self.identity_corruption())?.aggregated)
            }
        }
    }
}
