use std::io::Write;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::MultiplexNetwork;
use crate::model::{DmgiModel, ModelConfig, ModelParameters};
use crate::train::adam::{Adam, AdamSettings};
use crate::train::init::{initialize_parameters, ModelDims};

/// Objectives below this are treated as divergence of the unbounded
/// consensus push term.
pub const DIVERGENCE_FLOOR: f64 = -1e6;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TrainConfig {
    /// Embedding dimension `d`.
    pub dim: usize,
    pub model: ModelConfig,
    pub learning_rate: f64,
    pub max_epochs: usize,
    /// Epochs without improvement before stopping.
    pub patience: usize,
    pub seed: u64,
    pub adam: AdamSettings,
}

impl Default for TrainConfig {
    fn default() -> Self {
        Self {
            dim: 64,
            model: ModelConfig::default(),
            learning_rate: 5e-4,
            max_epochs: 2000,
            patience: 20,
            seed: 0,
            adam: AdamSettings::default(),
        }
    }
}

impl TrainConfig {
    pub fn validate(&self) -> Result<()> {
        if self.dim == 0 {
            return Err(Error::contract("embedding dimension must be at least 1"));
        }
        if self.patience == 0 {
            return Err(Error::contract("patience must be at least 1"));
        }
        if !(self.learning_rate > 0.0 && self.learning_rate.is_finite()) {
            return Err(Error::contract("learning rate must be positive"));
        }
        self.model.validate()
    }
}

/// One line of the training log.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EpochRecord {
    pub epoch: usize,
    pub objective: f64,
    pub relation_losses: Vec<f64>,
    pub consensus: f64,
    pub l2: f64,
    pub supervised: Option<f64>,
    /// Validation cross entropy, the stopping criterion in semi-supervised
    /// mode.
    pub validation: Option<f64>,
    pub mean_attention: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct TrainOutcome {
    /// Parameters at the best stopping criterion seen.
    pub params: ModelParameters,
    pub log: Vec<EpochRecord>,
    /// Epoch whose parameters were returned; 0 means initialization.
    pub best_epoch: usize,
}

pub fn model_dims(network: &MultiplexNetwork, model: &DmgiModel<'_>, dim: usize) -> ModelDims {
    ModelDims {
        nodes: network.n(),
        attributes: network.attribute_dim(),
        relations: network.relations().len(),
        embedding: dim,
        classes: model.classifier_classes(),
    }
}

/// Trains the model with full-batch Adam and early stopping.
///
/// The seed drives a single random stream: parameter initialization first,
/// then one corruption draw per relation each epoch. Each epoch evaluates the
/// objective at the current parameters, records it, and takes one Adam step.
/// Training stops after `max_epochs` or once `patience` epochs pass without
/// improving the stopping criterion (the objective, or the validation cross
/// entropy in semi-supervised mode when validation nodes exist).
pub fn fit(network: &MultiplexNetwork, config: &TrainConfig) -> Result<TrainOutcome> {
    config.validate()?;
    let model = DmgiModel::new(network, config.model.clone())?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let mut params = initialize_parameters(
        model_dims(network, &model, config.dim),
        &config.model,
        &mut rng,
    );
    let mut adam = Adam::new(&params, config.adam);

    let mut log = Vec::new();
    let mut best: Option<(f64, usize, ModelParameters)> = None;
    let mut since_improvement = 0;

    for epoch in 1..=config.max_epochs {
        let draw = model.draw_corruption(&mut rng);
        let (terms, grads) = model
            .objective_and_gradients(&params, &draw)
            .map_err(|e| match e {
                Error::NumericDomain { op } => Error::Divergence {
                    epoch,
                    reason: format!("non-finite value in {op}"),
                },
                other => other,
            })?;
        if !terms.total.is_finite() || terms.total < DIVERGENCE_FLOOR {
            return Err(Error::Divergence {
                epoch,
                reason: format!("objective {}", terms.total),
            });
        }
        let validation = model.validation_loss(&params)?;
        let criterion = validation.unwrap_or(terms.total);

        log.push(EpochRecord {
            epoch,
            objective: terms.total,
            relation_losses: terms.relation_losses,
            consensus: terms.consensus,
            l2: terms.l2,
            supervised: terms.supervised,
            validation,
            mean_attention: terms.mean_attention,
        });

        if best.as_ref().is_none_or(|(b, _, _)| criterion < *b) {
            best = Some((criterion, epoch, params.clone()));
            since_improvement = 0;
        } else {
            since_improvement += 1;
            if since_improvement >= config.patience {
                log::debug!("early stop at epoch {epoch}");
                break;
            }
        }

        adam.update(&mut params, &grads, config.learning_rate)
            .map_err(|e| match e {
                Error::Divergence { reason, .. } => Error::Divergence { epoch, reason },
                other => other,
            })?;
    }

    let (params, best_epoch) = match best {
        Some((_, epoch, p)) => (p, epoch),
        None => (params, 0),
    };
    Ok(TrainOutcome {
        params,
        log,
        best_epoch,
    })
}

/// Writes the log as JSON lines, one object per epoch.
pub fn write_log<W: Write>(log: &[EpochRecord], mut out: W) -> std::io::Result<()> {
    for rec in log {
        serde_json::to_writer(&mut out, rec)?;
        out.write_all(b"\n")?;
    }
    Ok(())
}
