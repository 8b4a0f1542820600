use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Graph-level summary of a relation's patch embeddings.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Readout {
    /// `σ(mean over nodes)`
    #[default]
    Average,
    /// `σ(columnwise max over nodes)`
    Maxpool,
}

/// How relation embeddings are combined into one matrix.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Aggregation {
    #[default]
    Average,
    /// Per-node softmax over relations with one learned feature vector per
    /// relation.
    Attention,
}

/// How negative patches are produced.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Corruption {
    /// Shuffle attribute rows, keep the graph.
    #[default]
    Attributes,
    /// Keep attributes, relabel the nodes of the normalized adjacency.
    Adjacency,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ModelConfig {
    /// Weight `w` of the injected self-connections.
    pub self_weight: f64,
    /// Consensus regularization coefficient.
    pub alpha: f64,
    /// Squared-L2 coefficient on the parameters.
    pub beta: f64,
    /// Semi-supervised cross-entropy coefficient.
    pub gamma: f64,
    pub readout: Readout,
    pub aggregation: Aggregation,
    pub corruption: Corruption,
    pub semi_supervised: bool,
    /// One scoring matrix per relation instead of a shared one.
    pub untied_discriminator: bool,
    /// Keep the term pushing the consensus away from corrupted embeddings.
    pub consensus_negative: bool,
    /// Include attention vectors and classifier weights in the L2 term, not
    /// only encoders, scoring and consensus.
    pub regularize_all: bool,
}

impl Default for ModelConfig {
    fn default() -> Self {
        Self {
            self_weight: 3.0,
            alpha: 0.001,
            beta: 0.001,
            gamma: 0.001,
            readout: Readout::Average,
            aggregation: Aggregation::Average,
            corruption: Corruption::Attributes,
            semi_supervised: false,
            untied_discriminator: false,
            consensus_negative: true,
            regularize_all: true,
        }
    }
}

impl ModelConfig {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("self_weight", self.self_weight),
        ] {
            if !(v.is_finite() && v >= 0.0) {
                return Err(Error::contract(format!(
                    "{name} must be finite and nonnegative, got {v}"
                )));
            }
        }
        Ok(())
    }
}
