//! The multiplex infomax model: relation encoders, readout, the bilinear
//! discriminator, aggregation, consensus regularization and the joint
//! objective.

mod config;
mod objective;
pub mod ops;
mod params;

pub use config::{Aggregation, Corruption, ModelConfig, Readout};
pub use objective::{
    CorruptionDraw, DmgiModel, EmbeddingSource, ForwardOutputs, ObjectiveTerms,
};
pub use ops::{
    aggregate, consensus_regularizer, discriminate, encode_relation, readout,
    relation_infomax_loss, semi_supervised_loss,
};
pub use params::{Classifier, ModelParameters};
