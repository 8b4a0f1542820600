//! Unsupervised node embeddings for attributed multiplex networks.
//!
//! Each relation type gets its own one-layer graph convolutional encoder,
//! trained to tell true (node, graph summary) pairs from pairs built on
//! corrupted attributes. A shared bilinear discriminator scores every
//! relation, and a consensus embedding is pulled toward the aggregate of the
//! true relation embeddings and pushed away from the corrupted aggregate.
//!
//! The crate is organised bottom-up:
//!
//! * [`tensor`]: dense/sparse matrices and reverse-mode differentiation
//! * [`graph`]: the network data model, normalization, corruption, synthetic
//!   generation and the on-disk directory format
//! * [`model`]: encoders, readout, discriminator, losses and the joint objective
//! * [`train`]: initialization, Adam and the early-stopped training loop
//! * [`eval`]: clustering NMI, similarity search and classification F1

pub mod error;
pub mod eval;
pub mod graph;
pub mod model;
pub mod tensor;
pub mod train;

pub use error::{Error, Result};

pub use graph::{MultiplexNetwork, Split};
pub use eval::EvalReport;
pub use train::{fit, TrainConfig};
pub use model::{DmgiModel, ModelConfig, ModelParameters};

pub use tensor::{DenseMatrix, SparseMatrix};

