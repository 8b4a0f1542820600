//! Parameter initialization, Adam and the early-stopped training loop.

mod adam;
mod fit;
mod init;

pub use adam::{Adam, AdamSettings};
pub use fit::{fit, model_dims, write_log, EpochRecord, TrainConfig, TrainOutcome, DIVERGENCE_FLOOR};
pub use init::{initialize_parameters, xavier_bound, ModelDims};
