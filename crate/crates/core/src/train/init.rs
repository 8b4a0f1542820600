use rand::Rng;

use crate::model::{Aggregation, Classifier, ModelConfig, ModelParameters};
use crate::tensor::DenseMatrix;

/// Sizes needed to lay out the parameters.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ModelDims {
    pub nodes: usize,
    pub attributes: usize,
    pub relations: usize,
    pub embedding: usize,
    /// Class count of the classifier head; `None` without semi-supervision.
    pub classes: Option<usize>,
}

/// Half-width of the Xavier-uniform interval.
pub fn xavier_bound(fan_in: usize, fan_out: usize) -> f64 {
    (6.0 / (fan_in + fan_out) as f64).sqrt()
}

fn xavier<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize, fan_in: usize, fan_out: usize) -> DenseMatrix {
    let b = xavier_bound(fan_in, fan_out);
    DenseMatrix::from_fn(rows, cols, |_, _| rng.gen_range(-b..b))
}

/// Xavier-uniform initialization in a fixed draw order: encoders, scoring,
/// consensus (fan-in n), attention (fan-in 1), classifier weights. The
/// classifier bias starts at zero.
pub fn initialize_parameters<R: Rng + ?Sized>(
    dims: ModelDims,
    config: &ModelConfig,
    rng: &mut R,
) -> ModelParameters {
    let ModelDims {
        nodes: n,
        attributes: f,
        relations: r,
        embedding: d,
        classes,
    } = dims;
    let encoders = (0..r).map(|_| xavier(rng, f, d, f, d)).collect();
    let scoring_count = if config.untied_discriminator { r } else { 1 };
    let scoring = (0..scoring_count).map(|_| xavier(rng, d, d, d, d)).collect();
    let consensus = xavier(rng, n, d, n, d);
    let attention = match config.aggregation {
        Aggregation::Attention => (0..r).map(|_| xavier(rng, 1, d, 1, d)).collect(),
        Aggregation::Average => Vec::new(),
    };
    let classifier = classes.map(|c| Classifier {
        weights: xavier(rng, d, c, d, c),
        bias: DenseMatrix::zeros(1, c),
    });
    ModelParameters {
        encoders,
        scoring,
        consensus,
        attention,
        classifier,
    }
}
