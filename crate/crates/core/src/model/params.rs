use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

/// Single fully connected layer mapping embeddings to class logits.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Classifier {
    /// d×c
    pub weights: DenseMatrix,
    /// 1×c
    pub bias: DenseMatrix,
}

/// Every trainable matrix of the model.
///
/// `scoring` holds one d×d matrix when the discriminator is shared across
/// relations and one per relation otherwise. `attention` is empty unless
/// attention aggregation is enabled; each entry is a 1×d row.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ModelParameters {
    pub encoders: Vec<DenseMatrix>,
    pub scoring: Vec<DenseMatrix>,
    pub consensus: DenseMatrix,
    pub attention: Vec<DenseMatrix>,
    pub classifier: Option<Classifier>,
}

impl ModelParameters {
    /// Fixed traversal order: encoders, scoring, consensus, attention,
    /// classifier weights, classifier bias.
    pub fn tensors(&self) -> Vec<&DenseMatrix> {
        let mut out: Vec<&DenseMatrix> = Vec::new();
        out.extend(&self.encoders);
        out.extend(&self.scoring);
        out.push(&self.consensus);
        out.extend(&self.attention);
        if let Some(c) = &self.classifier {
            out.push(&c.weights);
            out.push(&c.bias);
        }
        out
    }

    pub fn tensors_mut(&mut self) -> Vec<&mut DenseMatrix> {
        let mut out: Vec<&mut DenseMatrix> = Vec::new();
        out.extend(self.encoders.iter_mut());
        out.extend(self.scoring.iter_mut());
        out.push(&mut self.consensus);
        out.extend(self.attention.iter_mut());
        if let Some(c) = &mut self.classifier {
            out.push(&mut c.weights);
            out.push(&mut c.bias);
        }
        out
    }

    pub fn to_tensors(&self) -> Vec<DenseMatrix> {
        self.tensors().into_iter().cloned().collect()
    }

    /// Same layout as `self`, with values taken from `tensors` in
    /// [`ModelParameters::tensors`] order.
    pub fn with_tensors(&self, tensors: &[DenseMatrix]) -> Result<Self> {
        let mut out = self.clone();
        let slots = out.tensors_mut();
        if slots.len() != tensors.len() {
            return Err(Error::shape(
                "with_tensors",
                format!("{} tensors for {} parameters", tensors.len(), slots.len()),
            ));
        }
        for (slot, t) in slots.into_iter().zip(tensors) {
            if slot.shape() != t.shape() {
                return Err(Error::shape(
                    "with_tensors",
                    format!("{:?} vs {:?}", slot.shape(), t.shape()),
                ));
            }
            *slot = t.clone();
        }
        Ok(out)
    }

    pub fn zeros_like(&self) -> Self {
        let mut out = self.clone();
        for t in out.tensors_mut() {
            *t = DenseMatrix::zeros(t.rows(), t.cols());
        }
        out
    }

    /// Total number of scalar parameters.
    pub fn count(&self) -> usize {
        self.tensors().iter().map(|t| t.len()).sum()
    }

    pub fn is_finite(&self) -> bool {
        self.tensors().iter().all(|t| t.is_finite())
    }
}
