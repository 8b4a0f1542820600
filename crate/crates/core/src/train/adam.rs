use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::ModelParameters;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct AdamSettings {
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl Default for AdamSettings {
    fn default() -> Self {
        Self {
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Adam with bias correction. Moments mirror the parameter layout.
#[derive(Debug, Clone)]
pub struct Adam {
    settings: AdamSettings,
    first_moment: ModelParameters,
    second_moment: ModelParameters,
    step: u64,
}

impl Adam {
    pub fn new(params: &ModelParameters, settings: AdamSettings) -> Self {
        Self {
            settings,
            first_moment: params.zeros_like(),
            second_moment: params.zeros_like(),
            step: 0,
        }
    }

    pub fn steps_taken(&self) -> u64 {
        self.step
    }

    pub fn first_moment(&self) -> &ModelParameters {
        &self.first_moment
    }

    pub fn second_moment(&self) -> &ModelParameters {
        &self.second_moment
    }

    /// Applies one update in place. A non-finite gradient leaves `params`
    /// untouched and reports divergence at the step that would have run.
    pub fn update(
        &mut self,
        params: &mut ModelParameters,
        grads: &ModelParameters,
        learning_rate: f64,
    ) -> Result<()> {
        let step = self.step + 1;
        let grad_tensors = grads.tensors();
        let param_count = params.tensors().len();
        if grad_tensors.len() != param_count
            || grad_tensors
                .iter()
                .zip(params.tensors())
                .any(|(g, p)| g.shape() != p.shape())
        {
            return Err(Error::shape("adam", "gradient layout differs from parameters"));
        }
        if !grads.is_finite() {
            return Err(Error::Divergence {
                epoch: step as usize,
                reason: "non-finite gradient".into(),
            });
        }
        self.step = step;
        let AdamSettings {
            beta1,
            beta2,
            epsilon,
        } = self.settings;
        let bias1 = 1.0 - beta1.powi(step as i32);
        let bias2 = 1.0 - beta2.powi(step as i32);

        let params = params.tensors_mut();
        let ms = self.first_moment.tensors_mut();
        let vs = self.second_moment.tensors_mut();
        for (((p, m), v), g) in params.into_iter().zip(ms).zip(vs).zip(grad_tensors) {
            let p = p.as_mut_slice();
            let m = m.as_mut_slice();
            let v = v.as_mut_slice();
            for k in 0..p.len() {
                let gk = g.as_slice()[k];
                m[k] = beta1 * m[k] + (1.0 - beta1) * gk;
                v[k] = beta2 * v[k] + (1.0 - beta2) * gk * gk;
                let m_hat = m[k] / bias1;
                let v_hat = v[k] / bias2;
                p[k] -= learning_rate * m_hat / (v_hat.sqrt() + epsilon);
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DenseMatrix;

    fn scalar_params(x: f64) -> ModelParameters {
        ModelParameters {
            encoders: vec![],
            scoring: vec![],
            consensus: DenseMatrix::filled(1, 1, x),
            attention: vec![],
            classifier: None,
        }
    }

    #[test]
    fn zero_gradient_leaves_parameters() {
        let mut p = scalar_params(1.5);
        let mut adam = Adam::new(&p, AdamSettings::default());
        adam.update(&mut p, &scalar_params(0.0), 0.1).unwrap();
        assert_eq!(p.consensus.get(0, 0), 1.5);
    }

    #[test]
    fn first_step_closed_form() {
        // m̂ = g, v̂ = g², so the step is lr·g/(|g| + ε)
        for g in [3.0, -0.02, 1e-5] {
            let mut p = scalar_params(0.0);
            let mut adam = Adam::new(&p, AdamSettings::default());
            adam.update(&mut p, &scalar_params(g), 0.01).unwrap();
            let expected = -0.01 * g / (g.abs() + 1e-8);
            assert!((p.consensus.get(0, 0) - expected).abs() < 1e-15, "g = {g}");
        }
    }

    #[test]
    fn quadratic_matches_scalar_oracle() {
        // independent scalar Adam on f(x) = x², x₀ = 1, lr = 0.1
        let (b1, b2, eps, lr) = (0.9f64, 0.999f64, 1e-8, 0.1);
        let (mut x, mut m, mut v) = (1.0f64, 0.0f64, 0.0f64);
        let mut oracle = Vec::new();
        for t in 1..=10 {
            let g = 2.0 * x;
            m = b1 * m + (1.0 - b1) * g;
            v = b2 * v + (1.0 - b2) * g * g;
            let mh = m / (1.0 - b1.powi(t));
            let vh = v / (1.0 - b2.powi(t));
            x -= lr * mh / (vh.sqrt() + eps);
            oracle.push(x);
        }

        let mut p = scalar_params(1.0);
        let mut adam = Adam::new(&p, AdamSettings::default());
        for expected in oracle {
            let g = scalar_params(2.0 * p.consensus.get(0, 0));
            adam.update(&mut p, &g, lr).unwrap();
            assert!((p.consensus.get(0, 0) - expected).abs() < 1e-12);
        }
        assert_eq!(adam.steps_taken(), 10);
    }

    #[test]
    fn non_finite_gradient_is_divergence() {
        let mut p = scalar_params(1.0);
        let mut adam = Adam::new(&p, AdamSettings::default());
        // DenseMatrix cannot be built with NaN through the tape, but a raw
        // matrix can carry one.
        let g = scalar_params(f64::NAN);
        let err = adam.update(&mut p, &g, 0.1).unwrap_err();
        assert!(matches!(err, Error::Divergence { epoch: 1, .. }));
        assert_eq!(p.consensus.get(0, 0), 1.0);
    }
}
