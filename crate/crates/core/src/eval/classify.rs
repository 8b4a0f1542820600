use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::metrics::{f1_scores, F1Scores};
use crate::tensor::DenseMatrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct LogRegSettings {
    /// Penalty on the weights (not the bias): `l2/2 · ‖W‖²`.
    pub l2: f64,
    pub learning_rate: f64,
    pub tolerance: f64,
    pub max_iterations: usize,
}

impl Default for LogRegSettings {
    fn default() -> Self {
        Self {
            l2: 1e-4,
            learning_rate: 0.1,
            tolerance: 1e-6,
            max_iterations: 5000,
        }
    }
}

/// Softmax regression weights `d×c` and bias.
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticRegression {
    pub weights: DenseMatrix,
    pub bias: Vec<f64>,
    pub iterations: usize,
}

fn softmax_in_place(row: &mut [f64]) {
    let max = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for v in row.iter_mut() {
        *v = (*v - max).exp();
        sum += *v;
    }
    for v in row.iter_mut() {
        *v /= sum;
    }
}

impl LogisticRegression {
    fn scores(&self, x: &[f64]) -> Vec<f64> {
        let c = self.bias.len();
        let mut s = self.bias.clone();
        for (k, &xk) in x.iter().enumerate() {
            let w = self.weights.row(k);
            for j in 0..c {
                s[j] += xk * w[j];
            }
        }
        s
    }

    pub fn predict(&self, x: &[f64]) -> usize {
        let s = self.scores(x);
        (0..s.len()).fold(0, |best, j| if s[j] > s[best] { j } else { best })
    }

    /// Mean cross entropy plus the weight penalty, and its gradient.
    fn loss_and_gradient(
        &self,
        z: &DenseMatrix,
        rows: &[usize],
        targets: &[usize],
        l2: f64,
    ) -> (f64, DenseMatrix, Vec<f64>) {
        let (d, c) = self.weights.shape();
        let m = rows.len() as f64;
        let mut gw = DenseMatrix::zeros(d, c);
        let mut gb = vec![0.0; c];
        let mut loss = 0.0;
        for (&i, &t) in rows.iter().zip(targets) {
            let x = z.row(i);
            let mut p = self.scores(x);
            softmax_in_place(&mut p);
            loss -= p[t].max(f64::MIN_POSITIVE).ln();
            p[t] -= 1.0;
            for (k, &xk) in x.iter().enumerate() {
                let g = gw.row_mut(k);
                for j in 0..c {
                    g[j] += xk * p[j];
                }
            }
            for j in 0..c {
                gb[j] += p[j];
            }
        }
        loss /= m;
        gw.as_mut_slice().iter_mut().for_each(|g| *g /= m);
        gb.iter_mut().for_each(|g| *g /= m);
        gw.add_scaled(&self.weights, l2);
        loss += 0.5 * l2 * self.weights.squared_norm();
        (loss, gw, gb)
    }

    /// Full-batch gradient descent from zero until the gradient norm drops
    /// below the tolerance. A step that raises the loss is retried at half
    /// the rate, so poorly scaled embeddings still converge.
    pub fn fit(
        z: &DenseMatrix,
        rows: &[usize],
        targets: &[usize],
        classes: usize,
        settings: &LogRegSettings,
    ) -> Result<Self> {
        if rows.is_empty() {
            return Err(Error::contract("logistic regression needs training nodes"));
        }
        if rows.len() != targets.len() {
            return Err(Error::shape("logistic_regression", "rows and targets differ in length"));
        }
        if let Some(&t) = targets.iter().find(|&&t| t >= classes) {
            return Err(Error::contract(format!("target {t} outside {classes} classes")));
        }
        let mut model = Self {
            weights: DenseMatrix::zeros(z.cols(), classes),
            bias: vec![0.0; classes],
            iterations: 0,
        };
        let mut lr = settings.learning_rate;
        let (mut loss, mut gw, mut gb) = model.loss_and_gradient(z, rows, targets, settings.l2);
        while model.iterations < settings.max_iterations {
            let gnorm = (gw.squared_norm() + gb.iter().map(|g| g * g).sum::<f64>()).sqrt();
            if gnorm < settings.tolerance {
                break;
            }
            let mut trial = model.clone();
            trial.weights.add_scaled(&gw, -lr);
            for (b, g) in trial.bias.iter_mut().zip(&gb) {
                *b -= lr * g;
            }
            let (tl, tgw, tgb) = trial.loss_and_gradient(z, rows, targets, settings.l2);
            if tl > loss && lr > 1e-12 {
                lr *= 0.5;
                continue;
            }
            model = trial;
            (loss, gw, gb) = (tl, tgw, tgb);
            model.iterations += 1;
        }
        Ok(model)
    }
}

/// Trains on `train` nodes and scores predictions on `test` nodes.
pub fn logistic_regression_classify(
    z: &DenseMatrix,
    labels: &[Option<usize>],
    classes: usize,
    train: &[usize],
    test: &[usize],
    settings: &LogRegSettings,
) -> Result<F1Scores> {
    if test.is_empty() {
        return Err(Error::contract("classification needs test nodes"));
    }
    let label_of = |i: usize| {
        labels
            .get(i)
            .copied()
            .flatten()
            .ok_or_else(|| Error::contract(format!("node {i} is unlabeled")))
    };
    let targets = train.iter().map(|&i| label_of(i)).collect::<Result<Vec<_>>>()?;
    let truth = test.iter().map(|&i| label_of(i)).collect::<Result<Vec<_>>>()?;
    let model = LogisticRegression::fit(z, train, &targets, classes, settings)?;
    let predicted: Vec<usize> = test.iter().map(|&i| model.predict(z.row(i))).collect();
    f1_scores(&truth, &predicted)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn separable_line() {
        let z = DenseMatrix::from_fn(10, 1, |i, _| i as f64 - 4.5);
        let labels: Vec<Option<usize>> = (0..10).map(|i| Some(usize::from(i >= 5))).collect();
        let train = [0, 2, 4, 6, 8];
        let test = [1, 3, 5, 7, 9];
        let s = logistic_regression_classify(&z, &labels, 2, &train, &test, &LogRegSettings::default())
            .unwrap();
        assert_eq!((s.macro_f1, s.micro_f1), (1.0, 1.0));
    }

    #[test]
    fn gradient_descent_reaches_tolerance() {
        let z = DenseMatrix::from_rows(&[[1.0, 0.2], [0.8, -0.1], [-0.9, 0.3], [-1.1, -0.2], [0.1, 1.0]])
            .unwrap();
        let rows = [0, 1, 2, 3, 4];
        let targets = [0, 0, 1, 1, 2];
        let settings = LogRegSettings {
            l2: 0.1,
            ..LogRegSettings::default()
        };
        let m = LogisticRegression::fit(&z, &rows, &targets, 3, &settings).unwrap();
        assert!(m.iterations < settings.max_iterations);
        let (_, gw, gb) = m.loss_and_gradient(&z, &rows, &targets, settings.l2);
        let norm = (gw.squared_norm() + gb.iter().map(|g| g * g).sum::<f64>()).sqrt();
        assert!(norm < 1e-6);
    }

    #[test]
    fn class_missing_from_train_scores_zero() {
        let z = DenseMatrix::from_fn(6, 1, |i, _| i as f64);
        let labels = vec![Some(0), Some(0), Some(0), Some(1), Some(1), Some(2)];
        let s = logistic_regression_classify(&z, &labels, 3, &[0, 1, 3, 4], &[2, 5], &LogRegSettings::default())
            .unwrap();
        // node 5 can never be predicted as class 2
        assert!(s.macro_f1 < 1.0);
    }
}
