use crate::tensor::DenseMatrix;

/// Central-difference gradient estimate of `loss` at `params`.
///
/// Every coordinate of every matrix is perturbed by `±step` in turn; the
/// returned matrices mirror the shapes of `params`.
pub fn finite_difference<F>(params: &[DenseMatrix], step: f64, mut loss: F) -> Vec<DenseMatrix>
where
    F: FnMut(&[DenseMatrix]) -> f64,
{
    assert!(step > 0.0, "finite-difference step must be positive");
    let mut work = params.to_vec();
    let mut out = Vec::with_capacity(params.len());
    for p in 0..params.len() {
        let mut grad = DenseMatrix::zeros(params[p].rows(), params[p].cols());
        for k in 0..params[p].len() {
            let original = params[p].as_slice()[k];
            work[p].as_mut_slice()[k] = original + step;
            let plus = loss(&work);
            work[p].as_mut_slice()[k] = original - step;
            let minus = loss(&work);
            work[p].as_mut_slice()[k] = original;
            grad.as_mut_slice()[k] = (plus - minus) / (2.0 * step);
        }
        out.push(grad);
    }
    out
}

/// `|a - b| / max(|a|, |b|, floor)`. The floor keeps coordinates whose true
/// gradient is essentially zero from being judged on round-off alone.
pub fn relative_error(a: f64, b: f64, floor: f64) -> f64 {
    (a - b).abs() / a.abs().max(b.abs()).max(floor)
}
