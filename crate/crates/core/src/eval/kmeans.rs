use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

pub const DEFAULT_RESTARTS: usize = 10;
pub const MAX_ITERATIONS: usize = 300;
pub const SHIFT_TOLERANCE: f64 = 1e-8;

/// One k-means++ seeded Lloyd run.
#[derive(Debug, Clone, PartialEq)]
pub struct KMeansRun {
    pub assignments: Vec<usize>,
    pub centroids: DenseMatrix,
    pub inertia: f64,
    /// Inertia after each assignment step, in order.
    pub inertia_history: Vec<f64>,
}

fn squared_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

/// Nearest centroid per point (lowest index on ties) and total inertia.
fn assign(points: &DenseMatrix, centroids: &DenseMatrix) -> (Vec<usize>, Vec<f64>, f64) {
    let mut labels = Vec::with_capacity(points.rows());
    let mut dists = Vec::with_capacity(points.rows());
    for p in points.row_iter() {
        let (best, d) = centroids
            .row_iter()
            .map(|c| squared_distance(p, c))
            .enumerate()
            .fold((0, f64::INFINITY), |acc, (j, d)| if d < acc.1 { (j, d) } else { acc });
        labels.push(best);
        dists.push(d);
    }
    let inertia = dists.iter().sum();
    (labels, dists, inertia)
}

fn plus_plus_init<R: Rng + ?Sized>(points: &DenseMatrix, k: usize, rng: &mut R) -> DenseMatrix {
    let n = points.rows();
    let mut centroids = DenseMatrix::zeros(k, points.cols());
    let first = rng.gen_range(0..n);
    centroids.row_mut(0).copy_from_slice(points.row(first));
    let mut nearest: Vec<f64> = points
        .row_iter()
        .map(|p| squared_distance(p, points.row(first)))
        .collect();
    for c in 1..k {
        let total: f64 = nearest.iter().sum();
        let pick = if total > 0.0 {
            let target = rng.gen::<f64>() * total;
            let mut acc = 0.0;
            let mut chosen = n - 1;
            for (i, d) in nearest.iter().enumerate() {
                acc += d;
                if acc > target && *d > 0.0 {
                    chosen = i;
                    break;
                }
            }
            chosen
        } else {
            rng.gen_range(0..n)
        };
        centroids.row_mut(c).copy_from_slice(points.row(pick));
        for (i, p) in points.row_iter().enumerate() {
            nearest[i] = nearest[i].min(squared_distance(p, points.row(pick)));
        }
    }
    centroids
}

fn check(points: &DenseMatrix, k: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::contract("k-means needs K >= 1"));
    }
    if points.rows() < k {
        return Err(Error::contract(format!(
            "k-means needs at least K = {k} points, got {}",
            points.rows()
        )));
    }
    if !points.is_finite() {
        return Err(Error::NumericDomain { op: "kmeans" });
    }
    Ok(())
}

/// A single run: k-means++ seeding, then Lloyd iterations until every
/// centroid moves less than the tolerance or the iteration cap is hit.
/// An emptied cluster is re-seeded at the point farthest from its centroid.
pub fn kmeans_run<R: Rng + ?Sized>(points: &DenseMatrix, k: usize, rng: &mut R) -> Result<KMeansRun> {
    check(points, k)?;
    let d = points.cols();
    let mut centroids = plus_plus_init(points, k, rng);
    let mut history = Vec::new();
    for _ in 0..MAX_ITERATIONS {
        let (mut labels, mut dists, inertia) = assign(points, &centroids);
        history.push(inertia);

        let mut sums = DenseMatrix::zeros(k, d);
        let mut counts = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            counts[c] += 1;
            for (s, x) in sums.row_mut(c).iter_mut().zip(points.row(i)) {
                *s += x;
            }
        }
        for c in 0..k {
            if counts[c] == 0 {
                let far = dists
                    .iter()
                    .enumerate()
                    .fold((0, f64::NEG_INFINITY), |acc, (i, &d)| if d > acc.1 { (i, d) } else { acc })
                    .0;
                let old = labels[far];
                counts[old] -= 1;
                for (s, x) in sums.row_mut(old).iter_mut().zip(points.row(far)) {
                    *s -= x;
                }
                labels[far] = c;
                dists[far] = 0.0;
                counts[c] = 1;
                sums.row_mut(c).copy_from_slice(points.row(far));
            }
        }

        let mut shift: f64 = 0.0;
        for c in 0..k {
            let inv = 1.0 / counts[c] as f64;
            let next: Vec<f64> = sums.row(c).iter().map(|s| s * inv).collect();
            shift = shift.max(squared_distance(&next, centroids.row(c)).sqrt());
            centroids.row_mut(c).copy_from_slice(&next);
        }
        if shift < SHIFT_TOLERANCE {
            break;
        }
    }
    let (assignments, _, inertia) = assign(points, &centroids);
    history.push(inertia);
    Ok(KMeansRun {
        assignments,
        centroids,
        inertia,
        inertia_history: history,
    })
}

/// Best-inertia run over `restarts` runs drawn from one seeded stream. The
/// earliest run wins ties.
pub fn kmeans_best(points: &DenseMatrix, k: usize, restarts: usize, seed: u64) -> Result<KMeansRun> {
    check(points, k)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut best: Option<KMeansRun> = None;
    for _ in 0..restarts.max(1) {
        let run = kmeans_run(points, k, &mut rng)?;
        if best.as_ref().is_none_or(|b| run.inertia < b.inertia) {
            best = Some(run);
        }
    }
    Ok(best.expect("at least one restart"))
}

pub fn kmeans_cluster(points: &DenseMatrix, k: usize, restarts: usize, seed: u64) -> Result<Vec<usize>> {
    Ok(kmeans_best(points, k, restarts, seed)?.assignments)
}

/// Sum of squared distances from each point to the mean of its cluster.
pub fn partition_inertia(points: &DenseMatrix, assignments: &[usize], k: usize) -> f64 {
    let d = points.cols();
    let mut sums = DenseMatrix::zeros(k, d);
    let mut counts = vec![0usize; k];
    for (i, &c) in assignments.iter().enumerate() {
        counts[c] += 1;
        for (s, x) in sums.row_mut(c).iter_mut().zip(points.row(i)) {
            *s += x;
        }
    }
    assignments
        .iter()
        .enumerate()
        .map(|(i, &c)| {
            let mean: Vec<f64> = sums.row(c).iter().map(|s| s / counts[c] as f64).collect();
            squared_distance(points.row(i), &mean)
        })
        .sum()
}
