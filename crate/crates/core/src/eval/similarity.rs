use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

pub const DEFAULT_K: usize = 5;

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

/// Cosine similarity, or -inf when either row has zero norm.
pub fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let (na, nb) = (norm(a), norm(b));
    if na == 0.0 || nb == 0.0 {
        return f64::NEG_INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| x * y).sum::<f64>() / (na * nb)
}

/// The `k` candidates most similar to `query`, self excluded, ties broken by
/// ascending node index.
pub fn top_k(z: &DenseMatrix, query: usize, candidates: &[usize], k: usize) -> Vec<usize> {
    let q = z.row(query);
    let mut scored: Vec<(f64, usize)> = candidates
        .iter()
        .filter(|&&c| c != query)
        .map(|&c| (cosine(q, z.row(c)), c))
        .collect();
    scored.sort_by(|a, b| {
        b.0.partial_cmp(&a.0)
            .unwrap_or(Ordering::Equal)
            .then(a.1.cmp(&b.1))
    });
    scored.into_iter().take(k).map(|(_, c)| c).collect()
}

/// Mean same-class fraction among each query's top `k` cosine neighbors,
/// drawn from all labeled nodes.
pub fn similarity_at_k(
    z: &DenseMatrix,
    labels: &[Option<usize>],
    queries: &[usize],
    k: usize,
) -> Result<f64> {
    if labels.len() != z.rows() {
        return Err(Error::shape(
            "similarity_at_k",
            format!("{} labels for {} embeddings", labels.len(), z.rows()),
        ));
    }
    if k == 0 || k >= z.rows() {
        return Err(Error::contract(format!(
            "k must be in 1..n, got k = {k} with n = {}",
            z.rows()
        )));
    }
    if queries.is_empty() {
        return Err(Error::contract("similarity_at_k needs at least one query"));
    }
    let pool: Vec<usize> = (0..labels.len()).filter(|&i| labels[i].is_some()).collect();
    if pool.len() <= k {
        return Err(Error::contract(format!(
            "k = {k} needs more than k labeled nodes, got {}",
            pool.len()
        )));
    }
    let mut total = 0.0;
    for &q in queries {
        let class = labels
            .get(q)
            .copied()
            .flatten()
            .ok_or_else(|| Error::contract(format!("query node {q} is unlabeled")))?;
        let hits = top_k(z, q, &pool, k)
            .into_iter()
            .filter(|&c| labels[c] == Some(class))
            .count();
        total += hits as f64 / k as f64;
    }
    Ok(total / queries.len() as f64)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_hot_embeddings_are_perfect() {
        let labels: Vec<Option<usize>> = (0..18).map(|i| Some(i % 3)).collect();
        let z = DenseMatrix::from_fn(18, 3, |i, j| if i % 3 == j { 1.0 } else { 0.0 });
        let queries: Vec<usize> = (0..18).collect();
        assert_eq!(similarity_at_k(&z, &labels, &queries, 5).unwrap(), 1.0);
    }

    #[test]
    fn identical_embeddings_follow_index_order() {
        // every tie: each query takes the 5 lowest other indices
        let labels: Vec<Option<usize>> = (0..12).map(|i| Some(i % 2)).collect();
        let z = DenseMatrix::filled(12, 2, 1.0);
        let queries: Vec<usize> = (0..12).collect();
        let mut expected = 0.0;
        for q in 0..12usize {
            let picks: Vec<usize> = (0..12).filter(|&c| c != q).take(5).collect();
            expected += picks.iter().filter(|&&c| c % 2 == q % 2).count() as f64 / 5.0;
        }
        expected /= 12.0;
        let got = similarity_at_k(&z, &labels, &queries, 5).unwrap();
        assert!((got - expected).abs() < 1e-15);
    }

    #[test]
    fn handcrafted_six_nodes() {
        let z = DenseMatrix::from_rows(&[
            [1.0, 0.0],
            [0.9, 0.1],
            [0.0, 1.0],
            [0.1, 0.9],
            [0.7, 0.7],
            [-1.0, 0.0],
        ])
        .unwrap();
        // cosines from node 0: 1 -> 0.9939, 4 -> 0.7071, 3 -> 0.1104, 2 -> 0, 5 -> -1
        assert_eq!(top_k(&z, 0, &[0, 1, 2, 3, 4, 5], 3), vec![1, 4, 3]);
        let labels = vec![Some(0), Some(0), Some(1), Some(1), Some(0), Some(1)];
        let s = similarity_at_k(&z, &labels, &[0], 2).unwrap();
        assert_eq!(s, 1.0);
        let s = similarity_at_k(&z, &labels, &[0], 3).unwrap();
        assert!((s - 2.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn zero_rows_rank_last() {
        let z = DenseMatrix::from_rows(&[[1.0, 0.0], [0.0, 0.0], [-1.0, 0.0]]).unwrap();
        assert_eq!(top_k(&z, 0, &[0, 1, 2], 2), vec![2, 1]);
    }

    #[test]
    fn rejects_bad_arguments() {
        let z = DenseMatrix::filled(4, 2, 1.0);
        let labels = vec![Some(0), Some(0), Some(1), None];
        assert!(similarity_at_k(&z, &labels, &[0], 4).is_err());
        assert!(similarity_at_k(&z, &labels, &[3], 1).is_err());
        assert!(similarity_at_k(&z, &labels, &[0], 3).is_err());
    }
}
