use crate::error::{Error, Result};
use crate::tensor::SparseMatrix;

/// Symmetric normalization with weighted self-connections:
/// `D̂^{-1/2} (A + wI) D̂^{-1/2}` where `D̂ᵢᵢ = Σⱼ (A + wI)ᵢⱼ`.
///
/// `adjacency` must be square, nonnegative and free of self-loops; the
/// diagonal is injected here exactly once.
pub fn normalize_adjacency(adjacency: &SparseMatrix, self_weight: f64) -> Result<SparseMatrix> {
    let n = adjacency.rows();
    if adjacency.cols() != n {
        return Err(Error::shape(
            "normalize_adjacency",
            format!("{}x{} is not square", n, adjacency.cols()),
        ));
    }
    if !(self_weight >= 0.0 && self_weight.is_finite()) {
        return Err(Error::contract(format!(
            "self-connection weight must be finite and nonnegative, got {self_weight}"
        )));
    }
    let mut degree = vec![self_weight; n];
    for &(r, c, v) in adjacency.entries() {
        if r == c {
            return Err(Error::contract(format!(
                "adjacency already has a self-loop at node {r}"
            )));
        }
        if v < 0.0 {
            return Err(Error::contract("adjacency has a negative entry"));
        }
        degree[r] += v;
    }
    if let Some(node) = degree.iter().position(|&d| d <= 0.0) {
        return Err(Error::DegenerateDegree { node, self_weight });
    }
    let mut entries = Vec::with_capacity(adjacency.nnz() + n);
    entries.extend(
        adjacency
            .entries()
            .iter()
            .map(|&(r, c, v)| (r, c, v / (degree[r] * degree[c]).sqrt())),
    );
    if self_weight > 0.0 {
        entries.extend((0..n).map(|i| (i, i, self_weight / (degree[i] * degree[i]).sqrt())));
    }
    SparseMatrix::from_triplets(n, n, entries)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tensor::DenseMatrix;

    /// Dense arithmetic reference: build Â, D̂ and multiply directly.
    fn dense_oracle(a: &DenseMatrix, w: f64) -> DenseMatrix {
        let n = a.rows();
        let hat = DenseMatrix::from_fn(n, n, |i, j| a.get(i, j) + if i == j { w } else { 0.0 });
        let d: Vec<f64> = (0..n).map(|i| hat.row(i).iter().sum::<f64>()).collect();
        DenseMatrix::from_fn(n, n, |i, j| hat.get(i, j) / (d[i] * d[j]).sqrt())
    }

    #[test]
    fn single_node() {
        let a = SparseMatrix::empty(1, 1);
        let out = normalize_adjacency(&a, 3.0).unwrap();
        assert_eq!(out.to_dense().as_slice(), &[1.0]);
    }

    #[test]
    fn two_node_edge_with_unit_self_weight() {
        let a = SparseMatrix::from_undirected_edges(2, &[(0, 1)]).unwrap();
        let out = normalize_adjacency(&a, 1.0).unwrap().to_dense();
        for &v in out.as_slice() {
            assert!((v - 0.5).abs() < 1e-15);
        }
    }

    #[test]
    fn path_matches_dense_oracle() {
        let a = SparseMatrix::from_undirected_edges(3, &[(0, 1), (1, 2)]).unwrap();
        let out = normalize_adjacency(&a, 3.0).unwrap();
        let expected = dense_oracle(&a.to_dense(), 3.0);
        assert!(out.to_dense().max_abs_diff(&expected) < 1e-12);
        // hand check: D̂ = [4, 5, 4]
        assert!((out.get(0, 1) - 1.0 / 20f64.sqrt()).abs() < 1e-15);
        assert!((out.get(0, 0) - 0.75).abs() < 1e-15);
        assert!(out.is_symmetric());
    }

    #[test]
    fn isolated_node_without_self_weight_fails() {
        let a = SparseMatrix::from_undirected_edges(3, &[(0, 1)]).unwrap();
        let err = normalize_adjacency(&a, 0.0).unwrap_err();
        assert!(matches!(err, Error::DegenerateDegree { node: 2, .. }));
        assert!(normalize_adjacency(&a, 0.5).is_ok());
    }

    #[test]
    fn self_loops_rejected() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(1, 1, 1.0)]).unwrap();
        assert!(normalize_adjacency(&a, 1.0).is_err());
    }
}
