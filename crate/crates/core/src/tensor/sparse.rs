use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

/// Coordinate-list sparse matrix. Entries are kept sorted by `(row, col)`
/// with no duplicate coordinates.
#[derive(Debug, Clone, PartialEq)]
pub struct SparseMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<(usize, usize, f64)>,
}

impl SparseMatrix {
    pub fn empty(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            entries: Vec::new(),
        }
    }

    /// Sorts the triplets and rejects out-of-range or repeated coordinates.
    pub fn from_triplets(
        rows: usize,
        cols: usize,
        mut entries: Vec<(usize, usize, f64)>,
    ) -> Result<Self> {
        for &(r, c, v) in &entries {
            if r >= rows || c >= cols {
                return Err(Error::shape(
                    "sparse",
                    format!("entry ({r}, {c}) outside a {rows}x{cols} matrix"),
                ));
            }
            if !v.is_finite() {
                return Err(Error::NumericDomain { op: "sparse" });
            }
        }
        entries.sort_by_key(|e| (e.0, e.1));
        if let Some(w) = entries.windows(2).find(|w| (w[0].0, w[0].1) == (w[1].0, w[1].1)) {
            return Err(Error::contract(format!(
                "duplicate sparse entry ({}, {})",
                w[0].0, w[0].1
            )));
        }
        Ok(Self {
            rows,
            cols,
            entries,
        })
    }

    /// Binary symmetric adjacency from an undirected edge list. Duplicate and
    /// reversed edges collapse into one pair of entries.
    pub fn from_undirected_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        let mut entries = Vec::with_capacity(edges.len() * 2);
        for &(a, b) in edges {
            entries.push((a, b, 1.0));
            entries.push((b, a, 1.0));
        }
        entries.sort_by_key(|e| (e.0, e.1));
        entries.dedup_by(|x, y| (x.0, x.1) == (y.0, y.1));
        Self::from_triplets(n, n, entries)
    }

    #[inline]
    pub fn rows(&self) -> usize {
        self.rows
    }

    #[inline]
    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn nnz(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[(usize, usize, f64)] {
        &self.entries
    }

    pub fn get(&self, row: usize, col: usize) -> f64 {
        self.entries
            .binary_search_by(|e| (e.0, e.1).cmp(&(row, col)))
            .map_or(0.0, |i| self.entries[i].2)
    }

    pub fn is_symmetric(&self) -> bool {
        self.rows == self.cols && self.entries.iter().all(|&(r, c, v)| self.get(c, r) == v)
    }

    pub fn to_dense(&self) -> DenseMatrix {
        let mut out = DenseMatrix::zeros(self.rows, self.cols);
        for &(r, c, v) in &self.entries {
            out.set(r, c, v);
        }
        out
    }

    /// `P A Pᵀ` where `P` maps row `i` to row `perm[i]`: entry `(i, j)` of
    /// the result is entry `(perm[i], perm[j])` of `self`.
    pub fn permute_symmetric(&self, perm: &[usize]) -> Result<Self> {
        if self.rows != self.cols || perm.len() != self.rows {
            return Err(Error::shape(
                "permute_symmetric",
                format!(
                    "permutation of length {} for a {}x{} matrix",
                    perm.len(),
                    self.rows,
                    self.cols
                ),
            ));
        }
        let mut inverse = vec![usize::MAX; perm.len()];
        for (i, &p) in perm.iter().enumerate() {
            if p >= perm.len() || inverse[p] != usize::MAX {
                return Err(Error::contract("not a permutation"));
            }
            inverse[p] = i;
        }
        let entries = self
            .entries
            .iter()
            .map(|&(r, c, v)| (inverse[r], inverse[c], v))
            .collect();
        Self::from_triplets(self.rows, self.cols, entries)
    }

    pub fn matmul_dense(&self, rhs: &DenseMatrix) -> Result<DenseMatrix> {
        if self.cols != rhs.rows() {
            return Err(Error::shape(
                "sparse_matmul",
                format!(
                    "{}x{} sparse times {}x{}",
                    self.rows,
                    self.cols,
                    rhs.rows(),
                    rhs.cols()
                ),
            ));
        }
        let mut out = DenseMatrix::zeros(self.rows, rhs.cols());
        self.matmul_into(rhs, &mut out);
        Ok(out)
    }

    pub(crate) fn matmul_into(&self, rhs: &DenseMatrix, out: &mut DenseMatrix) {
        for &(r, c, v) in &self.entries {
            let src = rhs.row(c);
            for (o, &x) in out.row_mut(r).iter_mut().zip(src) {
                *o += v * x;
            }
        }
    }

    /// `out += selfᵀ * rhs`.
    pub(crate) fn matmul_transposed_into(&self, rhs: &DenseMatrix, out: &mut DenseMatrix) {
        for &(r, c, v) in &self.entries {
            let src = rhs.row(r);
            for (o, &x) in out.row_mut(c).iter_mut().zip(src) {
                *o += v * x;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_duplicates_and_out_of_range() {
        assert!(SparseMatrix::from_triplets(2, 2, vec![(0, 1, 1.0), (0, 1, 2.0)]).is_err());
        assert!(SparseMatrix::from_triplets(2, 2, vec![(2, 0, 1.0)]).is_err());
    }

    #[test]
    fn undirected_edges_are_symmetric() {
        let a = SparseMatrix::from_undirected_edges(4, &[(0, 1), (1, 0), (2, 3)]).unwrap();
        assert_eq!(a.nnz(), 4);
        assert!(a.is_symmetric());
    }

    #[test]
    fn symmetric_permutation_relabels_nodes() {
        let a = SparseMatrix::from_undirected_edges(3, &[(0, 1)]).unwrap();
        // new node 2 is old node 0, new node 0 is old node 1
        let p = a.permute_symmetric(&[1, 2, 0]).unwrap();
        assert_eq!(p.get(0, 2), 1.0);
        assert_eq!(p.get(2, 0), 1.0);
        assert_eq!(p.nnz(), 2);
    }
}
