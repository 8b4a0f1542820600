use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::{Error, Result};
use crate::tensor::DenseMatrix;

/// Row-shuffled copy of `x`: row `i` of the result is row `permutation[i]`.
pub fn corrupt_attributes(x: &DenseMatrix, permutation: &[usize]) -> Result<DenseMatrix> {
    validate_permutation(permutation, x.rows())?;
    Ok(x.gather_rows(permutation))
}

pub fn validate_permutation(permutation: &[usize], n: usize) -> Result<()> {
    if permutation.len() != n {
        return Err(Error::contract(format!(
            "permutation has length {} but there are {n} rows",
            permutation.len()
        )));
    }
    let mut seen = vec![false; n];
    for &p in permutation {
        if p >= n || std::mem::replace(&mut seen[p], true) {
            return Err(Error::contract(format!("invalid permutation entry {p}")));
        }
    }
    Ok(())
}

pub fn random_permutation<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}
