//! Building blocks of the objective, expressed on a [`Tape`].
//!
//! Each builder has a value-level wrapper of the same name without the
//! `build_` prefix that evaluates it on a throwaway tape.

use crate::error::{Error, Result};
use crate::model::params::Classifier;
use crate::model::Readout;
use crate::tensor::{sigmoid, DenseMatrix, SparseMatrix, Tape, Var};

/// `relu(Â X W)`
pub fn build_encoder<'t>(
    tape: &mut Tape<'t>,
    adjacency: &'t SparseMatrix,
    x: Var,
    w: Var,
) -> Result<Var> {
    let propagated = tape.sparse_matmul(adjacency, x)?;
    let projected = tape.matmul(propagated, w)?;
    tape.relu(projected)
}

pub fn build_readout(tape: &mut Tape<'_>, h: Var, kind: Readout) -> Result<Var> {
    let pooled = match kind {
        Readout::Average => tape.mean_rows(h)?,
        Readout::Maxpool => tape.max_rows(h)?,
    };
    tape.sigmoid(pooled)
}

/// Bilinear logits `hᵢᵀ M s` for every row of `h`, as an n×1 column.
pub fn build_discriminator_logits(tape: &mut Tape<'_>, h: Var, s: Var, m: Var) -> Result<Var> {
    let s_col = tape.transpose(s)?;
    let ms = tape.matmul(m, s_col)?;
    tape.matmul(h, ms)
}

/// Binary cross entropy of true pairs `(hᵢ, s)` against corrupted pairs
/// `(h̃ⱼ, s)`, summed over nodes and computed from logits. Returns the loss
/// together with the positive and negative logit columns.
pub fn build_infomax_loss(
    tape: &mut Tape<'_>,
    h: Var,
    h_corrupt: Var,
    s: Var,
    m: Var,
) -> Result<(Var, Var, Var)> {
    let pos = build_discriminator_logits(tape, h, s, m)?;
    let neg = build_discriminator_logits(tape, h_corrupt, s, m)?;
    let log_pos = tape.log_sigmoid(pos)?;
    let flipped = tape.scale(neg, -1.0)?;
    let log_neg = tape.log_sigmoid(flipped)?;
    let sum_pos = tape.sum(log_pos)?;
    let sum_neg = tape.sum(log_neg)?;
    let total = tape.add(sum_pos, sum_neg)?;
    Ok((tape.scale(total, -1.0)?, pos, neg))
}

/// Combines relation embeddings. With `attention` vectors, returns the
/// per-node softmax weights (n×|R|) alongside the aggregate.
pub fn build_aggregate(
    tape: &mut Tape<'_>,
    hs: &[Var],
    attention: Option<&[Var]>,
) -> Result<(Var, Option<Var>)> {
    if hs.is_empty() {
        return Err(Error::contract("aggregation needs at least one relation"));
    }
    match attention {
        None => {
            let mut acc = hs[0];
            for &h in &hs[1..] {
                acc = tape.add(acc, h)?;
            }
            Ok((tape.scale(acc, 1.0 / hs.len() as f64)?, None))
        }
        Some(qs) => {
            if qs.len() != hs.len() {
                return Err(Error::shape(
                    "aggregate",
                    format!("{} attention vectors for {} relations", qs.len(), hs.len()),
                ));
            }
            let mut logits = Vec::with_capacity(hs.len());
            for (&h, &q) in hs.iter().zip(qs) {
                let d = tape.value(h).cols();
                if tape.value(q).shape() != (1, d) {
                    return Err(Error::shape(
                        "aggregate",
                        format!(
                            "attention vector {:?} for embeddings of width {d}",
                            tape.value(q).shape()
                        ),
                    ));
                }
                let q_col = tape.transpose(q)?;
                logits.push(tape.matmul(h, q_col)?);
            }
            let stacked = tape.concat_cols(&logits)?;
            let weights = tape.softmax_rows(stacked)?;
            let mut acc = None;
            for (r, &h) in hs.iter().enumerate() {
                let a = tape.column(weights, r)?;
                let weighted = tape.mul_col(h, a)?;
                acc = Some(match acc {
                    None => weighted,
                    Some(prev) => tape.add(prev, weighted)?,
                });
            }
            Ok((acc.expect("nonempty"), Some(weights)))
        }
    }
}

/// `‖Z − Q⁺‖² − ‖Z − Q⁻‖²`, the second term only when `include_negative`.
pub fn build_consensus(
    tape: &mut Tape<'_>,
    z: Var,
    positive: Var,
    negative: Var,
    include_negative: bool,
) -> Result<Var> {
    let diff = tape.sub(z, positive)?;
    let sq = tape.square(diff)?;
    let pull = tape.sum(sq)?;
    if !include_negative {
        return Ok(pull);
    }
    let diff = tape.sub(z, negative)?;
    let sq = tape.square(diff)?;
    let push = tape.sum(sq)?;
    tape.sub(pull, push)
}

/// Mean cross entropy of `softmax(Z Wc + b)` on the rows flagged in
/// `targets`. `targets` is n×c with a single 1 in the row of each labeled
/// training node and zeros elsewhere; `count` is the number of such rows.
pub fn build_supervised_loss(
    tape: &mut Tape<'_>,
    z: Var,
    weights: Var,
    bias: Var,
    targets: Var,
    count: usize,
) -> Result<Var> {
    if count == 0 {
        return Err(Error::contract("supervised loss needs at least one labeled node"));
    }
    let logits = tape.matmul(z, weights)?;
    let logits = tape.add_row(logits, bias)?;
    let log_probs = tape.log_softmax_rows(logits)?;
    let picked = tape.mul(targets, log_probs)?;
    let total = tape.sum(picked)?;
    tape.scale(total, -1.0 / count as f64)
}

/// Sum of squared entries over `vars`.
pub fn build_squared_norm(tape: &mut Tape<'_>, vars: &[Var]) -> Result<Var> {
    let mut acc = None;
    for &v in vars {
        let sq = tape.square(v)?;
        let s = tape.sum(sq)?;
        acc = Some(match acc {
            None => s,
            Some(prev) => tape.add(prev, s)?,
        });
    }
    match acc {
        Some(v) => Ok(v),
        None => tape.constant(DenseMatrix::zeros(1, 1)),
    }
}

/// One-hot target rows for `nodes`, zero elsewhere.
pub fn target_matrix(
    n: usize,
    classes: usize,
    labels: &[Option<usize>],
    nodes: &[usize],
) -> Result<DenseMatrix> {
    let mut t = DenseMatrix::zeros(n, classes);
    for &i in nodes {
        let c = labels
            .get(i)
            .copied()
            .flatten()
            .ok_or_else(|| Error::contract(format!("node {i} has no label")))?;
        if c >= classes {
            return Err(Error::contract(format!("label {c} out of range")));
        }
        t.set(i, c, 1.0);
    }
    Ok(t)
}

// Value-level wrappers.

pub fn encode_relation(
    x: &DenseMatrix,
    adjacency: &SparseMatrix,
    w: &DenseMatrix,
) -> Result<DenseMatrix> {
    let mut tape = Tape::new();
    let xv = tape.constant(x.clone())?;
    let wv = tape.constant(w.clone())?;
    let h = build_encoder(&mut tape, adjacency, xv, wv)?;
    Ok(tape.value(h).clone())
}

/// Graph summary of `h` as a d-vector.
pub fn readout(h: &DenseMatrix, kind: Readout) -> Result<Vec<f64>> {
    if h.rows() == 0 {
        return Err(Error::contract("readout of an empty matrix"));
    }
    let mut tape = Tape::new();
    let hv = tape.constant(h.clone())?;
    let s = build_readout(&mut tape, hv, kind)?;
    Ok(tape.value(s).row(0).to_vec())
}

/// `hᵀ M s`
pub fn bilinear_logit(h: &[f64], s: &[f64], m: &DenseMatrix) -> Result<f64> {
    let d = h.len();
    if s.len() != d || m.shape() != (d, d) {
        return Err(Error::shape(
            "discriminate",
            format!("h: {d}, s: {}, M: {:?}", s.len(), m.shape()),
        ));
    }
    let mut total = 0.0;
    for (i, &hi) in h.iter().enumerate() {
        let ms: f64 = m.row(i).iter().zip(s).map(|(a, b)| a * b).sum();
        total += hi * ms;
    }
    Ok(total)
}

/// Discriminator probability `σ(hᵀ M s)`.
pub fn discriminate(h: &[f64], s: &[f64], m: &DenseMatrix) -> Result<f64> {
    bilinear_logit(h, s, m).map(sigmoid)
}

pub fn relation_infomax_loss(
    h: &DenseMatrix,
    h_corrupt: &DenseMatrix,
    s: &[f64],
    m: &DenseMatrix,
) -> Result<f64> {
    if h.shape() != h_corrupt.shape() {
        return Err(Error::shape(
            "relation_infomax_loss",
            format!("{:?} vs {:?}", h.shape(), h_corrupt.shape()),
        ));
    }
    let mut tape = Tape::new();
    let hv = tape.constant(h.clone())?;
    let htv = tape.constant(h_corrupt.clone())?;
    let sv = tape.constant(DenseMatrix::from_vec(1, s.len(), s.to_vec())?)?;
    let mv = tape.constant(m.clone())?;
    let (loss, _, _) = build_infomax_loss(&mut tape, hv, htv, sv, mv)?;
    Ok(tape.scalar(loss))
}

/// Aggregate of `hs` plus the n×|R| weight matrix (uniform without
/// attention).
pub fn aggregate(
    hs: &[DenseMatrix],
    attention: Option<&[DenseMatrix]>,
) -> Result<(DenseMatrix, DenseMatrix)> {
    let mut tape = Tape::new();
    let hv = hs
        .iter()
        .map(|h| tape.constant(h.clone()))
        .collect::<Result<Vec<_>>>()?;
    let qv = match attention {
        Some(qs) => Some(
            qs.iter()
                .map(|q| tape.constant(q.clone()))
                .collect::<Result<Vec<_>>>()?,
        ),
        None => None,
    };
    let (agg, weights) = build_aggregate(&mut tape, &hv, qv.as_deref())?;
    let n = tape.value(agg).rows();
    let weights = match weights {
        Some(w) => tape.value(w).clone(),
        None => DenseMatrix::filled(n, hs.len(), 1.0 / hs.len() as f64),
    };
    Ok((tape.value(agg).clone(), weights))
}

pub fn consensus_regularizer(
    z: &DenseMatrix,
    hs: &[DenseMatrix],
    hs_corrupt: &[DenseMatrix],
    attention: Option<&[DenseMatrix]>,
    include_negative: bool,
) -> Result<f64> {
    let (pos, _) = aggregate(hs, attention)?;
    let (neg, _) = aggregate(hs_corrupt, attention)?;
    let mut tape = Tape::new();
    let zv = tape.constant(z.clone())?;
    let pv = tape.constant(pos)?;
    let nv = tape.constant(neg)?;
    let out = build_consensus(&mut tape, zv, pv, nv, include_negative)?;
    Ok(tape.scalar(out))
}

pub fn semi_supervised_loss(
    z: &DenseMatrix,
    classifier: &Classifier,
    labels: &[Option<usize>],
    train: &[usize],
) -> Result<f64> {
    if train.is_empty() {
        return Err(Error::contract("supervised loss needs a nonempty training mask"));
    }
    let targets = target_matrix(z.rows(), classifier.weights.cols(), labels, train)?;
    let mut tape = Tape::new();
    let zv = tape.constant(z.clone())?;
    let wv = tape.constant(classifier.weights.clone())?;
    let bv = tape.constant(classifier.bias.clone())?;
    let tv = tape.constant(targets)?;
    let out = build_supervised_loss(&mut tape, zv, wv, bv, tv, train.len())?;
    Ok(tape.scalar(out))
}
