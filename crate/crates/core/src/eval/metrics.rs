use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

// Log terms are taken of integer count ratios so that identical partitions
// give bitwise equal entropy and information sums.
fn entropy(counts: impl Iterator<Item = usize>, n: f64) -> f64 {
    counts
        .filter(|&c| c > 0)
        .map(|c| c as f64 / n * (n / c as f64).ln())
        .sum()
}

/// NMI with geometric-mean normalization and natural logs.
///
/// Two single-cluster partitions score 1. If exactly one side has zero
/// entropy the score is 0.
pub fn normalized_mutual_information(a: &[usize], b: &[usize]) -> Result<f64> {
    if a.len() != b.len() {
        return Err(Error::shape(
            "nmi",
            format!("label lengths {} and {}", a.len(), b.len()),
        ));
    }
    if a.is_empty() {
        return Err(Error::contract("nmi needs at least one element"));
    }
    let n = a.len() as f64;
    let mut joint: BTreeMap<(usize, usize), usize> = BTreeMap::new();
    let mut ca: BTreeMap<usize, usize> = BTreeMap::new();
    let mut cb: BTreeMap<usize, usize> = BTreeMap::new();
    for (&x, &y) in a.iter().zip(b) {
        *joint.entry((x, y)).or_default() += 1;
        *ca.entry(x).or_default() += 1;
        *cb.entry(y).or_default() += 1;
    }
    let ha = entropy(ca.values().copied(), n);
    let hb = entropy(cb.values().copied(), n);
    if ha == 0.0 && hb == 0.0 {
        return Ok(1.0);
    }
    if ha == 0.0 || hb == 0.0 {
        return Ok(0.0);
    }
    // a one-to-one contingency table is the same partition under new names
    if joint.len() == ca.len() && joint.len() == cb.len() {
        return Ok(1.0);
    }
    let mi: f64 = joint
        .iter()
        .map(|(&(x, y), &c)| {
            let c = c as f64;
            let outer = ca[&x] as f64 * cb[&y] as f64;
            c / n * (c * n / outer).ln()
        })
        .sum();
    Ok((mi / (ha * hb).sqrt()).clamp(0.0, 1.0))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct F1Scores {
    pub macro_f1: f64,
    pub micro_f1: f64,
}

/// Macro-F1 averages per-class F1 over every class that occurs in the truth
/// or the predictions. Micro-F1 pools counts over those classes, which for
/// single-label data equals accuracy.
pub fn f1_scores(truth: &[usize], predicted: &[usize]) -> Result<F1Scores> {
    if truth.len() != predicted.len() {
        return Err(Error::shape(
            "f1",
            format!("truth has {} entries, predictions {}", truth.len(), predicted.len()),
        ));
    }
    if truth.is_empty() {
        return Err(Error::contract("f1 needs at least one prediction"));
    }
    // class -> (tp, fp, fn)
    let mut table: BTreeMap<usize, (usize, usize, usize)> = BTreeMap::new();
    for (&t, &p) in truth.iter().zip(predicted) {
        if t == p {
            table.entry(t).or_default().0 += 1;
        } else {
            table.entry(p).or_default().1 += 1;
            table.entry(t).or_default().2 += 1;
        }
    }
    let per_class = |&(tp, fp, fn_): &(usize, usize, usize)| {
        let denom = 2 * tp + fp + fn_;
        if denom == 0 {
            0.0
        } else {
            2.0 * tp as f64 / denom as f64
        }
    };
    let macro_f1 = table.values().map(per_class).sum::<f64>() / table.len() as f64;
    let (tp, fp, fn_) = table
        .values()
        .fold((0, 0, 0), |acc, v| (acc.0 + v.0, acc.1 + v.1, acc.2 + v.2));
    let micro_f1 = tp as f64 / (tp as f64 + 0.5 * (fp + fn_) as f64);
    Ok(F1Scores { macro_f1, micro_f1 })
}

pub fn accuracy(truth: &[usize], predicted: &[usize]) -> f64 {
    let correct = truth.iter().zip(predicted).filter(|(t, p)| t == p).count();
    correct as f64 / truth.len() as f64
}
