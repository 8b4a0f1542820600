use dmgi_core::eval::{
    accuracy, f1_scores, kmeans_best, kmeans_run, normalized_mutual_information, partition_inertia,
    similarity_at_k,
};
use dmgi_core::tensor::DenseMatrix;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Every set partition of `n` elements as a restricted growth string.
fn partitions(n: usize) -> Vec<Vec<usize>> {
    fn grow(prefix: &mut Vec<usize>, n: usize, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == n {
            out.push(prefix.clone());
            return;
        }
        let next = prefix.iter().copied().max().map_or(0, |m| m + 1);
        for b in 0..=next {
            prefix.push(b);
            grow(prefix, n, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    grow(&mut Vec::new(), n, &mut out);
    out
}

/// NMI straight from the contingency table, with probabilities and `p ln p`.
fn brute_nmi(a: &[usize], b: &[usize]) -> f64 {
    let n = a.len() as f64;
    let ka = a.iter().max().unwrap() + 1;
    let kb = b.iter().max().unwrap() + 1;
    let mut table = vec![vec![0.0; kb]; ka];
    for (&x, &y) in a.iter().zip(b) {
        table[x][y] += 1.0;
    }
    let pa: Vec<f64> = table.iter().map(|r| r.iter().sum::<f64>() / n).collect();
    let pb: Vec<f64> = (0..kb).map(|j| table.iter().map(|r| r[j]).sum::<f64>() / n).collect();
    let h = |p: &[f64]| -p.iter().filter(|&&v| v > 0.0).map(|v| v * v.ln()).sum::<f64>();
    let (ha, hb) = (h(&pa), h(&pb));
    if ha == 0.0 && hb == 0.0 {
        return 1.0;
    }
    if ha == 0.0 || hb == 0.0 {
        return 0.0;
    }
    let mut mi = 0.0;
    for x in 0..ka {
        for y in 0..kb {
            let p = table[x][y] / n;
            if p > 0.0 {
                mi += p * (p / (pa[x] * pb[y])).ln();
            }
        }
    }
    mi / (ha * hb).sqrt()
}

#[test]
fn nmi_matches_contingency_oracle_exhaustively() {
    let mut pairs = 0;
    for n in 1..=6 {
        let all = partitions(n);
        for a in &all {
            for b in &all {
                let got = normalized_mutual_information(a, b).unwrap();
                let want = brute_nmi(a, b);
                assert!((got - want).abs() < 1e-12, "{a:?} {b:?}: {got} vs {want}");
                pairs += 1;
            }
        }
    }
    // Bell numbers 1, 2, 5, 15, 52, 203 squared
    assert_eq!(pairs, 1 + 4 + 25 + 225 + 2704 + 41209);
}

/// Sim@k by ranking: a candidate is in the top k of a query when fewer than
/// k others beat it on (similarity, then lower index).
fn brute_sim_at_k(z: &DenseMatrix, labels: &[Option<usize>], queries: &[usize], k: usize) -> f64 {
    let cos = |a: usize, b: usize| {
        let (ra, rb) = (z.row(a), z.row(b));
        let na: f64 = ra.iter().map(|v| v * v).sum::<f64>().sqrt();
        let nb: f64 = rb.iter().map(|v| v * v).sum::<f64>().sqrt();
        if na == 0.0 || nb == 0.0 {
            f64::NEG_INFINITY
        } else {
            ra.iter().zip(rb).map(|(x, y)| x * y).sum::<f64>() / (na * nb)
        }
    };
    let pool: Vec<usize> = (0..z.rows()).filter(|&i| labels[i].is_some()).collect();
    let mut total = 0.0;
    for &q in queries {
        let cands: Vec<usize> = pool.iter().copied().filter(|&c| c != q).collect();
        let mut hits = 0;
        for &c in &cands {
            let s = cos(q, c);
            let beaten_by = cands
                .iter()
                .filter(|&&o| {
                    let so = cos(q, o);
                    so > s || (so == s && o < c)
                })
                .count();
            if beaten_by < k && labels[c] == labels[q] {
                hits += 1;
            }
        }
        total += hits as f64 / k as f64;
    }
    total / queries.len() as f64
}

#[test]
fn sim_at_k_matches_exhaustive_ranking() {
    let mut rng = ChaCha8Rng::seed_from_u64(2024);
    for trial in 0..20 {
        let n = 10;
        let d = rng.gen_range(1..=4);
        // coarse integer entries force cosine ties, and the odd zero row
        let z = DenseMatrix::from_fn(n, d, |_, _| rng.gen_range(-2i32..=2) as f64);
        let labels: Vec<Option<usize>> = (0..n)
            .map(|_| if rng.gen_bool(0.85) { Some(rng.gen_range(0..3)) } else { None })
            .collect();
        let labeled: Vec<usize> = (0..n).filter(|&i| labels[i].is_some()).collect();
        let k = rng.gen_range(1..=3);
        if labeled.len() <= k + 1 {
            continue;
        }
        let queries: Vec<usize> = labeled.iter().copied().filter(|_| rng.gen_bool(0.6)).collect();
        if queries.is_empty() {
            continue;
        }
        let got = similarity_at_k(&z, &labels, &queries, k).unwrap();
        let want = brute_sim_at_k(&z, &labels, &queries, k);
        assert!((got - want).abs() < 1e-12, "trial {trial}: {got} vs {want}");
    }
}

#[test]
fn micro_f1_is_accuracy() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for _ in 0..20 {
        let len = rng.gen_range(1..60);
        let c = rng.gen_range(1..6);
        let truth: Vec<usize> = (0..len).map(|_| rng.gen_range(0..c)).collect();
        let pred: Vec<usize> = (0..len).map(|_| rng.gen_range(0..c)).collect();
        let s = f1_scores(&truth, &pred).unwrap();
        assert_eq!(s.micro_f1.to_bits(), accuracy(&truth, &pred).to_bits());
    }
}

#[test]
fn macro_f1_matches_confusion_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..20 {
        let truth: Vec<usize> = (0..20).map(|_| rng.gen_range(0..3)).collect();
        let pred: Vec<usize> = (0..20).map(|_| rng.gen_range(0..3)).collect();
        let mut conf = [[0.0f64; 3]; 3];
        for (&t, &p) in truth.iter().zip(&pred) {
            conf[t][p] += 1.0;
        }
        let mut f1s = Vec::new();
        for c in 0..3 {
            let actual: f64 = conf[c].iter().sum();
            let called: f64 = (0..3).map(|t| conf[t][c]).sum();
            if actual == 0.0 && called == 0.0 {
                continue;
            }
            let precision = if called > 0.0 { conf[c][c] / called } else { 0.0 };
            let recall = if actual > 0.0 { conf[c][c] / actual } else { 0.0 };
            f1s.push(if precision + recall > 0.0 {
                2.0 * precision * recall / (precision + recall)
            } else {
                0.0
            });
        }
        let want = f1s.iter().sum::<f64>() / f1s.len() as f64;
        let got = f1_scores(&truth, &pred).unwrap().macro_f1;
        assert!((got - want).abs() < 1e-12, "{got} vs {want}");
    }
}

fn gaussian_points(rng: &mut ChaCha8Rng, n: usize, d: usize) -> DenseMatrix {
    DenseMatrix::from_fn(n, d, |_, _| {
        // Box-Muller keeps ties improbable
        let u: f64 = rng.gen_range(f64::EPSILON..1.0);
        let v: f64 = rng.gen_range(0.0..1.0);
        (-2.0 * u.ln()).sqrt() * (std::f64::consts::TAU * v).cos()
    })
}

/// Orthonormal `d×d` matrix from Gram-Schmidt on random columns.
fn random_rotation(rng: &mut ChaCha8Rng, d: usize) -> DenseMatrix {
    let mut cols: Vec<Vec<f64>> = Vec::new();
    while cols.len() < d {
        let mut v: Vec<f64> = (0..d).map(|_| rng.gen_range(-1.0..1.0)).collect();
        for c in &cols {
            let dot: f64 = v.iter().zip(c).map(|(a, b)| a * b).sum();
            v.iter_mut().zip(c).for_each(|(a, b)| *a -= dot * b);
        }
        let norm = v.iter().map(|a| a * a).sum::<f64>().sqrt();
        if norm > 1e-3 {
            cols.push(v.into_iter().map(|a| a / norm).collect());
        }
    }
    DenseMatrix::from_fn(d, d, |i, j| cols[j][i])
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn nmi_is_symmetric_and_label_blind(seed in any::<u64>(), len in 1usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let a: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let b: Vec<usize> = (0..len).map(|_| rng.gen_range(0..5)).collect();
        let ab = normalized_mutual_information(&a, &b).unwrap();
        let ba = normalized_mutual_information(&b, &a).unwrap();
        prop_assert!((ab - ba).abs() < 1e-12);
        prop_assert!((0.0..=1.0).contains(&ab));
        let relabeled: Vec<usize> = a.iter().map(|&x| 10 + 3 * (3 - x)).collect();
        prop_assert!((normalized_mutual_information(&relabeled, &b).unwrap() - ab).abs() < 1e-12);
        prop_assert_eq!(normalized_mutual_information(&a, &relabeled).unwrap(), 1.0);
    }

    #[test]
    fn sim_at_k_ignores_scale_and_rotation(seed in any::<u64>(), d in 2usize..6) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 24;
        let z = gaussian_points(&mut rng, n, d);
        let labels: Vec<Option<usize>> = (0..n).map(|i| Some(i % 3)).collect();
        let queries: Vec<usize> = (0..n).step_by(2).collect();
        let base = similarity_at_k(&z, &labels, &queries, 5).unwrap();
        let scales: Vec<f64> = (0..n).map(|_| rng.gen_range(0.1..10.0)).collect();
        let scaled = DenseMatrix::from_fn(n, d, |i, j| z.get(i, j) * scales[i]);
        prop_assert!((similarity_at_k(&scaled, &labels, &queries, 5).unwrap() - base).abs() < 1e-9);
        let rotated = z.matmul(&random_rotation(&mut rng, d)).unwrap();
        prop_assert!((similarity_at_k(&rotated, &labels, &queries, 5).unwrap() - base).abs() < 1e-9);
    }

    #[test]
    fn kmeans_inertia_never_rises(seed in any::<u64>(), n in 3usize..60, k in 1usize..5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let k = k.min(n);
        let points = gaussian_points(&mut rng, n, 3);
        let run = kmeans_run(&points, k, &mut rng).unwrap();
        prop_assert!(!run.inertia_history.is_empty());
        for w in run.inertia_history.windows(2) {
            prop_assert!(w[1] <= w[0] * (1.0 + 1e-12), "{:?}", run.inertia_history);
        }
        prop_assert!((partition_inertia(&points, &run.assignments, k) - run.inertia).abs() <= 1e-9 * run.inertia.max(1.0));
        prop_assert!(run.assignments.iter().all(|&a| a < k));
        let best = kmeans_best(&points, k, 4, seed).unwrap();
        prop_assert!(best.inertia.is_finite());
    }

    #[test]
    fn micro_f1_equals_accuracy_everywhere(seed in any::<u64>(), len in 1usize..100) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let truth: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        let pred: Vec<usize> = (0..len).map(|_| rng.gen_range(0..4)).collect();
        prop_assert_eq!(f1_scores(&truth, &pred).unwrap().micro_f1, accuracy(&truth, &pred));
    }
}
