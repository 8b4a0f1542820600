use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::eval::classify::{logistic_regression_classify, LogRegSettings};
use crate::eval::kmeans::{kmeans_cluster, DEFAULT_RESTARTS};
use crate::eval::metrics::normalized_mutual_information;
use crate::eval::similarity::{similarity_at_k, DEFAULT_K};
use crate::graph::MultiplexNetwork;
use crate::tensor::DenseMatrix;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct EvalSettings {
    pub k: usize,
    pub restarts: usize,
    /// Seed of the k-means restarts.
    pub seed: u64,
    pub logreg: LogRegSettings,
}

impl Default for EvalSettings {
    fn default() -> Self {
        Self {
            k: DEFAULT_K,
            restarts: DEFAULT_RESTARTS,
            seed: 0,
            logreg: LogRegSettings::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub nmi: f64,
    pub sim_at_k: f64,
    /// Absent when the network carries no train/test split.
    pub macro_f1: Option<f64>,
    pub micro_f1: Option<f64>,
    pub k: usize,
    pub restarts: usize,
    pub seeds: Vec<u64>,
    /// Mean attention per relation, when known.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub attention: Option<Vec<f64>>,
}

/// Clustering NMI over labeled nodes (K = class count), Sim@k with test
/// queries (all labeled nodes without splits), and train/test F1.
pub fn evaluate_embeddings(
    z: &DenseMatrix,
    network: &MultiplexNetwork,
    settings: &EvalSettings,
) -> Result<EvalReport> {
    if z.rows() != network.n() {
        return Err(Error::shape(
            "evaluate",
            format!("{} embedding rows for {} nodes", z.rows(), network.n()),
        ));
    }
    let labels = network
        .labels()
        .ok_or_else(|| Error::contract("evaluation needs node labels"))?;
    let labeled = network.labeled_nodes();
    let classes = network.classes();

    let sub = DenseMatrix::from_fn(labeled.len(), z.cols(), |i, j| z.get(labeled[i], j));
    let clusters = kmeans_cluster(&sub, classes, settings.restarts, settings.seed)?;
    let truth: Vec<usize> = labeled.iter().map(|&i| labels[i].expect("labeled")).collect();
    let nmi = normalized_mutual_information(&truth, &clusters)?;

    let masks = network.split_masks();
    let queries = match &masks {
        Some(m) if !m.test.is_empty() => m.test.clone(),
        _ => labeled.clone(),
    };
    let sim_at_k = similarity_at_k(z, labels, &queries, settings.k)?;

    let (macro_f1, micro_f1) = match &masks {
        Some(m) if !m.train.is_empty() && !m.test.is_empty() => {
            let s = logistic_regression_classify(z, labels, classes, &m.train, &m.test, &settings.logreg)?;
            (Some(s.macro_f1), Some(s.micro_f1))
        }
        _ => (None, None),
    };

    Ok(EvalReport {
        nmi,
        sim_at_k,
        macro_f1,
        micro_f1,
        k: settings.k,
        restarts: settings.restarts,
        seeds: vec![settings.seed],
        attention: None,
    })
}

/// Mean, min and max of one metric across runs.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Spread {
    pub mean: f64,
    pub min: f64,
    pub max: f64,
}

impl Spread {
    pub fn of(values: &[f64]) -> Option<Self> {
        if values.is_empty() {
            return None;
        }
        let mean = values.iter().sum::<f64>() / values.len() as f64;
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Some(Self { mean, min, max })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalSummary {
    pub runs: usize,
    pub nmi: Spread,
    pub sim_at_k: Spread,
    pub macro_f1: Option<Spread>,
    pub micro_f1: Option<Spread>,
    pub k: usize,
}

pub fn summarize(reports: &[EvalReport]) -> Option<EvalSummary> {
    let first = reports.first()?;
    let pick = |f: fn(&EvalReport) -> Option<f64>| -> Option<Spread> {
        let v: Option<Vec<f64>> = reports.iter().map(f).collect();
        v.and_then(|v| Spread::of(&v))
    };
    Some(EvalSummary {
        runs: reports.len(),
        nmi: pick(|r| Some(r.nmi))?,
        sim_at_k: pick(|r| Some(r.sim_at_k))?,
        macro_f1: pick(|r| r.macro_f1),
        micro_f1: pick(|r| r.micro_f1),
        k: first.k,
    })
}

fn table(rows: &[(String, String)]) -> String {
    let width = rows.iter().map(|(m, _)| m.len()).max().unwrap_or(0).max(6);
    let mut out = String::new();
    let _ = writeln!(out, "{:<width$}  value", "metric");
    for (m, v) in rows {
        let _ = writeln!(out, "{m:<width$}  {v}");
    }
    out
}

impl EvalReport {
    pub fn render_table(&self) -> String {
        let opt = |v: Option<f64>| v.map_or_else(|| "-".to_string(), |v| format!("{v:.4}"));
        let mut rows = vec![
            ("NMI".to_string(), format!("{:.4}", self.nmi)),
            (format!("Sim@{}", self.k), format!("{:.4}", self.sim_at_k)),
            ("Macro-F1".to_string(), opt(self.macro_f1)),
            ("Micro-F1".to_string(), opt(self.micro_f1)),
        ];
        if let Some(att) = &self.attention {
            for (r, a) in att.iter().enumerate() {
                rows.push((format!("attention[{r}]"), format!("{a:.4}")));
            }
        }
        table(&rows)
    }
}

impl EvalSummary {
    pub fn render_table(&self) -> String {
        let fmt = |s: &Spread| format!("{:.4} [{:.4}, {:.4}]", s.mean, s.min, s.max);
        let opt = |s: &Option<Spread>| s.as_ref().map_or_else(|| "-".to_string(), fmt);
        let rows = vec![
            ("NMI".to_string(), fmt(&self.nmi)),
            (format!("Sim@{}", self.k), fmt(&self.sim_at_k)),
            ("Macro-F1".to_string(), opt(&self.macro_f1)),
            ("Micro-F1".to_string(), opt(&self.micro_f1)),
        ];
        format!("{} runs, mean [min, max]\n{}", self.runs, table(&rows))
    }
}
