//! Downstream metrics on frozen embeddings: k-means NMI, cosine Sim@k and
//! logistic-regression F1.

mod classify;
mod kmeans;
mod metrics;
mod report;
mod similarity;

pub use classify::{logistic_regression_classify, LogRegSettings, LogisticRegression};
pub use kmeans::{
    kmeans_best, kmeans_cluster, kmeans_run, partition_inertia, KMeansRun, DEFAULT_RESTARTS,
    MAX_ITERATIONS, SHIFT_TOLERANCE,
};
pub use metrics::{accuracy, f1_scores, normalized_mutual_information, F1Scores};
pub use report::{evaluate_embeddings, summarize, EvalReport, EvalSettings, EvalSummary, Spread};
pub use similarity::{cosine, similarity_at_k, top_k, DEFAULT_K};
