use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use dmgi_core::graph::BlockProbabilities;

#[derive(Debug, Parser)]
#[command(name = "dmgi", version, about = "Node embeddings for attributed multiplex networks")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a planted-partition multiplex network directory.
    Generate(GenerateArgs),
    /// Train embeddings on a network directory.
    Train(TrainArgs),
    /// Score embedding files against the labels of a network.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    /// Number of nodes.
    #[arg(long, default_value_t = 300)]
    pub nodes: usize,
    /// Number of planted classes (balanced, contiguous blocks).
    #[arg(long, default_value_t = 3)]
    pub classes: usize,
    /// Edge probabilities of one relation as P_IN:P_OUT. Repeat per relation.
    #[arg(long = "relation", value_name = "P_IN:P_OUT", value_parser = parse_block, required = true)]
    pub relations: Vec<BlockProbabilities>,
    /// Attribute dimension; each class owns a block of attr_dim / classes columns.
    #[arg(long, default_value_t = 50)]
    pub attr_dim: usize,
    /// Probability of flipping each attribute entry.
    #[arg(long, default_value_t = 0.2)]
    pub attr_noise: f64,
    /// Fraction of nodes in the train split.
    #[arg(long, default_value_t = 0.1)]
    pub train_fraction: f64,
    /// Fraction of nodes in the validation split; the rest are test.
    #[arg(long, default_value_t = 0.1)]
    pub val_fraction: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

fn parse_block(s: &str) -> Result<BlockProbabilities, String> {
    let (a, b) = s
        .split_once(':')
        .ok_or_else(|| format!("expected P_IN:P_OUT, got {s:?}"))?;
    let p = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|e| format!("{t:?}: {e}"))
            .and_then(|v| {
                if (0.0..=1.0).contains(&v) {
                    Ok(v)
                } else {
                    Err(format!("probability {v} outside [0, 1]"))
                }
            })
    };
    let (p_in, p_out) = (p(a)?, p(b)?);
    if p_out > p_in {
        return Err(format!("p_out {p_out} exceeds p_in {p_in}"));
    }
    Ok(BlockProbabilities { p_in, p_out })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CorruptArg {
    Attrs,
    Adjacency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReadoutArg {
    Average,
    Maxpool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum EmitArg {
    /// The consensus embedding.
    Z,
    /// The aggregate of the relation embeddings.
    Aggregated,
}

#[derive(Debug, Args)]
pub struct TrainArgs {
    /// Network directory.
    #[arg(long, required_unless_present = "from_manifest")]
    pub data: Option<PathBuf>,
    /// Embedding dimension [default: 64].
    #[arg(long)]
    pub dim: Option<usize>,
    /// Weight of the self-connections added to each adjacency [default: 3].
    #[arg(long)]
    pub self_weight: Option<f64>,
    /// Consensus regularization coefficient [default: 0.001].
    #[arg(long)]
    pub alpha: Option<f64>,
    /// L2 coefficient [default: 0.001].
    #[arg(long)]
    pub beta: Option<f64>,
    /// Semi-supervised loss coefficient [default: 0.001].
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Combine relations with learned per-node attention instead of a mean.
    #[arg(long)]
    pub attention: bool,
    /// Add a classifier on the consensus embedding trained on the train split.
    #[arg(long)]
    pub semi_supervised: bool,
    /// One discriminator matrix per relation.
    #[arg(long)]
    pub untie_discriminator: bool,
    /// Drop the consensus term that pushes away from corrupted embeddings.
    #[arg(long)]
    pub no_consensus_negative: bool,
    /// Penalize only encoders, discriminator and consensus in the L2 term.
    #[arg(long)]
    pub regularize_core_only: bool,
    /// Corruption used for negative samples [default: attrs].
    #[arg(long, value_enum)]
    pub corrupt: Option<CorruptArg>,
    /// Graph summary function [default: average].
    #[arg(long, value_enum)]
    pub readout: Option<ReadoutArg>,
    /// Which matrix to write as the embeddings [default: z].
    #[arg(long, value_enum)]
    pub emit: Option<EmitArg>,
    /// Maximum epochs [default: 2000].
    #[arg(long)]
    pub epochs: Option<usize>,
    /// Epochs without improvement before stopping [default: 20].
    #[arg(long)]
    pub patience: Option<usize>,
    /// Adam learning rate [default: 0.0005].
    #[arg(long)]
    pub lr: Option<f64>,
    /// Training seed. Repeat for several runs, each in its own subdirectory.
    #[arg(long = "seed")]
    pub seeds: Vec<u64>,
    /// Train every alpha, beta (and gamma when semi-supervised) in
    /// {0.0001, 0.001, 0.01, 0.1}, one subdirectory per cell.
    #[arg(long)]
    pub sweep: bool,
    /// Rerun exactly the configuration, data and seed recorded in a train
    /// manifest. Model flags are not allowed alongside it.
    #[arg(long, value_name = "MANIFEST", conflicts_with_all = [
        "data", "dim", "self_weight", "alpha", "beta", "gamma", "attention",
        "semi_supervised", "untie_discriminator", "no_consensus_negative",
        "regularize_core_only", "corrupt", "readout", "emit", "epochs",
        "patience", "lr", "seeds", "sweep",
    ])]
    pub from_manifest: Option<PathBuf>,
    /// Output directory.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct EvaluateArgs {
    /// Network directory with labels.
    #[arg(long)]
    pub data: PathBuf,
    /// Embedding TSV file. Repeat to report mean and range over several runs.
    #[arg(long = "embeddings", required = true)]
    pub embeddings: Vec<PathBuf>,
    /// Neighbors per query for Sim@k.
    #[arg(long, default_value_t = 5)]
    pub k: usize,
    /// k-means restarts.
    #[arg(long, default_value_t = 10)]
    pub restarts: usize,
    /// Seed of the k-means restarts.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Also write the report as JSON to this path.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Where to write the run manifest [default: eval_manifest.json next to
    /// the first embeddings file].
    #[arg(long, value_name = "PATH")]
    pub manifest: Option<PathBuf>,
}
