use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use dmgi_core::graph::{load_network, write_embeddings, MultiplexNetwork};
use dmgi_core::model::{Aggregation, Corruption, EmbeddingSource, Readout};
use dmgi_core::train::write_log;
use dmgi_core::{fit, DmgiModel, TrainConfig};
use serde::{Deserialize, Serialize};

use crate::args::{CorruptArg, EmitArg, ReadoutArg, TrainArgs};
use crate::manifest::{directory_digest, RunManifest, MANIFEST_FILE};

pub const SWEEP_GRID: [f64; 4] = [0.0001, 0.001, 0.01, 0.1];

/// Everything that determines one training run's outputs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrainRun {
    pub train: TrainConfig,
    pub emit: EmbeddingSource,
}

fn base_config(args: &TrainArgs) -> TrainRun {
    let mut cfg = TrainConfig::default();
    let m = &mut cfg.model;
    if let Some(v) = args.self_weight {
        m.self_weight = v;
    }
    if let Some(v) = args.alpha {
        m.alpha = v;
    }
    if let Some(v) = args.beta {
        m.beta = v;
    }
    if let Some(v) = args.gamma {
        m.gamma = v;
    }
    if args.attention {
        m.aggregation = Aggregation::Attention;
    }
    m.semi_supervised = args.semi_supervised;
    m.untied_discriminator = args.untie_discriminator;
    m.consensus_negative = !args.no_consensus_negative;
    m.regularize_all = !args.regularize_core_only;
    if let Some(c) = args.corrupt {
        m.corruption = match c {
            CorruptArg::Attrs => Corruption::Attributes,
            CorruptArg::Adjacency => Corruption::Adjacency,
        };
    }
    if let Some(r) = args.readout {
        m.readout = match r {
            ReadoutArg::Average => Readout::Average,
            ReadoutArg::Maxpool => Readout::Maxpool,
        };
    }
    if let Some(v) = args.dim {
        cfg.dim = v;
    }
    if let Some(v) = args.epochs {
        cfg.max_epochs = v;
    }
    if let Some(v) = args.patience {
        cfg.patience = v;
    }
    if let Some(v) = args.lr {
        cfg.learning_rate = v;
    }
    let emit = match args.emit.unwrap_or(EmitArg::Z) {
        EmitArg::Z => EmbeddingSource::Consensus,
        EmitArg::Aggregated => EmbeddingSource::Aggregated,
    };
    TrainRun { train: cfg, emit }
}

/// (subdirectory, config) per run. A single run writes straight into `out`.
fn plan(args: &TrainArgs) -> Vec<(PathBuf, TrainRun)> {
    let base = base_config(args);
    let mut cells = vec![(PathBuf::new(), base.clone())];
    if args.sweep {
        cells.clear();
        let gammas: &[f64] = if base.train.model.semi_supervised { &SWEEP_GRID } else { &[f64::NAN] };
        for &alpha in &SWEEP_GRID {
            for &beta in &SWEEP_GRID {
                for &gamma in gammas {
                    let mut run = base.clone();
                    run.train.model.alpha = alpha;
                    run.train.model.beta = beta;
                    let mut name = format!("alpha{alpha}_beta{beta}");
                    if !gamma.is_nan() {
                        run.train.model.gamma = gamma;
                        name.push_str(&format!("_gamma{gamma}"));
                    }
                    cells.push((PathBuf::from(name), run));
                }
            }
        }
    }
    let seeds = if args.seeds.is_empty() { vec![0] } else { args.seeds.clone() };
    let mut runs = Vec::new();
    for (dir, cell) in cells {
        for &seed in &seeds {
            let mut run = cell.clone();
            run.train.seed = seed;
            let sub = if seeds.len() > 1 { dir.join(format!("seed{seed}")) } else { dir.clone() };
            runs.push((sub, run));
        }
    }
    runs
}

fn load(data: &Path) -> Result<MultiplexNetwork> {
    let loaded = load_network(data)?;
    if loaded.symmetrized_edges > 0 {
        log::warn!(
            "{}: added the reverse of {} directed edges",
            data.display(),
            loaded.symmetrized_edges
        );
    }
    Ok(loaded.network)
}

pub fn run(args: &TrainArgs) -> Result<()> {
    let (data, runs, digest) = match &args.from_manifest {
        Some(path) => {
            let manifest = RunManifest::read(path)?;
            if manifest.command != "train" {
                bail!("{} records a {} run, not a train run", path.display(), manifest.command);
            }
            let data = manifest
                .data
                .clone()
                .with_context(|| format!("{} names no input data", path.display()))?;
            let run: TrainRun = serde_json::from_value(manifest.config.clone())
                .with_context(|| format!("{}: unreadable config", path.display()))?;
            let digest = directory_digest(&data)?;
            if manifest.data_digest.as_deref() != Some(digest.as_str()) {
                bail!("{} has changed since the recorded run (digest mismatch)", data.display());
            }
            (data, vec![(PathBuf::new(), run)], digest)
        }
        None => {
            let data = args.data.clone().expect("clap requires --data");
            let digest = directory_digest(&data)?;
            (data, plan(args), digest)
        }
    };
    let network = load(&data)?;

    let mut diverged = None;
    for (sub, run) in &runs {
        let dir = args.out.join(sub);
        match train_one(&network, run, &data, &digest, &dir) {
            Ok(()) => {}
            Err(e) if runs.len() > 1 && is_divergence(&e) => {
                log::error!("{}: {e:#}", dir.display());
                diverged.get_or_insert(e);
            }
            Err(e) => return Err(e),
        }
    }
    match diverged {
        Some(e) => Err(e),
        None => Ok(()),
    }
}

fn is_divergence(e: &anyhow::Error) -> bool {
    matches!(e.downcast_ref::<dmgi_core::Error>(), Some(dmgi_core::Error::Divergence { .. }))
}

fn train_one(network: &MultiplexNetwork, run: &TrainRun, data: &Path, digest: &str, dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    let outcome = fit(network, &run.train)?;
    let model = DmgiModel::new(network, run.train.model.clone())?;
    let z = model.embedding(&outcome.params, run.emit)?;

    let embeddings = dir.join("embeddings.tsv");
    let log_path = dir.join("train_log.jsonl");
    let params = dir.join("params.json");
    write_embeddings(&z, &embeddings)?;
    let mut log_file = BufWriter::new(File::create(&log_path).with_context(|| format!("creating {}", log_path.display()))?);
    write_log(&outcome.log, &mut log_file)?;
    log_file.flush().with_context(|| format!("writing {}", log_path.display()))?;
    fs::write(&params, serde_json::to_string(&outcome.params)?)
        .with_context(|| format!("writing {}", params.display()))?;

    let mut manifest = RunManifest::new("train", serde_json::to_value(run)?, run.train.seed);
    manifest.data = Some(data.to_path_buf());
    manifest.data_digest = Some(digest.to_string());
    manifest.artifacts.insert("embeddings".into(), embeddings.clone());
    manifest.artifacts.insert("log".into(), log_path);
    manifest.artifacts.insert("params".into(), params);
    manifest.write(&dir.join(MANIFEST_FILE))?;

    let best = outcome.best_epoch.checked_sub(1).map(|i| outcome.log[i].objective);
    println!(
        "{}: {} epochs, best epoch {}{}",
        embeddings.display(),
        outcome.log.len(),
        outcome.best_epoch,
        best.map_or_else(String::new, |o| format!(", objective {o:.6}"))
    );
    Ok(())
}
