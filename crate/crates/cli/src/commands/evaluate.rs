use std::path::Path;

use anyhow::{Context, Result};
use dmgi_core::eval::{evaluate_embeddings, summarize, EvalSettings};
use dmgi_core::graph::{load_network, read_embeddings};
use serde_json::json;

use crate::args::EvaluateArgs;
use crate::manifest::{directory_digest, RunManifest};

pub fn run(args: &EvaluateArgs) -> Result<()> {
    let network = load_network(&args.data)?.network;
    let settings = EvalSettings {
        k: args.k,
        restarts: args.restarts,
        seed: args.seed,
        ..EvalSettings::default()
    };
    let mut reports = Vec::new();
    for path in &args.embeddings {
        let z = read_embeddings(path)?;
        let report = evaluate_embeddings(&z, &network, &settings)
            .with_context(|| format!("evaluating {}", path.display()))?;
        reports.push(report);
    }

    let json = if reports.len() == 1 {
        print!("{}", reports[0].render_table());
        serde_json::to_value(&reports[0])?
    } else {
        let summary = summarize(&reports).expect("at least one report");
        print!("{}", summary.render_table());
        json!({ "runs": reports, "summary": summary })
    };

    let mut manifest = RunManifest::new(
        "evaluate",
        json!({ "settings": settings, "embeddings": args.embeddings }),
        args.seed,
    );
    manifest.data = Some(args.data.clone());
    manifest.data_digest = Some(directory_digest(&args.data)?);
    if let Some(path) = &args.json {
        let mut text = serde_json::to_string_pretty(&json)?;
        text.push('\n');
        std::fs::write(path, text).with_context(|| format!("writing {}", path.display()))?;
        manifest.artifacts.insert("report".into(), path.clone());
    }
    let manifest_path = match &args.manifest {
        Some(p) => p.clone(),
        None => args.embeddings[0]
            .parent()
            .unwrap_or(Path::new("."))
            .join("eval_manifest.json"),
    };
    manifest.write(&manifest_path)
}
