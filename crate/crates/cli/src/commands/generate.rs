use anyhow::Result;
use dmgi_core::graph::{generate_synthetic_multiplex, write_network, SyntheticConfig};

use crate::args::GenerateArgs;
use crate::manifest::{directory_digest, RunManifest, MANIFEST_FILE};

pub fn run(args: &GenerateArgs) -> Result<()> {
    let config = SyntheticConfig {
        nodes: args.nodes,
        classes: args.classes,
        relations: args.relations.clone(),
        attr_dim: args.attr_dim,
        attr_noise: args.attr_noise,
        train_fraction: args.train_fraction,
        val_fraction: args.val_fraction,
        seed: args.seed,
    };
    let network = generate_synthetic_multiplex(&config)?;
    write_network(&network, &args.out)?;

    let mut manifest = RunManifest::new("generate", serde_json::to_value(&config)?, args.seed);
    manifest.data_digest = Some(directory_digest(&args.out)?);
    manifest.artifacts.insert("network".into(), args.out.clone());
    manifest.write(&args.out.join(MANIFEST_FILE))?;

    let edges: Vec<String> = network.edge_counts().iter().map(|c| c.to_string()).collect();
    println!(
        "wrote {} nodes, {} relations (edges {}) to {}",
        network.n(),
        network.relations().len(),
        edges.join(", "),
        args.out.display()
    );
    Ok(())
}
