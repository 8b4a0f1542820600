//! Attributed multiplex networks: data model, adjacency normalization,
//! corruption, synthetic generation and directory I/O.

mod corrupt;
pub mod io;
mod network;
mod normalize;
mod synthetic;

pub use corrupt::{corrupt_attributes, random_permutation, validate_permutation};
pub use io::{
    embeddings_to_tsv, load_network, read_embeddings, read_network, write_embeddings, write_network,
    LoadedNetwork, NetworkMeta,
};
pub use network::{MultiplexNetwork, Relation, Split, SplitMasks};
pub use normalize::normalize_adjacency;
pub use synthetic::{
    generate_synthetic_multiplex, planted_class, BlockProbabilities, SyntheticConfig,
};
