//! Directory format for multiplex networks.
//!
//! ```text
//! meta.json        {"n": .., "f": .., "classes": .., "relations": [names]}
//! <relation>.edges "src<TAB>dst" per line, 0-based
//! attributes.tsv   "node<TAB>dim<TAB>value" sparse triplets
//! labels.tsv       "node<TAB>class"            (optional)
//! splits.tsv       "node<TAB>train|val|test"   (optional)
//! ```
//!
//! Lines starting with `#` and blank lines are ignored. Edge files are read
//! as directed pairs; a pair whose reverse is missing is symmetrized and
//! counted.

use std::collections::BTreeSet;
use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{MultiplexNetwork, Relation, Split};
use crate::tensor::{DenseMatrix, SparseMatrix};

pub const META_FILE: &str = "meta.json";
pub const ATTRIBUTES_FILE: &str = "attributes.tsv";
pub const LABELS_FILE: &str = "labels.tsv";
pub const SPLITS_FILE: &str = "splits.tsv";

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NetworkMeta {
    pub n: usize,
    pub f: usize,
    pub classes: usize,
    pub relations: Vec<String>,
}

#[derive(Debug, Clone)]
pub struct LoadedNetwork {
    pub network: MultiplexNetwork,
    /// Directed edges whose reverse was absent and had to be added.
    pub symmetrized_edges: usize,
}

/// Formats a float with 17 significant digits, enough to round-trip any
/// `f64` exactly.
pub fn format_f64(v: f64) -> String {
    format!("{v:.16e}")
}

pub fn edges_file_name(relation: &str) -> String {
    format!("{relation}.edges")
}

pub fn read_network(dir: impl AsRef<Path>) -> Result<MultiplexNetwork> {
    load_network(dir).map(|l| l.network)
}

pub fn load_network(dir: impl AsRef<Path>) -> Result<LoadedNetwork> {
    let dir = dir.as_ref();
    let meta_path = dir.join(META_FILE);
    let meta_text = read_to_string(&meta_path)?;
    let meta: NetworkMeta = serde_json::from_str(&meta_text)
        .map_err(|e| Error::format(&meta_path, e.line(), e.to_string()))?;
    if meta.relations.is_empty() {
        return Err(Error::format(&meta_path, 1, "no relations listed"));
    }
    for name in &meta.relations {
        check_relation_name(name).map_err(|m| Error::format(&meta_path, 1, m))?;
    }

    let mut symmetrized_edges = 0;
    let mut relations = Vec::with_capacity(meta.relations.len());
    for name in &meta.relations {
        let path = dir.join(edges_file_name(name));
        let text = read_to_string(&path)?;
        let mut directed = BTreeSet::new();
        for (line_no, fields) in data_lines(&text) {
            let [src, dst] = fields_exact::<2>(&path, line_no, &fields)?;
            let src = parse_index(&path, line_no, src, meta.n, "node")?;
            let dst = parse_index(&path, line_no, dst, meta.n, "node")?;
            if src == dst {
                return Err(Error::format(
                    &path,
                    line_no,
                    format!("self-loop at node {src}"),
                ));
            }
            directed.insert((src, dst));
        }
        let missing = directed
            .iter()
            .filter(|&&(a, b)| !directed.contains(&(b, a)))
            .count();
        if missing > 0 {
            log::warn!(
                "{}: symmetrized {missing} directed edge(s)",
                path.display()
            );
        }
        symmetrized_edges += missing;
        let edges: Vec<(usize, usize)> = directed.into_iter().collect();
        relations.push(Relation {
            name: name.clone(),
            adjacency: SparseMatrix::from_undirected_edges(meta.n, &edges)?,
        });
    }

    let attr_path = dir.join(ATTRIBUTES_FILE);
    let text = read_to_string(&attr_path)?;
    let mut attributes = DenseMatrix::zeros(meta.n, meta.f);
    let mut seen = BTreeSet::new();
    for (line_no, fields) in data_lines(&text) {
        let [node, dim, value] = fields_exact::<3>(&attr_path, line_no, &fields)?;
        let node = parse_index(&attr_path, line_no, node, meta.n, "node")?;
        let dim = parse_index(&attr_path, line_no, dim, meta.f, "attribute dimension")?;
        let value: f64 = value
            .parse()
            .map_err(|_| Error::format(&attr_path, line_no, format!("bad value {value:?}")))?;
        if !value.is_finite() {
            return Err(Error::format(&attr_path, line_no, "non-finite attribute value"));
        }
        if !seen.insert((node, dim)) {
            return Err(Error::format(
                &attr_path,
                line_no,
                format!("duplicate attribute ({node}, {dim})"),
            ));
        }
        attributes.set(node, dim, value);
    }

    let mut network = MultiplexNetwork::new(relations, attributes)?;

    let labels_path = dir.join(LABELS_FILE);
    if labels_path.exists() {
        let text = read_to_string(&labels_path)?;
        let mut labels = vec![None; meta.n];
        for (line_no, fields) in data_lines(&text) {
            let [node, class] = fields_exact::<2>(&labels_path, line_no, &fields)?;
            let node = parse_index(&labels_path, line_no, node, meta.n, "node")?;
            let class = parse_index(&labels_path, line_no, class, meta.classes, "class")?;
            if labels[node].replace(class).is_some() {
                return Err(Error::format(
                    &labels_path,
                    line_no,
                    format!("node {node} labeled twice"),
                ));
            }
        }
        network = network.with_labels(meta.classes, labels)?;
    }

    let splits_path = dir.join(SPLITS_FILE);
    if splits_path.exists() {
        let text = read_to_string(&splits_path)?;
        let mut splits = vec![None; meta.n];
        for (line_no, fields) in data_lines(&text) {
            let [node, tag] = fields_exact::<2>(&splits_path, line_no, &fields)?;
            let node = parse_index(&splits_path, line_no, node, meta.n, "node")?;
            let tag: Split = tag
                .parse()
                .map_err(|m: String| Error::format(&splits_path, line_no, m))?;
            if splits[node].replace(tag).is_some() {
                return Err(Error::format(
                    &splits_path,
                    line_no,
                    format!("node {node} has two split tags"),
                ));
            }
        }
        network = network
            .with_splits(splits)
            .map_err(|e| Error::format(&splits_path, 0, e.to_string()))?;
    }

    Ok(LoadedNetwork {
        network,
        symmetrized_edges,
    })
}

/// Writes `network` to `dir`, creating it if needed. Output bytes depend only
/// on the network.
pub fn write_network(network: &MultiplexNetwork, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for r in network.relations() {
        check_relation_name(&r.name).map_err(Error::contract)?;
    }

    let meta = NetworkMeta {
        n: network.n(),
        f: network.attribute_dim(),
        classes: network.classes(),
        relations: network.relation_names(),
    };
    let mut meta_text = serde_json::to_string_pretty(&meta).expect("meta serializes");
    meta_text.push('\n');
    write_file(&dir.join(META_FILE), &meta_text)?;

    for r in network.relations() {
        let mut out = String::new();
        for &(i, j, _) in r.adjacency.entries() {
            writeln!(out, "{i}\t{j}").unwrap();
        }
        write_file(&dir.join(edges_file_name(&r.name)), &out)?;
    }

    let mut out = String::new();
    let x = network.attributes();
    for i in 0..x.rows() {
        for (j, &v) in x.row(i).iter().enumerate() {
            if v != 0.0 {
                writeln!(out, "{i}\t{j}\t{}", format_f64(v)).unwrap();
            }
        }
    }
    write_file(&dir.join(ATTRIBUTES_FILE), &out)?;

    if let Some(labels) = network.labels() {
        let mut out = String::new();
        for (i, l) in labels.iter().enumerate() {
            if let Some(c) = l {
                writeln!(out, "{i}\t{c}").unwrap();
            }
        }
        write_file(&dir.join(LABELS_FILE), &out)?;
    }
    if let Some(splits) = network.splits() {
        let mut out = String::new();
        for (i, s) in splits.iter().enumerate() {
            if let Some(s) = s {
                writeln!(out, "{i}\t{s}").unwrap();
            }
        }
        write_file(&dir.join(SPLITS_FILE), &out)?;
    }
    Ok(())
}

fn check_relation_name(name: &str) -> std::result::Result<(), String> {
    if name.is_empty() || name.contains(['/', '\\', '\t', '\n']) || name.starts_with('.') {
        return Err(format!("invalid relation name {name:?}"));
    }
    Ok(())
}

fn read_to_string(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::io(path, e))
}

fn write_file(path: &PathBuf, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|e| Error::io(path, e))
}

/// Non-comment, non-blank lines split on tabs, with 1-based line numbers.
pub(crate) fn data_lines(text: &str) -> impl Iterator<Item = (usize, Vec<&str>)> {
    text.lines().enumerate().filter_map(|(i, line)| {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.trim_start().starts_with('#') {
            None
        } else {
            Some((i + 1, line.split('\t').map(str::trim).collect()))
        }
    })
}

fn fields_exact<'s, const N: usize>(
    path: &Path,
    line: usize,
    fields: &[&'s str],
) -> Result<[&'s str; N]> {
    <[&str; N]>::try_from(fields).map_err(|_| {
        Error::format(
            path,
            line,
            format!("expected {N} tab-separated fields, found {}", fields.len()),
        )
    })
}

fn parse_index(path: &Path, line: usize, field: &str, bound: usize, what: &str) -> Result<usize> {
    let v: usize = field
        .parse()
        .map_err(|_| Error::format(path, line, format!("bad {what} {field:?}")))?;
    if v >= bound {
        return Err(Error::format(
            path,
            line,
            format!("{what} {v} out of range (limit {bound})"),
        ));
    }
    Ok(v)
}

/// Embedding rows as TSV: node index, then one column per dimension.
pub fn embeddings_to_tsv(z: &DenseMatrix) -> String {
    let mut out = String::new();
    for (i, row) in z.row_iter().enumerate() {
        write!(out, "{i}").expect("string write");
        for &v in row {
            write!(out, "\t{}", format_f64(v)).expect("string write");
        }
        out.push('\n');
    }
    out
}

pub fn write_embeddings(z: &DenseMatrix, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref().to_path_buf();
    write_file(&path, &embeddings_to_tsv(z))
}

/// Reads an embedding TSV. Rows must be listed in node order starting at 0
/// and share one width.
pub fn read_embeddings(path: impl AsRef<Path>) -> Result<DenseMatrix> {
    let path = path.as_ref();
    let text = read_to_string(path)?;
    let mut values = Vec::new();
    let mut width = None;
    let mut rows = 0;
    for (line, fields) in data_lines(&text) {
        let index: usize = fields[0]
            .trim()
            .parse()
            .map_err(|_| Error::format(path, line, format!("bad node index {:?}", fields[0])))?;
        if index != rows {
            return Err(Error::format(path, line, format!("expected node {rows}, found {index}")));
        }
        let d = fields.len() - 1;
        if d == 0 {
            return Err(Error::format(path, line, "row has no values"));
        }
        match width {
            None => width = Some(d),
            Some(w) if w != d => {
                return Err(Error::format(path, line, format!("{d} values, earlier rows have {w}")))
            }
            _ => {}
        }
        for f in &fields[1..] {
            let v: f64 = f
                .trim()
                .parse()
                .map_err(|_| Error::format(path, line, format!("bad value {f:?}")))?;
            if !v.is_finite() {
                return Err(Error::format(path, line, "non-finite value"));
            }
            values.push(v);
        }
        rows += 1;
    }
    let width = width.ok_or_else(|| Error::format(path, 1, "no embedding rows"))?;
    DenseMatrix::from_vec(rows, width, values)
}
