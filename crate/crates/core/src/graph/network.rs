use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::tensor::{DenseMatrix, SparseMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Split {
    Train,
    Val,
    Test,
}

impl fmt::Display for Split {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Split::Train => "train",
            Split::Val => "val",
            Split::Test => "test",
        })
    }
}

impl FromStr for Split {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "train" => Ok(Split::Train),
            "val" => Ok(Split::Val),
            "test" => Ok(Split::Test),
            other => Err(format!("unknown split tag {other:?}")),
        }
    }
}

/// One relation type: a name and its binary symmetric adjacency.
#[derive(Debug, Clone, PartialEq)]
pub struct Relation {
    pub name: String,
    pub adjacency: SparseMatrix,
}

impl Relation {
    /// Undirected edge count.
    pub fn edge_count(&self) -> usize {
        self.adjacency.nnz() / 2
    }
}

/// Node index sets per split tag, each in ascending order.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SplitMasks {
    pub train: Vec<usize>,
    pub val: Vec<usize>,
    pub test: Vec<usize>,
}

/// An attributed multiplex network: one node set, several relation types,
/// a shared attribute matrix and optional labels and splits.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplexNetwork {
    relations: Vec<Relation>,
    attributes: DenseMatrix,
    classes: usize,
    labels: Option<Vec<Option<usize>>>,
    splits: Option<Vec<Option<Split>>>,
}

impl MultiplexNetwork {
    pub fn new(relations: Vec<Relation>, attributes: DenseMatrix) -> Result<Self> {
        let n = attributes.rows();
        if relations.is_empty() {
            return Err(Error::contract("a network needs at least one relation"));
        }
        if !attributes.is_finite() {
            return Err(Error::NumericDomain { op: "attributes" });
        }
        for r in &relations {
            let a = &r.adjacency;
            if a.rows() != n || a.cols() != n {
                return Err(Error::shape(
                    "network",
                    format!(
                        "relation {:?} is {}x{} but there are {n} nodes",
                        r.name,
                        a.rows(),
                        a.cols()
                    ),
                ));
            }
            if let Some(&(i, _, _)) = a.entries().iter().find(|e| e.0 == e.1) {
                return Err(Error::contract(format!(
                    "relation {:?} has a self-loop at node {i}",
                    r.name
                )));
            }
            if !a.is_symmetric() {
                return Err(Error::contract(format!(
                    "relation {:?} is not symmetric",
                    r.name
                )));
            }
        }
        Ok(Self {
            relations,
            attributes,
            classes: 0,
            labels: None,
            splits: None,
        })
    }

    /// Attaches labels in `[0, classes)`; `None` marks an unlabeled node.
    pub fn with_labels(mut self, classes: usize, labels: Vec<Option<usize>>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::shape(
                "labels",
                format!("{} labels for {} nodes", labels.len(), self.n()),
            ));
        }
        if let Some((i, c)) = labels
            .iter()
            .enumerate()
            .find_map(|(i, l)| l.filter(|&c| c >= classes).map(|c| (i, c)))
        {
            return Err(Error::contract(format!(
                "node {i} has label {c} but there are {classes} classes"
            )));
        }
        self.classes = classes;
        self.labels = Some(labels);
        self.check_splits()?;
        Ok(self)
    }

    pub fn with_splits(mut self, splits: Vec<Option<Split>>) -> Result<Self> {
        if splits.len() != self.n() {
            return Err(Error::shape(
                "splits",
                format!("{} split tags for {} nodes", splits.len(), self.n()),
            ));
        }
        self.splits = Some(splits);
        self.check_splits()?;
        Ok(self)
    }

    fn check_splits(&self) -> Result<()> {
        let (Some(labels), Some(splits)) = (&self.labels, &self.splits) else {
            if self.splits.is_some() {
                return Err(Error::contract("split tags require labels"));
            }
            return Ok(());
        };
        for (i, (l, s)) in labels.iter().zip(splits).enumerate() {
            match (l, s) {
                (Some(_), None) => {
                    return Err(Error::contract(format!(
                        "labeled node {i} has no split tag"
                    )))
                }
                (None, Some(_)) => {
                    return Err(Error::contract(format!(
                        "unlabeled node {i} has a split tag"
                    )))
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn n(&self) -> usize {
        self.attributes.rows()
    }

    pub fn attribute_dim(&self) -> usize {
        self.attributes.cols()
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn relation_names(&self) -> Vec<String> {
        self.relations.iter().map(|r| r.name.clone()).collect()
    }

    pub fn attributes(&self) -> &DenseMatrix {
        &self.attributes
    }

    pub fn classes(&self) -> usize {
        self.classes
    }

    pub fn labels(&self) -> Option<&[Option<usize>]> {
        self.labels.as_deref()
    }

    pub fn splits(&self) -> Option<&[Option<Split>]> {
        self.splits.as_deref()
    }

    /// Labeled node indices in ascending order.
    pub fn labeled_nodes(&self) -> Vec<usize> {
        self.labels
            .as_ref()
            .map(|ls| {
                ls.iter()
                    .enumerate()
                    .filter_map(|(i, l)| l.map(|_| i))
                    .collect()
            })
            .unwrap_or_default()
    }

    pub fn split_masks(&self) -> Option<SplitMasks> {
        let splits = self.splits.as_ref()?;
        let mut masks = SplitMasks::default();
        for (i, s) in splits.iter().enumerate() {
            match s {
                Some(Split::Train) => masks.train.push(i),
                Some(Split::Val) => masks.val.push(i),
                Some(Split::Test) => masks.test.push(i),
                None => {}
            }
        }
        Some(masks)
    }

    pub fn edge_counts(&self) -> Vec<usize> {
        self.relations.iter().map(Relation::edge_count).collect()
    }

    /// A copy restricted to the named relations, in the given order.
    pub fn select_relations(&self, names: &[&str]) -> Result<Self> {
        let mut relations = Vec::with_capacity(names.len());
        for name in names {
            let r = self
                .relations
                .iter()
                .find(|r| r.name == *name)
                .ok_or_else(|| Error::contract(format!("no relation named {name:?}")))?;
            relations.push(r.clone());
        }
        let mut out = self.clone();
        out.relations = relations;
        if out.relations.is_empty() {
            return Err(Error::contract("a network needs at least one relation"));
        }
        Ok(out)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tiny() -> MultiplexNetwork {
        let a = SparseMatrix::from_undirected_edges(3, &[(0, 1)]).unwrap();
        MultiplexNetwork::new(
            vec![Relation {
                name: "r".into(),
                adjacency: a,
            }],
            DenseMatrix::identity(3),
        )
        .unwrap()
    }

    #[test]
    fn rejects_self_loops() {
        let a = SparseMatrix::from_triplets(2, 2, vec![(0, 0, 1.0)]).unwrap();
        let err = MultiplexNetwork::new(
            vec![Relation {
                name: "r".into(),
                adjacency: a,
            }],
            DenseMatrix::identity(2),
        );
        assert!(err.is_err());
    }

    #[test]
    fn labeled_nodes_need_split_tags() {
        let net = tiny().with_labels(2, vec![Some(0), Some(1), None]).unwrap();
        assert!(net
            .clone()
            .with_splits(vec![Some(Split::Train), None, None])
            .is_err());
        assert!(net
            .clone()
            .with_splits(vec![Some(Split::Train), Some(Split::Test), Some(Split::Val)])
            .is_err());
        let ok = net
            .with_splits(vec![Some(Split::Train), Some(Split::Test), None])
            .unwrap();
        let masks = ok.split_masks().unwrap();
        assert_eq!(masks.train, vec![0]);
        assert_eq!(masks.test, vec![1]);
        assert!(masks.val.is_empty());
    }

    #[test]
    fn label_range_checked() {
        assert!(tiny().with_labels(2, vec![Some(2), None, None]).is_err());
    }
}
