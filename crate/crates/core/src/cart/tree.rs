use crate::corpus::Dataset;
use crate::error::{Error, Result};

use super::{argmax, node_risk, scaled_probs, SplitSearch, TreeParams};

#[derive(Debug, Clone, PartialEq)]
pub enum NodeKind {
    Leaf,
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
    },
}

/// A tree node. Every node carries its class probabilities so a tree can be
/// cut back to any internal node and still predict.
#[derive(Debug, Clone, PartialEq)]
pub struct Node {
    pub parent: Option<usize>,
    pub depth: usize,
    /// Training points reaching the node.
    pub n: usize,
    pub probs: Vec<f64>,
    pub class: u32,
    pub kind: NodeKind,
}

impl Node {
    pub fn is_leaf(&self) -> bool {
        matches!(self.kind, NodeKind::Leaf)
    }
}

/// A grown classification tree. Nodes are stored in preorder, root first.
#[derive(Debug, Clone, PartialEq)]
pub struct Tree {
    pub(super) nodes: Vec<Node>,
    pub(super) classes: Vec<String>,
    pub(super) dimensionality: usize,
    pub(super) n_train: usize,
    pub(super) params: TreeParams,
}

impl Tree {
    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn classes(&self) -> &[String] {
        &self.classes
    }

    pub fn dimensionality(&self) -> usize {
        self.dimensionality
    }

    pub fn n_train(&self) -> usize {
        self.n_train
    }

    pub fn params(&self) -> &TreeParams {
        &self.params
    }

    pub fn n_nodes(&self) -> usize {
        self.nodes.len()
    }

    pub fn n_leaves(&self) -> usize {
        self.nodes.iter().filter(|n| n.is_leaf()).count()
    }

    /// Depth of the deepest node; a single leaf has depth 0.
    pub fn depth(&self) -> usize {
        self.nodes.iter().map(|n| n.depth).max().unwrap_or(0)
    }

    /// The leaf a point is routed to. The point's length is not checked.
    pub fn leaf(&self, point: &[f64]) -> &Node {
        let mut node = &self.nodes[0];
        while let NodeKind::Split {
            feature,
            threshold,
            left,
            right,
        } = node.kind
        {
            node = if point[feature] < threshold {
                &self.nodes[left]
            } else {
                &self.nodes[right]
            };
        }
        node
    }
}

struct Grower<'a> {
    search: SplitSearch<'a>,
    min_gain: f64,
    nodes: Vec<Node>,
}

impl Grower<'_> {
    fn grow(&mut self, idx: Vec<usize>, depth: usize, parent: Option<usize>) -> Result<usize> {
        let (counts, _) = self.search.node_counts(&idx);
        let (probs, mass) = scaled_probs(&counts, &self.search.scale);
        if mass <= 0.0 {
            return Err(Error::EmptyNode);
        }
        let id = self.nodes.len();
        self.nodes.push(Node {
            parent,
            depth,
            n: idx.len(),
            class: argmax(&probs),
            probs,
            kind: NodeKind::Leaf,
        });

        if depth >= self.search.params.max_depth || node_risk(&counts, &self.search.scale) <= 0.0 {
            return Ok(id);
        }
        let Some(split) = self.search.best_split(&idx) else {
            return Ok(id);
        };
        if split.impurity_decrease < self.min_gain {
            return Ok(id);
        }
        let data = self.search.data;
        let (left_idx, right_idx): (Vec<usize>, Vec<usize>) = idx
            .into_iter()
            .partition(|&i| data.features(i)[split.feature] < split.threshold);
        debug_assert_eq!(left_idx.len(), split.left_n);
        let left = self.grow(left_idx, depth + 1, Some(id))?;
        let right = self.grow(right_idx, depth + 1, Some(id))?;
        self.nodes[id].kind = NodeKind::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
        };
        Ok(id)
    }
}

/// Recursive partitioning of `data` with case `weights`.
///
/// A node is split when it has at least `min_split` points, lies above
/// `max_depth`, and its best split gains at least `cp` times the root risk.
pub fn grow_tree(data: &Dataset, weights: &[f64], params: &TreeParams) -> Result<Tree> {
    let search = SplitSearch::new(data, weights, params)?;
    let min_gain = params.cp * search.root_risk();
    let mut grower = Grower {
        search,
        min_gain,
        nodes: Vec::new(),
    };
    grower.grow((0..data.len()).collect(), 0, None)?;
    Ok(Tree {
        nodes: grower.nodes,
        classes: data.classes().to_vec(),
        dimensionality: data.dimensionality(),
        n_train: data.len(),
        params: params.clone(),
    })
}

pub fn predict(tree: &Tree, point: &[f64]) -> Result<u32> {
    if point.len() != tree.dimensionality {
        return Err(Error::DimensionMismatch {
            expected: tree.dimensionality,
            found: point.len(),
        });
    }
    Ok(tree.leaf(point).class)
}

pub fn predict_batch(tree: &Tree, data: &Dataset) -> Result<Vec<u32>> {
    if data.dimensionality() != tree.dimensionality {
        return Err(Error::DimensionMismatch {
            expected: tree.dimensionality,
            found: data.dimensionality(),
        });
    }
    Ok(data.iter().map(|(x, _)| tree.leaf(x).class).collect())
}
