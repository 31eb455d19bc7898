//! JSON tree files: a flat node list with parent links.
//!
//! Floats are written in shortest round-trip form, so a read tree is
//! bit-identical to the written one.

use std::io::{Read, Write};

use serde::{Deserialize, Serialize};

use crate::design::PriorVector;
use crate::error::{Error, Result};

use super::{Node, NodeKind, Tree, TreeParams};

const FORMAT: &str = "stratcart-tree";
const VERSION: u32 = 1;
const PROB_SUM_TOL: f64 = 1e-9;

#[derive(Serialize, Deserialize)]
struct TreeFile {
    format: String,
    version: u32,
    classes: Vec<String>,
    dimensionality: usize,
    n_train: usize,
    params: ParamsFile,
    nodes: Vec<NodeFile>,
}

#[derive(Serialize, Deserialize)]
struct ParamsFile {
    min_split: usize,
    min_bucket: usize,
    max_depth: usize,
    cp: f64,
    priors: Option<Vec<f64>>,
}

#[derive(Serialize, Deserialize)]
struct NodeFile {
    id: usize,
    parent: Option<usize>,
    depth: usize,
    n: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    feature: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    threshold: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    left: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    right: Option<usize>,
    probs: Vec<f64>,
    class: u32,
}

pub fn write_tree<W: Write>(tree: &Tree, writer: W) -> Result<()> {
    let file = TreeFile {
        format: FORMAT.into(),
        version: VERSION,
        classes: tree.classes.clone(),
        dimensionality: tree.dimensionality,
        n_train: tree.n_train,
        params: ParamsFile {
            min_split: tree.params.min_split,
            min_bucket: tree.params.min_bucket,
            max_depth: tree.params.max_depth,
            cp: tree.params.cp,
            priors: tree.params.priors.as_ref().map(|p| p.as_slice().to_vec()),
        },
        nodes: tree
            .nodes
            .iter()
            .enumerate()
            .map(|(id, n)| {
                let (feature, threshold, left, right) = match n.kind {
                    NodeKind::Leaf => (None, None, None, None),
                    NodeKind::Split {
                        feature,
                        threshold,
                        left,
                        right,
                    } => (Some(feature), Some(threshold), Some(left), Some(right)),
                };
                NodeFile {
                    id,
                    parent: n.parent,
                    depth: n.depth,
                    n: n.n,
                    feature,
                    threshold,
                    left,
                    right,
                    probs: n.probs.clone(),
                    class: n.class,
                }
            })
            .collect(),
    };
    serde_json::to_writer_pretty(writer, &file)
        .map_err(|e| Error::MalformedTree(format!("cannot serialize: {e}")))
}

pub fn read_tree<R: Read>(reader: R) -> Result<Tree> {
    let file: TreeFile =
        serde_json::from_reader(reader).map_err(|e| Error::MalformedTree(e.to_string()))?;
    let bad = |m: String| Err(Error::MalformedTree(m));
    if file.format != FORMAT || file.version != VERSION {
        return bad(format!(
            "unsupported format {} v{}",
            file.format, file.version
        ));
    }
    let k = file.classes.len();
    let count = file.nodes.len();
    if count == 0 {
        return bad("no nodes".into());
    }
    let priors = file.params.priors.map(PriorVector::new).transpose()?;
    let params = TreeParams {
        min_split: file.params.min_split,
        min_bucket: file.params.min_bucket,
        max_depth: file.params.max_depth,
        cp: file.params.cp,
        priors,
    };

    let mut nodes = Vec::with_capacity(count);
    for (pos, n) in file.nodes.into_iter().enumerate() {
        if n.id != pos {
            return bad(format!("node {} listed at position {pos}", n.id));
        }
        if n.probs.len() != k {
            return bad(format!(
                "node {pos} has {} probabilities for {k} classes",
                n.probs.len()
            ));
        }
        let sum: f64 = n.probs.iter().sum();
        if (sum - 1.0).abs() > PROB_SUM_TOL {
            return bad(format!("node {pos} probabilities sum to {sum}"));
        }
        if n.class as usize >= k {
            return bad(format!("node {pos} predicts unknown class {}", n.class));
        }
        let kind = match (n.feature, n.threshold, n.left, n.right) {
            (None, None, None, None) => NodeKind::Leaf,
            (Some(feature), Some(threshold), Some(left), Some(right)) => {
                if feature >= file.dimensionality {
                    return bad(format!("node {pos} splits on feature {feature}"));
                }
                if left <= pos || right <= pos || left >= count || right >= count {
                    return bad(format!("node {pos} has invalid children"));
                }
                NodeKind::Split {
                    feature,
                    threshold,
                    left,
                    right,
                }
            }
            _ => return bad(format!("node {pos} is neither a leaf nor a complete split")),
        };
        nodes.push(Node {
            parent: n.parent,
            depth: n.depth,
            n: n.n,
            probs: n.probs,
            class: n.class,
            kind,
        });
    }
    for (pos, node) in nodes.iter().enumerate() {
        if let NodeKind::Split { left, right, .. } = node.kind {
            for child in [left, right] {
                if nodes[child].parent != Some(pos) {
                    return bad(format!("node {child} does not link back to parent {pos}"));
                }
            }
        }
    }
    Ok(Tree {
        nodes,
        classes: file.classes,
        dimensionality: file.dimensionality,
        n_train: file.n_train,
        params,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cart::grow_tree;
    use crate::corpus::{synthesize, SynthSpec};

    #[test]
    fn round_trip_is_exact() {
        let spec = SynthSpec::reference(2000, 3, 0.3).unwrap();
        let d = synthesize(&spec, 4).unwrap();
        let pri = crate::design::population_priors(&d.class_histogram()).unwrap();
        let params = TreeParams::default().with_priors(pri);
        let t = grow_tree(&d, &vec![1.0; d.len()], &params).unwrap();
        assert!(t.n_nodes() > 1);
        let mut buf = Vec::new();
        write_tree(&t, &mut buf).unwrap();
        let back = read_tree(&buf[..]).unwrap();
        assert_eq!(back, t);
        let mut again = Vec::new();
        write_tree(&back, &mut again).unwrap();
        assert_eq!(buf, again);
    }

    #[test]
    fn rejects_broken_files() {
        assert!(read_tree(&b"{}"[..]).is_err());
        let text = r#"{"format":"stratcart-tree","version":1,"classes":["a"],"dimensionality":1,
            "n_train":1,"params":{"min_split":2,"min_bucket":1,"max_depth":3,"cp":0.0,"priors":null},
            "nodes":[{"id":0,"parent":null,"depth":0,"n":1,"probs":[0.5],"class":0}]}"#;
        assert!(matches!(
            read_tree(text.as_bytes()),
            Err(Error::MalformedTree(_))
        ));
    }
}
