//! Binary contraction trees stored as a post-ordered arena.

use serde_json::{json, Map, Value};

use crate::error::{Error, Result};

/// Arena slot of a [`ContractionTree`].
pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum TreeNode {
    Leaf(usize),
    Join(NodeId, NodeId),
}

/// Strictly binary tree with tensor-labelled leaves.
///
/// Children always precede their parent in `nodes` and the root is the
/// last node, so a forward scan is a valid bottom-up evaluation order.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ContractionTree {
    nodes: Vec<TreeNode>,
}

impl ContractionTree {
    pub fn leaf(tensor: usize) -> Self {
        Self {
            nodes: vec![TreeNode::Leaf(tensor)],
        }
    }

    pub fn join(left: Self, right: Self) -> Self {
        let offset = left.nodes.len();
        let mut nodes = left.nodes;
        nodes.reserve(right.nodes.len() + 1);
        nodes.extend(right.nodes.into_iter().map(|n| match n {
            TreeNode::Leaf(t) => TreeNode::Leaf(t),
            TreeNode::Join(a, b) => TreeNode::Join(a + offset, b + offset),
        }));
        let (l, r) = (offset - 1, nodes.len() - 1);
        nodes.push(TreeNode::Join(l, r));
        Self { nodes }
    }

    pub fn nodes(&self) -> &[TreeNode] {
        &self.nodes
    }

    pub fn root(&self) -> NodeId {
        self.nodes.len() - 1
    }

    pub fn num_leaves(&self) -> usize {
        self.nodes.len().div_ceil(2)
    }

    /// Leaf labels in left-to-right order.
    pub fn leaves(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.num_leaves());
        let mut stack = vec![self.root()];
        while let Some(id) = stack.pop() {
            match self.nodes[id] {
                TreeNode::Leaf(t) => out.push(t),
                TreeNode::Join(l, r) => {
                    stack.push(r);
                    stack.push(l);
                }
            }
        }
        out
    }

    /// Same tree with the children of every internal node swapped.
    pub fn mirror(&self) -> Self {
        let nodes = self
            .nodes
            .iter()
            .map(|&n| match n {
                TreeNode::Join(l, r) => TreeNode::Join(r, l),
                leaf => leaf,
            })
            .collect();
        Self { nodes }
    }

    /// Swap the children of one internal node.
    pub fn swap_children(&mut self, node: NodeId) {
        if let TreeNode::Join(l, r) = self.nodes[node] {
            self.nodes[node] = TreeNode::Join(r, l);
        }
    }

    /// Checks that every leaf label is distinct and below `num_tensors`.
    pub fn check_distinct_leaves(&self, num_tensors: usize) -> Result<()> {
        let mut seen = vec![false; num_tensors];
        for n in &self.nodes {
            if let TreeNode::Leaf(t) = *n {
                if t >= num_tensors {
                    return Err(Error::MalformedTree(format!("leaf {t} is not a tensor")));
                }
                if std::mem::replace(&mut seen[t], true) {
                    return Err(Error::MalformedTree(format!("tensor {t} appears twice")));
                }
            }
        }
        Ok(())
    }

    /// Checks that the leaves are a permutation of `0..num_tensors`.
    pub fn check_permutation(&self, num_tensors: usize) -> Result<()> {
        self.check_distinct_leaves(num_tensors)?;
        let leaves = self.num_leaves();
        if leaves != num_tensors {
            return Err(Error::MalformedTree(format!(
                "tree has {leaves} leaves but the network has {num_tensors} tensors"
            )));
        }
        Ok(())
    }

    /// `{"leaf":t}` or `{"left":..,"right":..}`.
    pub fn to_json(&self) -> Value {
        let mut built: Vec<Option<Value>> = Vec::with_capacity(self.nodes.len());
        for &n in &self.nodes {
            let v = match n {
                TreeNode::Leaf(t) => json!({ "leaf": t }),
                TreeNode::Join(l, r) => {
                    let mut m = Map::new();
                    m.insert("left".into(), built[l].take().expect("post-order"));
                    m.insert("right".into(), built[r].take().expect("post-order"));
                    Value::Object(m)
                }
            };
            built.push(Some(v));
        }
        built.pop().flatten().expect("nonempty tree")
    }

    pub fn from_json(value: &Value) -> Result<Self> {
        enum Step<'a> {
            Visit(&'a Value),
            Close,
        }
        let mut nodes = Vec::new();
        let mut pending: Vec<NodeId> = Vec::new();
        let mut stack = vec![Step::Visit(value)];
        while let Some(step) = stack.pop() {
            match step {
                Step::Visit(v) => {
                    let obj = v
                        .as_object()
                        .ok_or_else(|| Error::MalformedTree("tree node is not an object".into()))?;
                    if let Some(leaf) = obj.get("leaf") {
                        let t = leaf
                            .as_u64()
                            .ok_or_else(|| Error::MalformedTree("leaf is not an integer".into()))?;
                        if obj.len() != 1 {
                            return Err(Error::MalformedTree("leaf node has extra keys".into()));
                        }
                        nodes.push(TreeNode::Leaf(t as usize));
                        pending.push(nodes.len() - 1);
                    } else {
                        let (l, r) = match (obj.get("left"), obj.get("right")) {
                            (Some(l), Some(r)) if obj.len() == 2 => (l, r),
                            _ => {
                                return Err(Error::MalformedTree(
                                    "internal node needs exactly `left` and `right`".into(),
                                ))
                            }
                        };
                        stack.push(Step::Close);
                        stack.push(Step::Visit(r));
                        stack.push(Step::Visit(l));
                    }
                }
                Step::Close => {
                    let r = pending.pop().expect("right child");
                    let l = pending.pop().expect("left child");
                    nodes.push(TreeNode::Join(l, r));
                    pending.push(nodes.len() - 1);
                }
            }
        }
        Ok(Self { nodes })
    }
}

/// Incremental construction where the caller controls node creation order.
#[derive(Debug, Default)]
pub struct TreeBuilder {
    nodes: Vec<TreeNode>,
}

impl TreeBuilder {
    pub fn with_capacity(leaves: usize) -> Self {
        Self {
            nodes: Vec::with_capacity(2 * leaves),
        }
    }

    pub fn leaf(&mut self, tensor: usize) -> NodeId {
        self.nodes.push(TreeNode::Leaf(tensor));
        self.nodes.len() - 1
    }

    pub fn join(&mut self, left: NodeId, right: NodeId) -> NodeId {
        debug_assert!(left < self.nodes.len() && right < self.nodes.len());
        self.nodes.push(TreeNode::Join(left, right));
        self.nodes.len() - 1
    }

    /// The most recently created node becomes the root.
    pub fn finish(self) -> ContractionTree {
        assert!(!self.nodes.is_empty(), "empty tree");
        ContractionTree { nodes: self.nodes }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fig1() -> ContractionTree {
        // ((A*B)*C)*(D*E)
        let ab = ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1));
        let abc = ContractionTree::join(ab, ContractionTree::leaf(2));
        let de = ContractionTree::join(ContractionTree::leaf(3), ContractionTree::leaf(4));
        ContractionTree::join(abc, de)
    }

    #[test]
    fn leaves_in_order_and_mirror() {
        let t = fig1();
        assert_eq!(t.leaves(), vec![0, 1, 2, 3, 4]);
        assert_eq!(t.mirror().leaves(), vec![4, 3, 2, 1, 0]);
        assert_eq!(t.num_leaves(), 5);
        t.check_permutation(5).unwrap();
    }

    #[test]
    fn json_shape() {
        let t = ContractionTree::join(ContractionTree::leaf(2), ContractionTree::leaf(0));
        assert_eq!(
            t.to_json(),
            json!({"left": {"leaf": 2}, "right": {"leaf": 0}})
        );
        assert_eq!(ContractionTree::from_json(&t.to_json()).unwrap(), t);
        let f = fig1();
        assert_eq!(ContractionTree::from_json(&f.to_json()).unwrap(), f);
    }

    #[test]
    fn rejects_bad_json_and_duplicates() {
        assert!(ContractionTree::from_json(&json!({"left": {"leaf": 0}})).is_err());
        assert!(ContractionTree::from_json(&json!({"leaf": "x"})).is_err());
        let dup = ContractionTree::join(ContractionTree::leaf(1), ContractionTree::leaf(1));
        assert!(dup.check_permutation(2).is_err());
        let short = ContractionTree::leaf(0);
        assert!(short.check_permutation(2).is_err());
    }

    #[test]
    fn deep_caterpillar_round_trips() {
        let mut t = ContractionTree::leaf(0);
        for k in 1..1200 {
            t = ContractionTree::join(t, ContractionTree::leaf(k));
        }
        let text = serde_json::to_string(&t.to_json()).unwrap();
        let mut de = serde_json::Deserializer::from_str(&text);
        de.disable_recursion_limit();
        let v: Value = serde::Deserialize::deserialize(&mut de).unwrap();
        assert_eq!(ContractionTree::from_json(&v).unwrap(), t);
    }
}
