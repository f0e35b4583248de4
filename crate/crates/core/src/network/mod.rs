//! Tensor network data model and cost evaluation of contraction trees.
//!
//! All sizes are stored as log2 of the dimension. A tensor's log-size is the
//! sum over its indices, and a pairwise contraction costs
//! `out_log2 + shared_log2` scalar operations in the log domain.

mod graph;
pub mod io;
mod tree;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::oracle::DenseTensor;
use crate::real::{log_sum, Real};

pub use graph::OrderingGraph;
pub use tree::{ContractionTree, NodeId, TreeBuilder, TreeNode};

/// Tensors incident to an index. Hyperindices are not representable.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Endpoints {
    Open(usize),
    Pair(usize, usize),
}

impl Endpoints {
    pub fn contains(self, t: usize) -> bool {
        match self {
            Endpoints::Open(a) => a == t,
            Endpoints::Pair(a, b) => a == t || b == t,
        }
    }

    /// The endpoint that is not `t`, if the index is closed.
    pub fn other(self, t: usize) -> Option<usize> {
        match self {
            Endpoints::Open(_) => None,
            Endpoints::Pair(a, b) if a == t => Some(b),
            Endpoints::Pair(a, _) => Some(a),
        }
    }

    pub fn as_vec(self) -> Vec<usize> {
        match self {
            Endpoints::Open(a) => vec![a],
            Endpoints::Pair(a, b) => vec![a, b],
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct IndexSpec<T> {
    pub size_log2: T,
    pub endpoints: Endpoints,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<T> {
    pub label: Option<String>,
    value: Option<DenseTensor<T>>,
    indices: Vec<usize>,
}

impl<T> Tensor<T> {
    /// Incident index ids, ascending.
    pub fn indices(&self) -> &[usize] {
        &self.indices
    }

    pub fn value(&self) -> Option<&DenseTensor<T>> {
        self.value.as_ref()
    }
}

/// Tensors and indices with incidence kept in both directions.
///
/// Ids are dense: tensor `t` is `tensors()[t]`, index `i` is `indices()[i]`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorNetwork<T> {
    tensors: Vec<Tensor<T>>,
    indices: Vec<IndexSpec<T>>,
}

impl<T: Real> TensorNetwork<T> {
    /// `count` tensors with no indices yet.
    pub fn with_tensors(count: usize) -> Self {
        Self {
            tensors: (0..count)
                .map(|_| Tensor {
                    label: None,
                    value: None,
                    indices: Vec::new(),
                })
                .collect(),
            indices: Vec::new(),
        }
    }

    pub fn num_tensors(&self) -> usize {
        self.tensors.len()
    }

    pub fn num_indices(&self) -> usize {
        self.indices.len()
    }

    pub fn tensors(&self) -> &[Tensor<T>] {
        &self.tensors
    }

    pub fn tensor(&self, t: usize) -> &Tensor<T> {
        &self.tensors[t]
    }

    pub fn indices(&self) -> &[IndexSpec<T>] {
        &self.indices
    }

    #[allow(clippy::should_implement_trait)]
    pub fn index(&self, i: usize) -> &IndexSpec<T> {
        &self.indices[i]
    }

    pub fn set_label(&mut self, t: usize, label: impl Into<String>) {
        self.tensors[t].label = Some(label.into());
    }

    /// Append an index between one or two tensors and return its id.
    pub fn add_index(&mut self, size_log2: T, endpoints: Endpoints) -> Result<usize> {
        let id = self.indices.len();
        if !(size_log2 >= T::zero()) || !size_log2.is_finite() {
            return Err(Error::InvalidIndex {
                index: id,
                reason: format!("size_log2 {size_log2} is not a finite nonnegative number"),
            });
        }
        let touched = match endpoints {
            Endpoints::Open(a) => vec![a],
            Endpoints::Pair(a, b) if a == b => {
                return Err(Error::InvalidIndex {
                    index: id,
                    reason: format!("lists tensor {a} twice"),
                })
            }
            Endpoints::Pair(a, b) => vec![a, b],
        };
        for &t in &touched {
            if t >= self.tensors.len() {
                return Err(Error::UnknownTensor(t));
            }
        }
        for &t in &touched {
            self.tensors[t].indices.push(id);
        }
        self.indices.push(IndexSpec {
            size_log2,
            endpoints,
        });
        Ok(id)
    }

    /// Attach a dense value block. Its index set must equal the tensor's
    /// incidence and every dimension must match the index's `size_log2`.
    pub fn set_value(&mut self, t: usize, value: DenseTensor<T>) -> Result<()> {
        if t >= self.tensors.len() {
            return Err(Error::UnknownTensor(t));
        }
        let mut listed = value.indices().to_vec();
        listed.sort_unstable();
        if listed != self.tensors[t].indices {
            return Err(Error::InvalidValue {
                tensor: t,
                reason: format!(
                    "value indices {:?} differ from incident indices {:?}",
                    value.indices(),
                    self.tensors[t].indices
                ),
            });
        }
        for (&i, &b) in value.indices().iter().zip(value.bits()) {
            if self.indices[i].size_log2 != T::of_usize(b as usize) {
                return Err(Error::InvalidValue {
                    tensor: t,
                    reason: format!("dimension of index {i} disagrees with its size_log2"),
                });
            }
        }
        self.tensors[t].value = Some(value);
        Ok(())
    }

    /// `log2 tsize(X)`: sum of incident index sizes.
    pub fn tensor_size_log2(&self, t: usize) -> T {
        self.tensors[t]
            .indices
            .iter()
            .map(|&i| self.indices[i].size_log2)
            .sum()
    }

    pub fn is_closed(&self) -> bool {
        self.indices
            .iter()
            .all(|ix| matches!(ix.endpoints, Endpoints::Pair(..)))
    }

    pub fn has_values(&self) -> bool {
        self.tensors.iter().all(|t| t.value.is_some())
    }

    /// Log2 dimension of index `i` as an integer, if it is one.
    pub fn index_bits(&self, i: usize) -> Option<u32> {
        let s = self.indices[i].size_log2;
        (s.fract() == T::zero() && s <= T::of(32.0)).then(|| s.as_f64() as u32)
    }
}

/// Output and shared log-sizes of contracting two disjoint tensor groups.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Contraction<T> {
    pub out_log2: T,
    pub shared_log2: T,
}

impl<T: Real> Contraction<T> {
    pub fn ops_log2(&self) -> T {
        self.out_log2 + self.shared_log2
    }
}

/// Cost of contracting the groups `a` and `b` (each already contracted).
pub fn contract_indices<T: Real>(
    net: &TensorNetwork<T>,
    a: &[usize],
    b: &[usize],
) -> Result<Contraction<T>> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptyOperand);
    }
    let mut side = vec![0u8; net.num_tensors()];
    for (tag, group) in [(1u8, a), (2u8, b)] {
        for &t in group {
            let slot = side.get_mut(t).ok_or(Error::UnknownTensor(t))?;
            if *slot != 0 {
                return Err(Error::OverlappingOperands(t));
            }
            *slot = tag;
        }
    }
    let mut out = T::zero();
    let mut shared = T::zero();
    for ix in &net.indices {
        match ix.endpoints {
            Endpoints::Open(t) => {
                if side[t] != 0 {
                    out = out + ix.size_log2;
                }
            }
            Endpoints::Pair(x, y) => match (side[x], side[y]) {
                (1, 2) | (2, 1) => shared = shared + ix.size_log2,
                (0, 0) => {}
                (0, _) | (_, 0) => out = out + ix.size_log2,
                _ => {}
            },
        }
    }
    Ok(Contraction {
        out_log2: out,
        shared_log2: shared,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Objective {
    #[serde(rename = "edge")]
    EdgeCongestion,
    #[serde(rename = "vertex")]
    VertexCongestion,
    #[serde(rename = "total")]
    TotalOps,
}

impl Objective {
    pub const ALL: [Objective; 3] = [
        Objective::EdgeCongestion,
        Objective::VertexCongestion,
        Objective::TotalOps,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Objective::EdgeCongestion => "edge",
            Objective::VertexCongestion => "vertex",
            Objective::TotalOps => "total",
        }
    }
}

impl fmt::Display for Objective {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Objective {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "edge" => Ok(Objective::EdgeCongestion),
            "vertex" => Ok(Objective::VertexCongestion),
            "total" => Ok(Objective::TotalOps),
            other => Err(Error::Schema(format!(
                "unknown objective `{other}` (expected edge, vertex or total)"
            ))),
        }
    }
}

/// Costs of one contraction tree on one network, all in log2.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CostReport<T> {
    /// `None` when the tree performs no contraction (single tensor).
    pub total_ops_log2: Option<T>,
    pub vertex_congestion: T,
    pub edge_congestion: T,
    pub objective: Objective,
}

impl<T: Real> CostReport<T> {
    /// Value of the selected objective; zero ops map to `-inf`.
    pub fn value(&self) -> T {
        self.value_of(self.objective)
    }

    pub fn value_of(&self, objective: Objective) -> T {
        match objective {
            Objective::EdgeCongestion => self.edge_congestion,
            Objective::VertexCongestion => self.vertex_congestion,
            Objective::TotalOps => self.total_ops_log2.unwrap_or(T::neg_infinity()),
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "total_ops_log2": self.total_ops_log2.map(Real::as_f64),
            "vertex_congestion": self.vertex_congestion.as_f64(),
            "edge_congestion": self.edge_congestion.as_f64(),
            "objective": self.objective,
        })
    }
}

/// Evaluate a tree whose leaves are exactly the network's tensors.
pub fn evaluate_tree<T: Real>(
    net: &TensorNetwork<T>,
    tree: &ContractionTree,
    objective: Objective,
) -> Result<CostReport<T>> {
    tree.check_permutation(net.num_tensors())?;
    evaluate_subtree(net, tree, objective)
}

/// Like [`evaluate_tree`] but the leaves may be any set of distinct tensors;
/// indices leaving that set count toward the output sizes.
pub fn evaluate_subtree<T: Real>(
    net: &TensorNetwork<T>,
    tree: &ContractionTree,
    objective: Objective,
) -> Result<CostReport<T>> {
    tree.check_distinct_leaves(net.num_tensors())?;
    let mut groups: Vec<Vec<usize>> = Vec::with_capacity(tree.nodes().len());
    // ops below each node, summed as own + (left + right)
    let mut totals: Vec<T> = Vec::with_capacity(tree.nodes().len());
    let mut vertex = T::neg_infinity();
    let mut edge = T::neg_infinity();
    for &node in tree.nodes() {
        match node {
            TreeNode::Leaf(t) => {
                let size = net.tensor_size_log2(t);
                vertex = vertex.max(size);
                edge = edge.max(size);
                groups.push(vec![t]);
                totals.push(T::neg_infinity());
            }
            TreeNode::Join(l, r) => {
                let c = contract_indices(net, &groups[l], &groups[r])?;
                totals.push(log_sum(c.ops_log2(), log_sum(totals[l], totals[r])));
                vertex = vertex.max(c.ops_log2());
                edge = edge.max(c.out_log2);
                let mut merged = std::mem::take(&mut groups[l]);
                merged.append(&mut groups[r]);
                groups.push(merged);
            }
        }
    }
    let total = totals[tree.root()];
    Ok(CostReport {
        total_ops_log2: (tree.num_leaves() > 1).then_some(total),
        vertex_congestion: vertex,
        edge_congestion: edge,
        objective,
    })
}

/// Weighted graph with one vertex per tensor; parallel indices between the
/// same pair are merged by summing their log-sizes.
pub fn project_graph<T: Real>(net: &TensorNetwork<T>) -> Result<OrderingGraph<T>> {
    let mut edges = Vec::with_capacity(net.num_indices());
    for (i, ix) in net.indices.iter().enumerate() {
        match ix.endpoints {
            Endpoints::Open(t) => {
                return Err(Error::OpenIndex {
                    index: i,
                    tensor: t,
                })
            }
            Endpoints::Pair(a, b) => edges.push((a, b, ix.size_log2)),
        }
    }
    OrderingGraph::from_edges(net.num_tensors(), edges)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain(n: usize) -> TensorNetwork<f64> {
        let mut net = TensorNetwork::with_tensors(n);
        for t in 0..n - 1 {
            net.add_index(1.0, Endpoints::Pair(t, t + 1)).unwrap();
        }
        net
    }

    #[test]
    fn scalar_output_inner_product() {
        let mut net = TensorNetwork::with_tensors(2);
        net.add_index(1.0, Endpoints::Pair(0, 1)).unwrap();
        let c = contract_indices(&net, &[0], &[1]).unwrap();
        assert_eq!((c.out_log2, c.shared_log2, c.ops_log2()), (0.0, 1.0, 1.0));
    }

    #[test]
    fn matrix_product_ops() {
        // {i,j} x {j,k} with i and k open
        let mut net = TensorNetwork::with_tensors(2);
        net.add_index(1.0, Endpoints::Open(0)).unwrap();
        net.add_index(1.0, Endpoints::Pair(0, 1)).unwrap();
        net.add_index(1.0, Endpoints::Open(1)).unwrap();
        let c = contract_indices(&net, &[0], &[1]).unwrap();
        assert_eq!(c.ops_log2(), 3.0);
        assert_eq!(c.out_log2, 2.0);
    }

    #[test]
    fn contract_errors() {
        let net = chain(3);
        assert!(matches!(
            contract_indices(&net, &[0], &[0]),
            Err(Error::OverlappingOperands(0))
        ));
        assert!(matches!(
            contract_indices(&net, &[0], &[9]),
            Err(Error::UnknownTensor(9))
        ));
        assert!(matches!(
            contract_indices(&net, &[], &[1]),
            Err(Error::EmptyOperand)
        ));
    }

    #[test]
    fn single_tensor_has_no_ops() {
        let mut net = TensorNetwork::<f64>::with_tensors(1);
        net.add_index(3.0, Endpoints::Open(0)).unwrap();
        let r = evaluate_tree(&net, &ContractionTree::leaf(0), Objective::TotalOps).unwrap();
        assert_eq!(r.total_ops_log2, None);
        assert_eq!(r.value(), f64::NEG_INFINITY);
        assert_eq!((r.vertex_congestion, r.edge_congestion), (3.0, 3.0));
    }

    #[test]
    fn fig1_shape_on_closed_chain() {
        // Chain A-B-C-D-E, unit sizes; tree ((A*B)*C)*(D*E).
        // A*B: out {bc}=1, shared 1 -> ops 2
        // (AB)*C: out {cd}=1, shared 1 -> ops 2
        // D*E: out {cd}=1, shared 1 -> ops 2
        // (ABC)*(DE): out 0, shared 1 -> ops 1
        let net = chain(5);
        let ab = ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1));
        let abc = ContractionTree::join(ab, ContractionTree::leaf(2));
        let de = ContractionTree::join(ContractionTree::leaf(3), ContractionTree::leaf(4));
        let tree = ContractionTree::join(abc, de);
        let r = evaluate_tree(&net, &tree, Objective::VertexCongestion).unwrap();
        assert_eq!(r.vertex_congestion, 2.0);
        assert_eq!(r.edge_congestion, 2.0); // leaves B, C, D have two indices
                                            // 4 + 4 + 4 + 2 = 14
        assert!((r.total_ops_log2.unwrap() - 14f64.log2()).abs() < 1e-12);
        let m = evaluate_tree(&net, &tree.mirror(), Objective::VertexCongestion).unwrap();
        assert_eq!(r, m);
    }

    #[test]
    fn evaluate_rejects_bad_leaf_sets() {
        let net = chain(3);
        let t = ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1));
        assert!(matches!(
            evaluate_tree(&net, &t, Objective::TotalOps),
            Err(Error::MalformedTree(_))
        ));
        assert!(evaluate_subtree(&net, &t, Objective::TotalOps).is_ok());
    }

    #[test]
    fn projection_merges_and_rejects_open() {
        let mut net = TensorNetwork::<f64>::with_tensors(2);
        net.add_index(1.0, Endpoints::Pair(0, 1)).unwrap();
        net.add_index(1.0, Endpoints::Pair(1, 0)).unwrap();
        let g = project_graph(&net).unwrap();
        assert_eq!(g.edges(), &[(0, 1, 2.0)]);

        let g = project_graph(&chain(5)).unwrap();
        assert_eq!(
            g.edges(),
            &[(0, 1, 1.0), (1, 2, 1.0), (2, 3, 1.0), (3, 4, 1.0)]
        );

        net.add_index(1.0, Endpoints::Open(1)).unwrap();
        assert!(matches!(
            project_graph(&net),
            Err(Error::OpenIndex {
                index: 2,
                tensor: 1
            })
        ));
    }

    #[test]
    fn invalid_indices_rejected() {
        let mut net = TensorNetwork::<f64>::with_tensors(2);
        assert!(net.add_index(-1.0, Endpoints::Pair(0, 1)).is_err());
        assert!(net.add_index(1.0, Endpoints::Pair(1, 1)).is_err());
        assert!(net.add_index(1.0, Endpoints::Pair(0, 5)).is_err());
        assert_eq!(net.num_indices(), 0);
        assert!(net.tensor(0).indices().is_empty());
    }

    #[test]
    fn works_in_single_precision() {
        let mut net = TensorNetwork::<f32>::with_tensors(3);
        net.add_index(2.0, Endpoints::Pair(0, 1)).unwrap();
        net.add_index(1.0, Endpoints::Pair(1, 2)).unwrap();
        let t = ContractionTree::join(
            ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1)),
            ContractionTree::leaf(2),
        );
        let r = evaluate_tree(&net, &t, Objective::EdgeCongestion).unwrap();
        assert_eq!(r.vertex_congestion, 3.0f32);
        assert_eq!(r.edge_congestion, 3.0f32);
    }
}
