#![allow(dead_code)]

use contrakt::network::{Endpoints, OrderingGraph, TensorNetwork};
use rand::Rng;

/// Connected closed network: a random spanning tree plus extra indices,
/// parallel ones included, each of size 2^1..2^3.
pub fn random_network<R: Rng>(rng: &mut R, n: usize, extra: usize) -> TensorNetwork<f64> {
    let mut net = TensorNetwork::with_tensors(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        net.add_index(rng.gen_range(1..=3) as f64, Endpoints::Pair(u, v))
            .unwrap();
    }
    if n > 1 {
        for _ in 0..extra {
            let a = rng.gen_range(0..n);
            let mut b = rng.gen_range(0..n - 1);
            if b >= a {
                b += 1;
            }
            net.add_index(rng.gen_range(1..=3) as f64, Endpoints::Pair(a, b))
                .unwrap();
        }
    }
    net
}

pub fn random_graph<R: Rng>(rng: &mut R, n: usize, density: f64) -> OrderingGraph<f64> {
    let mut edges = Vec::new();
    for v in 1..n {
        edges.push((rng.gen_range(0..v), v, rng.gen_range(1..=3) as f64));
        for u in 0..v {
            if rng.gen_bool(density) {
                edges.push((u, v, rng.gen_range(1..=3) as f64));
            }
        }
    }
    OrderingGraph::from_edges(n, edges).unwrap()
}

/// Log2 of the exact total op count, from integer arithmetic.
pub fn total_ops_exact(net: &TensorNetwork<f64>, tree: &contrakt::ContractionTree) -> Option<f64> {
    use contrakt::TreeNode;
    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut total: u128 = 0;
    for &node in tree.nodes() {
        match node {
            TreeNode::Leaf(t) => groups.push(vec![t]),
            TreeNode::Join(l, r) => {
                let (a, b) = (groups[l].clone(), groups[r].clone());
                let mut bits = 0u32;
                for ix in net.indices() {
                    let ends = ix.endpoints.as_vec();
                    let in_a = ends.iter().filter(|t| a.contains(t)).count();
                    let in_b = ends.iter().filter(|t| b.contains(t)).count();
                    let outside = ends.len() - in_a - in_b;
                    let touches = in_a + in_b > 0;
                    let shared = in_a > 0 && in_b > 0;
                    if shared || (touches && (outside > 0 || ends.len() == 1)) {
                        bits += ix.size_log2 as u32;
                    }
                }
                total += 1u128 << bits;
                groups.push([a, b].concat());
            }
        }
    }
    (tree.num_leaves() > 1).then(|| (total as f64).log2())
}
