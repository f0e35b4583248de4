//! Brute-force references and a dense executor for desk-scale checks.

mod dense;
pub mod statevector;

use std::collections::HashMap;

use num_complex::Complex;

use crate::error::{Error, Result};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::network::{
    contract_indices, evaluate_subtree, evaluate_tree, ContractionTree, Objective, TensorNetwork,
    TreeBuilder, TreeNode,
};
use crate::real::Real;
use crate::treeopt::{optimize_tree, Ordering};

pub use dense::{DenseTensor, MAX_DENSE_BITS};
pub use statevector::{Circuit, Gate};

/// Chains longer than this are not enumerated (Catalan(11) = 58786 trees).
pub const MAX_PARENTHESIZATION_LEAVES: usize = 12;
/// Networks larger than this are not enumerated (945 trees at 6 leaves).
pub const MAX_TREE_LEAVES: usize = 6;
/// Networks larger than this are not searched over all orderings (8! = 40320).
pub const MAX_ORDER_TENSORS: usize = 8;

/// Best tree found by exhaustive enumeration and its objective value.
#[derive(Debug, Clone)]
pub struct Exhaustive<T> {
    pub value: T,
    pub tree: ContractionTree,
    pub trees_checked: usize,
}

/// Every binary tree whose left-to-right leaves are `leaves`.
pub fn all_parenthesizations(leaves: &[usize]) -> Vec<ContractionTree> {
    let n = leaves.len();
    let mut memo: HashMap<(usize, usize), Vec<ContractionTree>> = HashMap::new();
    for len in 1..=n {
        for i in 0..=n - len {
            let j = i + len - 1;
            let trees = if i == j {
                vec![ContractionTree::leaf(leaves[i])]
            } else {
                let mut out = Vec::new();
                for k in i..j {
                    for l in &memo[&(i, k)] {
                        for r in &memo[&(k + 1, j)] {
                            out.push(ContractionTree::join(l.clone(), r.clone()));
                        }
                    }
                }
                out
            };
            memo.insert((i, j), trees);
        }
    }
    memo.remove(&(0, n - 1)).unwrap_or_default()
}

fn minimize<T: Real>(
    trees: impl IntoIterator<Item = ContractionTree>,
    mut eval: impl FnMut(&ContractionTree) -> Result<T>,
) -> Result<Exhaustive<T>> {
    let mut best: Option<Exhaustive<T>> = None;
    let mut count = 0;
    for tree in trees {
        count += 1;
        let value = eval(&tree)?;
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(Exhaustive {
                value,
                tree,
                trees_checked: 0,
            });
        }
    }
    let mut best = best.ok_or(Error::EmptyOrdering)?;
    best.trees_checked = count;
    Ok(best)
}

/// Minimum objective over all parenthesizations of `order`.
pub fn exhaustive_parenthesizations<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    objective: Objective,
) -> Result<Exhaustive<T>> {
    if order.len() != net.num_tensors() {
        return Err(Error::InvalidOrdering(format!(
            "ordering covers {} tensors, network has {}",
            order.len(),
            net.num_tensors()
        )));
    }
    exhaustive_window(net, order, 0, order.len().saturating_sub(1), objective)
}

/// Same as [`exhaustive_parenthesizations`] restricted to positions `[i, j]`;
/// indices leaving the window count as output.
pub fn exhaustive_window<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    i: usize,
    j: usize,
    objective: Objective,
) -> Result<Exhaustive<T>> {
    if order.is_empty() {
        return Err(Error::EmptyOrdering);
    }
    if i > j || j >= order.len() {
        return Err(Error::InvalidOrdering(format!(
            "window [{i}, {j}] out of range"
        )));
    }
    let len = j - i + 1;
    if len > MAX_PARENTHESIZATION_LEAVES {
        return Err(Error::TooLarge {
            what: "chain length for exhaustive parenthesization",
            size: len,
            limit: MAX_PARENTHESIZATION_LEAVES,
        });
    }
    let trees = all_parenthesizations(&order.sequence()[i..=j]);
    minimize(trees, |t| Ok(evaluate_subtree(net, t, objective)?.value()))
}

/// Every binary tree over `leaves`, counting a tree and its mirror once.
pub fn all_trees(leaves: &[usize]) -> Vec<ContractionTree> {
    fn build(set: &[usize]) -> Vec<ContractionTree> {
        if set.len() == 1 {
            return vec![ContractionTree::leaf(set[0])];
        }
        let (first, rest) = (set[0], &set[1..]);
        let mut out = Vec::new();
        // left side always holds `first`; the right side is nonempty
        for mask in 0..(1u32 << rest.len()) - 1 {
            let mut left = vec![first];
            let mut right = Vec::new();
            for (b, &t) in rest.iter().enumerate() {
                if mask >> b & 1 == 1 {
                    left.push(t);
                } else {
                    right.push(t);
                }
            }
            let rs = build(&right);
            for l in build(&left) {
                for r in &rs {
                    out.push(ContractionTree::join(l.clone(), r.clone()));
                }
            }
        }
        out
    }
    if leaves.is_empty() {
        Vec::new()
    } else {
        build(leaves)
    }
}

/// Global minimum over all contraction trees of the network.
pub fn exhaustive_trees<T: Real>(
    net: &TensorNetwork<T>,
    objective: Objective,
) -> Result<Exhaustive<T>> {
    let n = net.num_tensors();
    if n > MAX_TREE_LEAVES {
        return Err(Error::TooLarge {
            what: "tensor count for exhaustive tree search",
            size: n,
            limit: MAX_TREE_LEAVES,
        });
    }
    let leaves: Vec<usize> = (0..n).collect();
    minimize(all_trees(&leaves), |t| {
        Ok(evaluate_tree(net, t, objective)?.value())
    })
}

/// Best tree over every ordering of the network's tensors, each solved by the
/// interval DP. Ties keep the lexicographically first ordering.
pub fn best_over_orders<T: Real>(
    net: &TensorNetwork<T>,
    objective: Objective,
) -> Result<(Exhaustive<T>, Ordering)> {
    let n = net.num_tensors();
    if n > MAX_ORDER_TENSORS {
        return Err(Error::TooLarge {
            what: "tensor count for exhaustive order search",
            size: n,
            limit: MAX_ORDER_TENSORS,
        });
    }
    if n == 0 {
        return Err(Error::EmptyOrdering);
    }
    let mut seq: Vec<usize> = (0..n).collect();
    let mut best: Option<(Exhaustive<T>, Ordering)> = None;
    let mut count = 0;
    loop {
        let order = Ordering::from_sequence(seq.clone())?;
        let (tree, value) = optimize_tree(net, &order, objective)?;
        count += 1;
        if best.as_ref().is_none_or(|(b, _)| value < b.value) {
            best = Some((
                Exhaustive {
                    value,
                    tree,
                    trees_checked: 0,
                },
                order,
            ));
        }
        if !next_permutation(&mut seq) {
            break;
        }
    }
    let (mut ex, order) = best.expect("at least one ordering");
    ex.trees_checked = count;
    Ok((ex, order))
}

fn next_permutation(seq: &mut [usize]) -> bool {
    let Some(i) = seq.windows(2).rposition(|w| w[0] < w[1]) else {
        return false;
    };
    let j = seq
        .iter()
        .rposition(|&x| x > seq[i])
        .expect("larger element exists");
    seq.swap(i, j);
    seq[i + 1..].reverse();
    true
}

/// Random contraction tree built by repeatedly joining two connected groups
/// chosen uniformly among pairs whose contraction stays within
/// `max_ops_log2`. When no pair qualifies the cheapest is taken; disconnected
/// components are joined last.
pub fn random_tree<T: Real>(
    net: &TensorNetwork<T>,
    seed: u64,
    max_ops_log2: T,
) -> Result<ContractionTree> {
    let n = net.num_tensors();
    if n == 0 {
        return Err(Error::EmptyOrdering);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut builder = TreeBuilder::with_capacity(n);
    let mut groups: Vec<(Vec<usize>, usize)> = (0..n).map(|t| (vec![t], builder.leaf(t))).collect();
    while groups.len() > 1 {
        let mut within = Vec::new();
        let mut cheapest: Option<(T, usize, usize)> = None;
        for a in 0..groups.len() {
            for b in a + 1..groups.len() {
                let c = contract_indices(net, &groups[a].0, &groups[b].0)?;
                if c.shared_log2 <= T::zero() {
                    continue;
                }
                let ops = c.ops_log2();
                if ops <= max_ops_log2 {
                    within.push((a, b));
                }
                if cheapest.is_none_or(|(best, _, _)| ops < best) {
                    cheapest = Some((ops, a, b));
                }
            }
        }
        let (a, b) = if !within.is_empty() {
            within[rng.gen_range(0..within.len())]
        } else if let Some((_, a, b)) = cheapest {
            (a, b)
        } else {
            (0, 1)
        };
        let (mut gb, nb) = groups.swap_remove(b);
        let (ga, na) = &mut groups[a];
        ga.append(&mut gb);
        *na = if rng.gen_bool(0.5) {
            builder.join(*na, nb)
        } else {
            builder.join(nb, *na)
        };
    }
    Ok(builder.finish())
}

/// Contract the network exactly along `tree` and return the scalar.
pub fn execute_tree<T: Real>(net: &TensorNetwork<T>, tree: &ContractionTree) -> Result<Complex<T>> {
    tree.check_permutation(net.num_tensors())?;
    let mut results: Vec<Option<DenseTensor<T>>> = Vec::with_capacity(tree.nodes().len());
    for &node in tree.nodes() {
        let value = match node {
            TreeNode::Leaf(t) => net
                .tensor(t)
                .value()
                .cloned()
                .ok_or(Error::MissingValue(t))?,
            TreeNode::Join(l, r) => {
                let a = results[l].take().expect("child evaluated once");
                let b = results[r].take().expect("child evaluated once");
                a.contract(&b)?
            }
        };
        results.push(Some(value));
    }
    let root = results.pop().flatten().expect("root");
    if root.rank() != 0 {
        return Err(Error::OpenResult(root.indices().to_vec()));
    }
    Ok(root.values()[0])
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::network::Endpoints;

    #[test]
    fn enumeration_sizes() {
        assert_eq!(all_parenthesizations(&[0, 1]).len(), 1);
        assert_eq!(all_parenthesizations(&[0, 1, 2, 3, 4]).len(), 14);
        assert_eq!(
            all_parenthesizations(&(0..9).collect::<Vec<_>>()).len(),
            1430
        );
        // (2n-3)!! labelled unordered binary trees
        assert_eq!(all_trees(&[0, 1]).len(), 1);
        assert_eq!(all_trees(&[0, 1, 2]).len(), 3);
        assert_eq!(all_trees(&[0, 1, 2, 3]).len(), 15);
        assert_eq!(all_trees(&(0..6).collect::<Vec<_>>()).len(), 945);
        for t in all_parenthesizations(&[3, 1, 4, 0]) {
            assert_eq!(t.leaves(), vec![3, 1, 4, 0]);
        }
    }

    #[test]
    fn permutations_are_visited_once() {
        let mut seq = vec![0, 1, 2, 3];
        let mut seen = vec![seq.clone()];
        while next_permutation(&mut seq) {
            seen.push(seq.clone());
        }
        assert_eq!(seen.len(), 24);
        assert_eq!(seen.last().unwrap(), &vec![3, 2, 1, 0]);
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 24);
    }

    #[test]
    fn random_trees_are_valid_and_seeded() {
        let mut net = TensorNetwork::<f64>::with_tensors(6);
        for t in 0..5 {
            net.add_index(1.0, Endpoints::Pair(t, t + 1)).unwrap();
        }
        net.add_index(2.0, Endpoints::Pair(0, 5)).unwrap();
        for seed in 0..10 {
            let tree = random_tree(&net, seed, 4.0).unwrap();
            tree.check_permutation(6).unwrap();
            assert_eq!(tree, random_tree(&net, seed, 4.0).unwrap());
        }
        // disconnected pieces still end in one tree
        let net = TensorNetwork::<f64>::with_tensors(3);
        random_tree(&net, 0, 0.0)
            .unwrap()
            .check_permutation(3)
            .unwrap();
    }

    #[test]
    fn limits() {
        let net = TensorNetwork::<f64>::with_tensors(7);
        assert!(matches!(
            exhaustive_trees(&net, Objective::TotalOps),
            Err(Error::TooLarge { .. })
        ));
        let net = TensorNetwork::<f64>::with_tensors(13);
        assert!(
            exhaustive_parenthesizations(&net, &Ordering::identity(13), Objective::TotalOps)
                .is_err()
        );
    }

    fn vector(net: &mut TensorNetwork<f64>, t: usize, i: usize, v: [f64; 2]) {
        let d = DenseTensor::new(
            vec![i],
            vec![1],
            v.iter().map(|&x| Complex::new(x, 0.0)).collect(),
        )
        .unwrap();
        net.set_value(t, d).unwrap();
    }

    #[test]
    fn inner_product() {
        let mut net = TensorNetwork::with_tensors(2);
        net.add_index(1.0, Endpoints::Pair(0, 1)).unwrap();
        vector(&mut net, 0, 0, [1.0, 0.0]);
        vector(&mut net, 1, 0, [1.0, 0.0]);
        let tree = ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1));
        assert_eq!(execute_tree(&net, &tree).unwrap(), Complex::new(1.0, 0.0));
    }

    #[test]
    fn identity_chain_with_caps() {
        // e0 - I - I - I - e0
        let mut net = TensorNetwork::with_tensors(5);
        for t in 0..4 {
            net.add_index(1.0, Endpoints::Pair(t, t + 1)).unwrap();
        }
        vector(&mut net, 0, 0, [1.0, 0.0]);
        vector(&mut net, 4, 3, [1.0, 0.0]);
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        for t in 1..4 {
            let id =
                DenseTensor::new(vec![t - 1, t], vec![1, 1], vec![one, zero, zero, one]).unwrap();
            net.set_value(t, id).unwrap();
        }
        for tree in all_trees(&[0, 1, 2, 3, 4]).into_iter().step_by(7) {
            assert_eq!(execute_tree(&net, &tree).unwrap(), one);
        }
    }

    #[test]
    fn executor_errors() {
        let mut net = TensorNetwork::with_tensors(2);
        net.add_index(1.0, Endpoints::Pair(0, 1)).unwrap();
        net.add_index(1.0, Endpoints::Open(1)).unwrap();
        let tree = ContractionTree::join(ContractionTree::leaf(0), ContractionTree::leaf(1));
        assert!(matches!(
            execute_tree(&net, &tree),
            Err(Error::MissingValue(0))
        ));
        vector(&mut net, 0, 0, [1.0, 2.0]);
        let m = DenseTensor::new(vec![0, 1], vec![1, 1], vec![Complex::new(1.0, 0.0); 4]).unwrap();
        net.set_value(1, m).unwrap();
        assert!(matches!(execute_tree(&net, &tree), Err(Error::OpenResult(v)) if v == vec![1]));
    }
}
