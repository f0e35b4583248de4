use crate::error::{Error, Result};
use crate::network::OrderingGraph;
use crate::real::Real;
use crate::treeopt::Ordering;

use super::{coordinates, stretch};

/// Largest graph solved by exhaustive search (8! = 40320 orders).
pub const COARSEST_MAX: usize = 8;

/// Exhaustive minimum of the arrangement cost over all orders; the
/// lexicographically smallest sequence wins ties.
///
/// Vertices are laid out with widths equal to their volumes, which reduces
/// to plain positions (and the p-sum objective) for unit volumes.
pub fn solve_coarsest<T: Real>(g: &OrderingGraph<T>, p: T) -> Result<Ordering> {
    let n = g.num_vertices();
    if n > COARSEST_MAX {
        return Err(Error::TooLarge {
            what: "coarsest graph vertex count",
            size: n,
            limit: COARSEST_MAX,
        });
    }
    let mut seq: Vec<usize> = (0..n).collect();
    let mut best_seq = seq.clone();
    let mut best = T::infinity();
    let mut coord = vec![T::zero(); n];
    loop {
        coordinates(g, &seq, &mut coord);
        let cost: T = g
            .edges()
            .iter()
            .map(|&(u, v, w)| w * stretch(coord[u] - coord[v], p))
            .sum();
        if cost < best {
            best = cost;
            best_seq.copy_from_slice(&seq);
        }
        if !next_permutation(&mut seq) {
            break;
        }
    }
    Ordering::from_sequence(best_seq)
}

/// Advance to the next lexicographic permutation; false after the last one.
fn next_permutation(seq: &mut [usize]) -> bool {
    let n = seq.len();
    if n < 2 {
        return false;
    }
    let mut i = n - 1;
    while i > 0 && seq[i - 1] >= seq[i] {
        i -= 1;
    }
    if i == 0 {
        return false;
    }
    let mut j = n - 1;
    while seq[j] <= seq[i - 1] {
        j -= 1;
    }
    seq.swap(i - 1, j);
    seq[i..].reverse();
    true
}
