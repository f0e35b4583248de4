use crate::error::{Error, Result};
use crate::network::{Endpoints, TensorNetwork};
use crate::real::Real;

use super::Ordering;

/// Marks the far end of an open index.
const OUTSIDE: usize = usize::MAX;

/// A tensor network laid out along an ordering: for every position the list
/// of `(other position, size_log2)` links, one per incident index.
#[derive(Debug, Clone)]
pub struct Chain<T> {
    links: Vec<Vec<(usize, T)>>,
}

impl<T: Real> Chain<T> {
    pub fn new(net: &TensorNetwork<T>, order: &Ordering) -> Result<Self> {
        if order.is_empty() {
            return Err(Error::EmptyOrdering);
        }
        if order.len() != net.num_tensors() {
            return Err(Error::InvalidOrdering(format!(
                "ordering covers {} tensors, network has {}",
                order.len(),
                net.num_tensors()
            )));
        }
        let links = order
            .sequence()
            .iter()
            .map(|&t| {
                net.tensor(t)
                    .indices()
                    .iter()
                    .map(|&i| {
                        let ix = net.index(i);
                        let far = match ix.endpoints {
                            Endpoints::Open(_) => OUTSIDE,
                            e => order.position_of(e.other(t).expect("closed index")),
                        };
                        (far, ix.size_log2)
                    })
                    .collect()
            })
            .collect();
        Ok(Self { links })
    }

    pub fn len(&self) -> usize {
        self.links.len()
    }

    pub fn is_empty(&self) -> bool {
        self.links.is_empty()
    }

    /// `out_log2(i, j)` for every `j` in `i..n`, extending the window one
    /// tensor at a time.
    pub fn boundary_row(&self, i: usize) -> Vec<T> {
        let n = self.len();
        let mut row = Vec::with_capacity(n - i);
        let mut out = T::zero();
        for j in i..n {
            for &(far, w) in &self.links[j] {
                if far != OUTSIDE && far >= i && far < j {
                    out = out - w;
                } else {
                    out = out + w;
                }
            }
            row.push(out);
        }
        row
    }

    /// Crossing weight of every split of the window `[i, j]`: entry `k - i`
    /// is the log-size shared between `[i, k]` and `[k+1, j]`.
    ///
    /// Starts from the links of position `i` and moves one tensor at a time
    /// from the right part to the left part.
    pub fn calc_shared(&self, i: usize, j: usize) -> Vec<T> {
        debug_assert!(i <= j && j < self.len());
        let mut shared = Vec::with_capacity(j - i);
        if i == j {
            return shared;
        }
        let mut cross = T::zero();
        for &(far, w) in &self.links[i] {
            if far != OUTSIDE && far > i && far <= j {
                cross = cross + w;
            }
        }
        shared.push(cross);
        for k in i + 1..j {
            for &(far, w) in &self.links[k] {
                if far == OUTSIDE {
                    continue;
                }
                if far > k && far <= j {
                    cross = cross + w;
                } else if far >= i && far < k {
                    cross = cross - w;
                }
            }
            shared.push(cross);
        }
        shared
    }
}

/// Crossing weights for every split of the window `[i, j]` of `order`
/// (positions are 0-based and inclusive).
pub fn calc_shared<T: Real>(
    net: &TensorNetwork<T>,
    order: &Ordering,
    i: usize,
    j: usize,
) -> Result<Vec<T>> {
    if i > j || j >= order.len() {
        return Err(Error::InvalidOrdering(format!(
            "window [{i}, {j}] outside 0..{}",
            order.len()
        )));
    }
    Ok(Chain::new(net, order)?.calc_shared(i, j))
}
