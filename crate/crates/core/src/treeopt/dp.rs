//! Interval dynamic program over windows of a fixed chain.

use crate::network::{ContractionTree, Objective, TreeBuilder};
use crate::real::{log_sum, Real};

use super::chain::Chain;
use super::Ordering;

const UNSOLVED: u32 = u32::MAX;

/// How the window table is filled. All strategies return identical values.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Strategy {
    /// Iterative; start position descending, end position ascending.
    #[default]
    BottomUp,
    /// Memoized recursion evaluating every split.
    TopDown,
    /// Memoized recursion that skips a split as soon as its partial cost
    /// exceeds the best split found so far for the same window.
    TopDownPruned,
}

/// Solved windows of one chain. Positions are 0-based and inclusive.
#[derive(Debug, Clone)]
pub struct DpTable<T> {
    n: usize,
    objective: Objective,
    values: Vec<T>,
    splits: Vec<u32>,
}

impl<T: Real> DpTable<T> {
    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn objective(&self) -> Objective {
        self.objective
    }

    /// Optimal value for window `[i, j]`, if it was solved.
    pub fn value(&self, i: usize, j: usize) -> Option<T> {
        let cell = i * self.n + j;
        (i <= j && (i == j || self.splits[cell] != UNSOLVED)).then(|| self.values[cell])
    }

    /// Optimal split `k` (left part `[i, k]`) for a solved window with `i < j`.
    pub fn split(&self, i: usize, j: usize) -> Option<usize> {
        match self.splits.get(i * self.n + j) {
            Some(&k) if i < j && k != UNSOLVED => Some(k as usize),
            _ => None,
        }
    }

    pub fn optimum(&self) -> T {
        self.value(0, self.n - 1).expect("root window solved")
    }

    /// Optimal tree for the whole chain with leaves labelled by `order`.
    pub fn tree(&self, order: &Ordering) -> ContractionTree {
        enum Frame {
            Enter(usize, usize),
            Exit,
        }
        let mut builder = TreeBuilder::with_capacity(self.n);
        let mut built = Vec::new();
        let mut stack = vec![Frame::Enter(0, self.n - 1)];
        while let Some(frame) = stack.pop() {
            match frame {
                Frame::Enter(i, j) if i == j => built.push(builder.leaf(order.item_at(i))),
                Frame::Enter(i, j) => {
                    let k = self.split(i, j).expect("window on optimal path solved");
                    stack.push(Frame::Exit);
                    stack.push(Frame::Enter(k + 1, j));
                    stack.push(Frame::Enter(i, k));
                }
                Frame::Exit => {
                    let r = built.pop().expect("right subtree");
                    let l = built.pop().expect("left subtree");
                    built.push(builder.join(l, r));
                }
            }
        }
        builder.finish()
    }
}

/// Cost charged at a window before the children are folded in.
#[inline]
fn local_cost<T: Real>(objective: Objective, out: T, shared: T) -> T {
    match objective {
        Objective::EdgeCongestion => out,
        Objective::VertexCongestion | Objective::TotalOps => out + shared,
    }
}

/// Lower bound on [`combine`] once only the left child is known.
#[inline]
fn partial<T: Real>(objective: Objective, local: T, left: T) -> T {
    match objective {
        Objective::EdgeCongestion | Objective::VertexCongestion => local.max(left),
        Objective::TotalOps => log_sum(local, left),
    }
}

/// Window value from its local cost and its children's values. Total ops
/// are summed as `local + (left + right)`, the same association
/// `evaluate_tree` uses, so both give bit-identical results for one tree.
#[inline]
fn combine<T: Real>(objective: Objective, local: T, left: T, right: T) -> T {
    match objective {
        Objective::EdgeCongestion | Objective::VertexCongestion => local.max(left).max(right),
        Objective::TotalOps => log_sum(local, log_sum(left, right)),
    }
}

fn leaf_value<T: Real>(objective: Objective, size: T) -> T {
    match objective {
        Objective::TotalOps => T::neg_infinity(),
        _ => size,
    }
}

pub(crate) fn solve<T: Real>(
    chain: &Chain<T>,
    objective: Objective,
    strategy: Strategy,
) -> DpTable<T> {
    let n = chain.len();
    let mut table = DpTable {
        n,
        objective,
        values: vec![T::nan(); n * n],
        splits: vec![UNSOLVED; n * n],
    };
    match strategy {
        Strategy::BottomUp => bottom_up(chain, &mut table),
        Strategy::TopDown | Strategy::TopDownPruned => {
            let boundary: Vec<Vec<T>> = (0..n).map(|i| chain.boundary_row(i)).collect();
            for (i, row) in boundary.iter().enumerate() {
                table.values[i * n + i] = leaf_value(objective, row[0]);
            }
            let mut solver = TopDown {
                chain,
                boundary: &boundary,
                table: &mut table,
                prune: strategy == Strategy::TopDownPruned,
            };
            solver.solve(0, n - 1);
        }
    }
    table
}

fn bottom_up<T: Real>(chain: &Chain<T>, table: &mut DpTable<T>) {
    let n = table.n;
    let objective = table.objective;
    // by_end[j * n + i] mirrors values[i * n + j] so both child lookups in
    // the split loop walk contiguous memory.
    let mut by_end = vec![T::nan(); n * n];
    for i in (0..n).rev() {
        let boundary = chain.boundary_row(i);
        let leaf = leaf_value(objective, boundary[0]);
        table.values[i * n + i] = leaf;
        by_end[i * n + i] = leaf;
        for j in i + 1..n {
            let out = boundary[j - i];
            let shared = chain.calc_shared(i, j);
            let left_row = &table.values[i * n..i * n + j];
            let right_col = &by_end[j * n..j * n + j + 1];
            let mut best = T::infinity();
            let mut best_k = i;
            for k in i..j {
                let local = local_cost(objective, out, shared[k - i]);
                let c = combine(objective, local, left_row[k], right_col[k + 1]);
                if c < best {
                    best = c;
                    best_k = k;
                }
            }
            table.values[i * n + j] = best;
            table.splits[i * n + j] = best_k as u32;
            by_end[j * n + i] = best;
        }
    }
}

struct TopDown<'a, T> {
    chain: &'a Chain<T>,
    boundary: &'a [Vec<T>],
    table: &'a mut DpTable<T>,
    prune: bool,
}

impl<T: Real> TopDown<'_, T> {
    fn solve(&mut self, i: usize, j: usize) -> T {
        let n = self.table.n;
        let cell = i * n + j;
        if i == j || self.table.splits[cell] != UNSOLVED {
            return self.table.values[cell];
        }
        let objective = self.table.objective;
        let out = self.boundary[i][j - i];
        let shared = self.chain.calc_shared(i, j);
        let mut best = T::infinity();
        let mut best_k = i;
        for k in i..j {
            let local = local_cost(objective, out, shared[k - i]);
            if self.prune && local > best {
                continue;
            }
            let left = self.solve(i, k);
            if self.prune && partial(objective, local, left) > best {
                continue;
            }
            let c = combine(objective, local, left, self.solve(k + 1, j));
            if c < best {
                best = c;
                best_k = k;
            }
        }
        // Each window's pruning bound is its own running best, so the stored
        // value is always the exact optimum for the window.
        self.table.values[cell] = best;
        self.table.splits[cell] = best_k as u32;
        best
    }
}
