//! Multilevel solver for the p-sum linear arrangement objective
//! `(Σ w(uv) |σ(u) − σ(v)|^p)^(1/p)`; `p = 1` is Minimum Linear Arrangement.
//!
//! A V-cycle coarsens the graph by volume-aware matching until at most
//! [`COARSEST_MAX`] vertices remain, solves that level exhaustively, then
//! expands each coarse vertex into its members and refines by node-by-node
//! reinsertion on the way back down. On coarse levels a vertex occupies a
//! width equal to its volume.

mod coarsen;
mod exact;
mod refine;

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::network::OrderingGraph;
use crate::real::Real;
use crate::treeopt::Ordering;

pub use coarsen::{coarsen, Coarsening};
pub use exact::{solve_coarsest, COARSEST_MAX};
pub use refine::{refine, refine_traced, RefineConfig};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MlaConfig {
    pub p: f64,
    pub coarsest: usize,
    pub refine: RefineConfig,
}

impl Default for MlaConfig {
    fn default() -> Self {
        Self {
            p: 1.0,
            coarsest: COARSEST_MAX,
            refine: RefineConfig::default(),
        }
    }
}

#[inline]
pub(crate) fn stretch<T: Real>(d: T, p: T) -> T {
    if p == T::one() {
        d.abs()
    } else {
        d.abs().powf(p)
    }
}

/// Centre coordinate of every vertex when laid out in `seq` order with
/// widths equal to volumes. Unit volumes give `position + 1/2`.
pub(crate) fn coordinates<T: Real>(g: &OrderingGraph<T>, seq: &[usize], coord: &mut [T]) {
    let two = T::of(2.0);
    let mut edge = T::zero();
    for &v in seq {
        let half = g.volume(v) / two;
        coord[v] = edge + half;
        edge = edge + half + half;
    }
}

/// `Σ w |x(u) − x(v)|^p` with the p-th root not taken.
pub(crate) fn arrangement_cost<T: Real>(g: &OrderingGraph<T>, coord: &[T], p: T) -> T {
    g.edges()
        .iter()
        .map(|&(u, v, w)| w * stretch(coord[u] - coord[v], p))
        .sum()
}

/// p-sum objective of `order` over plain positions (volumes ignored).
pub fn psum_objective<T: Real>(g: &OrderingGraph<T>, order: &Ordering, p: T) -> Result<T> {
    if order.len() != g.num_vertices() {
        return Err(Error::InvalidOrdering(format!(
            "ordering has {} items, graph has {} vertices",
            order.len(),
            g.num_vertices()
        )));
    }
    if !(p > T::zero()) {
        return Err(Error::Schema(format!("p must be positive, got {p}")));
    }
    let sum: T = g
        .edges()
        .iter()
        .map(|&(u, v, w)| {
            let d = T::of_usize(order.position_of(u)) - T::of_usize(order.position_of(v));
            w * stretch(d, p)
        })
        .sum();
    Ok(if p == T::one() {
        sum
    } else {
        sum.powf(p.recip())
    })
}

/// Graphs from finest (level 0) to coarsest, with the map from each level's
/// vertices to the next level's.
#[derive(Debug, Clone)]
pub struct LevelHierarchy<T> {
    pub levels: Vec<OrderingGraph<T>>,
    pub maps: Vec<Vec<usize>>,
}

impl<T: Real> LevelHierarchy<T> {
    pub fn build(g: OrderingGraph<T>, coarsest: usize, rng: &mut ChaCha8Rng) -> Self {
        let mut levels = vec![g];
        let mut maps = Vec::new();
        loop {
            let fine = levels.last().expect("finest level");
            let n = fine.num_vertices();
            if n <= coarsest.max(1) {
                break;
            }
            let mut step = coarsen(fine, rng);
            // matching alone stalls on hubs; fall back to neighbourhood pairing
            if (step.graph.num_vertices() as f64) * 1.5 > n as f64 {
                let extra = coarsen::pair_leftovers(&step.graph, rng);
                for m in step.map.iter_mut() {
                    *m = extra.map[*m];
                }
                step.graph = extra.graph;
            }
            debug_assert!(step.graph.num_vertices() < n);
            maps.push(step.map);
            levels.push(step.graph);
        }
        Self { levels, maps }
    }

    pub fn depth(&self) -> usize {
        self.levels.len()
    }
}

/// Expand a coarse order: each coarse vertex becomes its members, shuffled.
pub fn interpolate(map: &[usize], coarse: &Ordering, rng: &mut ChaCha8Rng) -> Ordering {
    let mut members = vec![Vec::new(); coarse.len()];
    for (fine, &c) in map.iter().enumerate() {
        members[c].push(fine);
    }
    let mut seq = Vec::with_capacity(map.len());
    for &c in coarse.sequence() {
        let block = &mut members[c];
        block.shuffle(rng);
        seq.extend_from_slice(block);
    }
    Ordering::from_sequence(seq).expect("partition expansion is a bijection")
}

/// Multilevel arrangement of `g`; deterministic for a given seed.
pub fn mla_order<T: Real>(g: &OrderingGraph<T>, seed: u64, config: &MlaConfig) -> Result<Ordering> {
    if g.num_vertices() == 0 {
        return Err(Error::InvalidGraph("cannot order an empty graph".into()));
    }
    let p = T::of(config.p);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hierarchy = LevelHierarchy::build(g.clone(), config.coarsest, &mut rng);
    let top = hierarchy.levels.last().expect("nonempty hierarchy");
    let mut order = solve_coarsest(top, p)?;
    for level in (0..hierarchy.maps.len()).rev() {
        order = interpolate(&hierarchy.maps[level], &order, &mut rng);
        order = refine(
            &hierarchy.levels[level],
            &order,
            p,
            &config.refine,
            &mut rng,
        );
    }
    Ok(order)
}

/// Edge-list graph file: a `n <count>` header then one `u v w` per line.
/// Blank lines and lines starting with `#` are ignored.
pub fn graph_from_text<T: Real>(text: &str) -> Result<OrderingGraph<T>> {
    let mut lines = text
        .lines()
        .map(str::trim)
        .filter(|l| !l.is_empty() && !l.starts_with('#'));
    let header = lines
        .next()
        .ok_or_else(|| Error::Schema("graph file is empty".into()))?;
    let n = match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["n", count] => count
            .parse::<usize>()
            .map_err(|_| Error::Schema(format!("bad vertex count `{count}`")))?,
        _ => {
            return Err(Error::Schema(format!(
                "expected `n <count>` header, got `{header}`"
            )))
        }
    };
    let mut edges = Vec::new();
    for line in lines {
        let parts: Vec<_> = line.split_whitespace().collect();
        let [u, v, w] = parts.as_slice() else {
            return Err(Error::Schema(format!("expected `u v w`, got `{line}`")));
        };
        let bad = || Error::Schema(format!("cannot parse edge line `{line}`"));
        let u = u.parse::<usize>().map_err(|_| bad())?;
        let v = v.parse::<usize>().map_err(|_| bad())?;
        let w = w.parse::<f64>().map_err(|_| bad())?;
        edges.push((u, v, T::of(w)));
    }
    OrderingGraph::from_edges(n, edges)
}

pub fn graph_to_text<T: Real>(g: &OrderingGraph<T>) -> String {
    let mut s = format!("n {}\n", g.num_vertices());
    for &(u, v, w) in g.edges() {
        writeln!(s, "{u} {v} {w}").expect("write to string");
    }
    s
}

pub fn read_graph<T: Real>(path: impl AsRef<Path>) -> Result<OrderingGraph<T>> {
    graph_from_text(&fs::read_to_string(path)?)
}
