use rand::seq::SliceRandom;
use rand::Rng;

use crate::error::Result;
use crate::network::OrderingGraph;
use crate::real::Real;

/// One coarsening step: the coarse graph and the fine → coarse vertex map.
#[derive(Debug, Clone)]
pub struct Coarsening<T> {
    pub graph: OrderingGraph<T>,
    pub map: Vec<usize>,
}

/// Pairwise matching that prefers heavy edges between light vertices,
/// scored `w(uv) / (vol(u) + vol(v))`.
///
/// Vertices are visited in random order; each unmatched vertex takes its best
/// unmatched neighbour (smallest id on ties). Unmatched vertices survive
/// as singletons.
pub fn coarsen<T: Real, R: Rng + ?Sized>(g: &OrderingGraph<T>, rng: &mut R) -> Coarsening<T> {
    let n = g.num_vertices();
    let mut visit: Vec<usize> = (0..n).collect();
    visit.shuffle(rng);
    let mut mate = vec![usize::MAX; n];
    for &u in &visit {
        if mate[u] != usize::MAX {
            continue;
        }
        let mut best: Option<(usize, T)> = None;
        for &(v, w) in g.neighbors(u) {
            if mate[v] != usize::MAX {
                continue;
            }
            let score = w / (g.volume(u) + g.volume(v));
            if best.is_none_or(|(_, s)| score > s) {
                best = Some((v, score));
            }
        }
        if let Some((v, _)) = best {
            mate[u] = v;
            mate[v] = u;
        }
    }
    contract_matching(g, &mate)
}

/// Second-chance aggregation for vertices the matching left alone: pair
/// singletons that share a neighbour (lightest combined volume first), then,
/// if nothing at all could be merged, pair leftovers in visiting order.
///
/// Used when plain matching stalls, e.g. on star-like graphs.
pub(crate) fn pair_leftovers<T: Real, R: Rng + ?Sized>(
    g: &OrderingGraph<T>,
    rng: &mut R,
) -> Coarsening<T> {
    let n = g.num_vertices();
    let mut visit: Vec<usize> = (0..n).collect();
    visit.shuffle(rng);
    let mut mate = vec![usize::MAX; n];
    let mut merged_any = false;
    for &u in &visit {
        if mate[u] != usize::MAX {
            continue;
        }
        let mut best: Option<(usize, T)> = None;
        for &(hub, _) in g.neighbors(u) {
            for &(v, _) in g.neighbors(hub) {
                if v == u || mate[v] != usize::MAX {
                    continue;
                }
                let vol = g.volume(u) + g.volume(v);
                if best.is_none_or(|(bv, bvol)| vol < bvol || (vol == bvol && v < bv)) {
                    best = Some((v, vol));
                }
            }
        }
        if let Some((v, _)) = best {
            mate[u] = v;
            mate[v] = u;
            merged_any = true;
        }
    }
    if !merged_any {
        let mut pending = None;
        for &u in &visit {
            if mate[u] != usize::MAX {
                continue;
            }
            match pending.take() {
                None => pending = Some(u),
                Some(p) => {
                    mate[p] = u;
                    mate[u] = p;
                }
            }
        }
    }
    contract_matching(g, &mate)
}

fn contract_matching<T: Real>(g: &OrderingGraph<T>, mate: &[usize]) -> Coarsening<T> {
    let n = g.num_vertices();
    let mut map = vec![usize::MAX; n];
    let mut volumes = Vec::new();
    for u in 0..n {
        if map[u] != usize::MAX {
            continue;
        }
        let c = volumes.len();
        map[u] = c;
        let mut vol = g.volume(u);
        if mate[u] != usize::MAX {
            map[mate[u]] = c;
            vol = vol + g.volume(mate[u]);
        }
        volumes.push(vol);
    }
    let graph = aggregate(g, &map, volumes).expect("aggregation of a valid graph");
    Coarsening { graph, map }
}

/// Coarse graph induced by `map`: crossing weights summed, internal edges dropped.
pub(crate) fn aggregate<T: Real>(
    g: &OrderingGraph<T>,
    map: &[usize],
    volumes: Vec<T>,
) -> Result<OrderingGraph<T>> {
    let edges = g
        .edges()
        .iter()
        .filter(|&&(u, v, _)| map[u] != map[v])
        .map(|&(u, v, w)| (map[u], map[v], w));
    OrderingGraph::with_volumes(volumes, edges)
}
