mod common;

use common::random_graph;
use contrakt::network::OrderingGraph;
use contrakt::ordering::{psum_objective, refine_traced, solve_coarsest, RefineConfig};
use contrakt::{mla_order, MlaConfig, Ordering};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn brute_force_min(g: &OrderingGraph<f64>) -> f64 {
    fn rec(g: &OrderingGraph<f64>, seq: &mut Vec<usize>, used: &mut Vec<bool>, best: &mut f64) {
        let n = g.num_vertices();
        if seq.len() == n {
            let cost =
                psum_objective(g, &Ordering::from_sequence(seq.clone()).unwrap(), 1.0).unwrap();
            *best = best.min(cost);
            return;
        }
        for v in 0..n {
            if !used[v] {
                used[v] = true;
                seq.push(v);
                rec(g, seq, used, best);
                seq.pop();
                used[v] = false;
            }
        }
    }
    let mut best = f64::INFINITY;
    rec(
        g,
        &mut Vec::new(),
        &mut vec![false; g.num_vertices()],
        &mut best,
    );
    best
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn refinement_never_increases_cost(seed in any::<u64>(), n in 2usize..60, density in 0.02f64..0.3) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, density);
        let start = Ordering::random(n, seed);
        let (out, trace) = refine_traced(&g, &start, 1.0, &RefineConfig::default(), &mut rng);
        for w in trace.windows(2) {
            prop_assert!(w[1] <= w[0], "{:?}", trace);
        }
        prop_assert_eq!(psum_objective(&g, &out, 1.0).unwrap(), *trace.last().unwrap());
    }

    #[test]
    fn multilevel_is_deterministic(seed in any::<u64>(), n in 1usize..80) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let g = random_graph(&mut rng, n, 0.05);
        let cfg = MlaConfig::default();
        prop_assert_eq!(mla_order(&g, seed, &cfg).unwrap(), mla_order(&g, seed, &cfg).unwrap());
    }
}

#[test]
fn small_graphs_reach_the_optimum() {
    for seed in 0..40u64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let n = 2 + seed as usize % 7;
        let g = random_graph(&mut rng, n, 0.4);
        let best = brute_force_min(&g);
        let o = mla_order(&g, seed, &MlaConfig::default()).unwrap();
        assert_eq!(psum_objective(&g, &o, 1.0).unwrap(), best, "seed {seed}");
        assert_eq!(
            psum_objective(&g, &solve_coarsest(&g, 1.0).unwrap(), 1.0).unwrap(),
            best
        );
    }
}

#[test]
fn multilevel_beats_random_on_grids() {
    let side = 12;
    let id = |r: usize, c: usize| r * side + c;
    let mut edges = Vec::new();
    for r in 0..side {
        for c in 0..side {
            if c + 1 < side {
                edges.push((id(r, c), id(r, c + 1), 1.0));
            }
            if r + 1 < side {
                edges.push((id(r, c), id(r + 1, c), 1.0));
            }
        }
    }
    let g = OrderingGraph::from_edges(side * side, edges).unwrap();
    let ml = psum_objective(&g, &mla_order(&g, 0, &MlaConfig::default()).unwrap(), 1.0).unwrap();
    let random = psum_objective(&g, &Ordering::random(side * side, 0), 1.0).unwrap();
    // row-major order costs side·(side−1)·(side+1)
    assert!(ml < random / 4.0, "{ml} vs {random}");
    assert!(ml <= 1.3 * (side * (side - 1) * (side + 1)) as f64, "{ml}");
}
