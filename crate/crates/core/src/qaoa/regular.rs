use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

const MAX_RESTARTS: usize = 100_000;

/// Random simple `d`-regular graph on `n` vertices from the pairing model,
/// restarting whenever a loop or repeated edge appears. Edges are `(u, v)`
/// with `u < v`, sorted.
pub fn random_regular_graph(n: usize, d: usize, seed: u64) -> Result<Vec<(usize, usize)>> {
    if n == 0 {
        return Err(Error::Infeasible("graph needs at least one vertex".into()));
    }
    if d >= n {
        return Err(Error::Infeasible(format!(
            "degree {d} must be below vertex count {n}"
        )));
    }
    if !(n * d).is_multiple_of(2) {
        return Err(Error::Infeasible(format!("n·d = {} is odd", n * d)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut points: Vec<usize> = (0..n).flat_map(|v| std::iter::repeat_n(v, d)).collect();
    'restart: for _ in 0..MAX_RESTARTS {
        points.shuffle(&mut rng);
        let mut edges = BTreeSet::new();
        for pair in points.chunks_exact(2) {
            let (u, v) = (pair[0].min(pair[1]), pair[0].max(pair[1]));
            if u == v || !edges.insert((u, v)) {
                continue 'restart;
            }
        }
        return Ok(edges.into_iter().collect());
    }
    Err(Error::Infeasible(format!(
        "no simple {d}-regular graph on {n} vertices after {MAX_RESTARTS} pairings"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn k4_is_the_only_cubic_graph_on_four_vertices() {
        for seed in 0..5 {
            let g = random_regular_graph(4, 3, seed).unwrap();
            assert_eq!(g, vec![(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]);
        }
    }

    #[test]
    fn degrees_and_counts() {
        for &(n, d) in &[(32, 3), (32, 4), (32, 5), (10, 0), (64, 3)] {
            let g = random_regular_graph(n, d, 11).unwrap();
            assert_eq!(g.len(), n * d / 2);
            let mut deg = vec![0; n];
            for &(u, v) in &g {
                assert!(u < v);
                deg[u] += 1;
                deg[v] += 1;
            }
            assert!(deg.iter().all(|&k| k == d));
        }
        assert_eq!(
            random_regular_graph(32, 3, 1).unwrap(),
            random_regular_graph(32, 3, 1).unwrap()
        );
    }

    #[test]
    fn infeasible_specs() {
        assert!(matches!(
            random_regular_graph(5, 3, 0),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            random_regular_graph(3, 3, 0),
            Err(Error::Infeasible(_))
        ));
        assert!(matches!(
            random_regular_graph(0, 0, 0),
            Err(Error::Infeasible(_))
        ));
    }
}
