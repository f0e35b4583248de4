//! Seeded restarts of ordering followed by tree optimization.

use std::sync::atomic::{AtomicUsize, Ordering as AtomicOrdering};
use std::sync::Mutex;
use std::time::{Duration, Instant};

use crate::error::{Error, Result};
use crate::network::{
    evaluate_tree, project_graph, ContractionTree, CostReport, Objective, TensorNetwork,
};
use crate::ordering::{mla_order, MlaConfig};
use crate::real::Real;

use super::{optimize_tree, Ordering};

#[derive(Debug, Clone)]
pub struct PipelineConfig {
    pub objective: Objective,
    /// Wall-clock budget; the attempt running when it expires is finished.
    pub time_budget: Duration,
    pub base_seed: u64,
    /// Stop after this many attempts even if time remains.
    pub max_attempts: Option<usize>,
    /// Concurrent attempts. The result depends only on the set of attempts
    /// that ran, not on their interleaving.
    pub threads: usize,
    pub mla: MlaConfig,
}

impl PipelineConfig {
    pub fn new(objective: Objective, time_budget: Duration, base_seed: u64) -> Self {
        Self {
            objective,
            time_budget,
            base_seed,
            max_attempts: None,
            threads: 1,
            mla: MlaConfig::default(),
        }
    }
}

#[derive(Debug, Clone)]
pub struct PipelineResult<T> {
    pub tree: ContractionTree,
    pub report: CostReport<T>,
    pub order: Ordering,
    pub attempts: usize,
    /// Attempt index that produced the result; its seed is `base_seed + best_attempt`.
    pub best_attempt: usize,
    pub elapsed: Duration,
}

struct Candidate<T> {
    attempt: usize,
    value: T,
    tree: ContractionTree,
    order: Ordering,
}

fn better<T: Real>(a: &Candidate<T>, b: &Candidate<T>) -> bool {
    a.value < b.value || (a.value == b.value && a.attempt < b.attempt)
}

/// Repeatedly order the network's graph with a fresh seed, build the optimal
/// tree for that order, and keep the best by the selected objective.
pub fn optimize_pipeline<T: Real>(
    net: &TensorNetwork<T>,
    config: &PipelineConfig,
) -> Result<PipelineResult<T>> {
    if config.time_budget.is_zero() {
        return Err(Error::Schema("time budget must be positive".into()));
    }
    if config.max_attempts == Some(0) {
        return Err(Error::Schema("max_attempts must be positive".into()));
    }
    let graph = project_graph(net)?;
    let start = Instant::now();
    let next = AtomicUsize::new(0);
    let completed = AtomicUsize::new(0);
    let best: Mutex<Option<Candidate<T>>> = Mutex::new(None);
    let failure: Mutex<Option<Error>> = Mutex::new(None);

    let worker = || loop {
        let attempt = next.fetch_add(1, AtomicOrdering::SeqCst);
        let out_of_attempts = config.max_attempts.is_some_and(|m| attempt >= m);
        if out_of_attempts || (attempt > 0 && start.elapsed() >= config.time_budget) {
            break;
        }
        let seed = config.base_seed.wrapping_add(attempt as u64);
        let run = mla_order(&graph, seed, &config.mla)
            .and_then(|order| optimize_tree(net, &order, config.objective).map(|r| (order, r)));
        match run {
            Ok((order, (tree, value))) => {
                let cand = Candidate {
                    attempt,
                    value,
                    tree,
                    order,
                };
                let mut slot = best.lock().expect("poisoned");
                if slot.as_ref().is_none_or(|b| better(&cand, b)) {
                    *slot = Some(cand);
                }
                completed.fetch_add(1, AtomicOrdering::SeqCst);
            }
            Err(e) => {
                failure.lock().expect("poisoned").get_or_insert(e);
                break;
            }
        }
        if failure.lock().expect("poisoned").is_some() {
            break;
        }
    };

    let threads = config.threads.max(1);
    if threads == 1 {
        worker();
    } else {
        std::thread::scope(|s| {
            for _ in 0..threads {
                s.spawn(worker);
            }
        });
    }

    if let Some(e) = failure.into_inner().expect("poisoned") {
        return Err(e);
    }
    let best = best
        .into_inner()
        .expect("poisoned")
        .expect("at least one attempt");
    let report = evaluate_tree(net, &best.tree, config.objective)?;
    Ok(PipelineResult {
        tree: best.tree,
        report,
        order: best.order,
        attempts: completed.into_inner(),
        best_attempt: best.attempt,
        elapsed: start.elapsed(),
    })
}
