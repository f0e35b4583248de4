//! Batch runs over a matrix of generated QAOA instances.
//!
//! The matrix file is TOML:
//!
//! ```toml
//! qubits = [32]
//! degrees = [3, 4, 5]
//! layers = [2, 3, 4, 5]
//! replicates = 10
//! objective = "vertex"
//! seed = 0
//! baseline_orders = 20
//! ```
//!
//! Each instance is named `qaoa_n{n}_d{d}_p{p}_r{r}` and uses seed
//! `seed + r` for both the graph and the pipeline. Rows already present in
//! the CSV are skipped, so an interrupted run can be resumed.

use std::collections::{BTreeMap, HashSet};
use std::fs::{self, OpenOptions};
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering as AtomicOrdering};
use std::sync::mpsc;
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use contrakt::network::TensorNetwork;
use contrakt::qaoa::{self, QaoaSpec};
use contrakt::{optimize_pipeline, optimize_tree, Objective, Ordering, PipelineConfig};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::commands::budget;
use crate::files::{append_rows, read_rows, CsvRow};
use crate::BenchArgs;

pub const THREADS_ENV: &str = "CONTRAKT_THREADS";

fn one() -> usize {
    1
}

fn vertex() -> Objective {
    Objective::VertexCongestion
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Matrix {
    pub qubits: Vec<usize>,
    pub degrees: Vec<usize>,
    pub layers: Vec<usize>,
    #[serde(default = "one")]
    pub replicates: usize,
    #[serde(default = "vertex")]
    pub objective: Objective,
    #[serde(default)]
    pub seed: u64,
    /// Pipeline threads inside one instance.
    #[serde(default = "one")]
    pub threads_per_instance: usize,
    /// Uniformly random orders solved per instance for the baseline; 0 skips it.
    #[serde(default)]
    pub baseline_orders: usize,
}

#[derive(Debug, Clone)]
pub struct Instance {
    pub name: String,
    pub group: String,
    pub spec: QaoaSpec,
}

impl Matrix {
    pub fn from_toml(text: &str) -> Result<Self> {
        let m: Self = toml::from_str(text).context("parsing bench matrix")?;
        if m.qubits.is_empty() || m.degrees.is_empty() || m.layers.is_empty() || m.replicates == 0 {
            bail!("bench matrix has an empty axis");
        }
        Ok(m)
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_toml(
            &fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?,
        )
    }

    pub fn instances(&self) -> Vec<Instance> {
        let mut out = Vec::new();
        for &n in &self.qubits {
            for &d in &self.degrees {
                for &p in &self.layers {
                    for r in 0..self.replicates {
                        let group = format!("qaoa_n{n}_d{d}_p{p}");
                        out.push(Instance {
                            name: format!("{group}_r{r}"),
                            group,
                            spec: QaoaSpec::new(n, d, p, self.seed + r as u64),
                        });
                    }
                }
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BaselineRow {
    pub network: String,
    pub objective: Objective,
    pub orders: usize,
    pub median_value: f64,
}

pub fn median(values: &[f64]) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let m = v.len() / 2;
    if v.is_empty() {
        f64::NAN
    } else if v.len() % 2 == 1 {
        v[m]
    } else {
        (v[m - 1] + v[m]) / 2.0
    }
}

/// DP optimum for each of `count` uniformly random orders.
pub fn random_order_values(
    net: &TensorNetwork<f64>,
    objective: Objective,
    count: usize,
    seed: u64,
) -> Result<Vec<f64>> {
    (0..count as u64)
        .map(|k| {
            let order = Ordering::random(
                net.num_tensors(),
                seed.wrapping_mul(1_000_003).wrapping_add(k),
            );
            Ok(optimize_tree(net, &order, objective)?.1)
        })
        .collect()
}

/// Concurrent instances: `CONTRAKT_THREADS` if set, else the core count.
pub fn concurrency() -> Result<usize> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => match v.trim().parse::<usize>() {
            Ok(k) if k > 0 => Ok(k),
            _ => bail!("{THREADS_ENV} must be a positive integer, got `{v}`"),
        },
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

enum Outcome {
    Row(CsvRow),
    Baseline(BaselineRow),
}

struct Job<'a> {
    instance: &'a Instance,
    pipeline: bool,
    baseline: bool,
}

fn run_job(
    job: &Job,
    matrix: &Matrix,
    budget: Duration,
    send: &mpsc::Sender<Result<Outcome>>,
) -> Result<()> {
    let inst = job.instance;
    let net = qaoa::build_network::<f64>(&inst.spec)?;
    if job.pipeline {
        let mut config = PipelineConfig::new(matrix.objective, budget, inst.spec.seed);
        config.threads = matrix.threads_per_instance;
        let start = Instant::now();
        let r = optimize_pipeline(&net, &config)?;
        let row = CsvRow {
            network: inst.name.clone(),
            objective: matrix.objective,
            seed: inst.spec.seed,
            attempts: r.attempts,
            value: r.report.value(),
            wall_s: start.elapsed().as_secs_f64(),
        };
        send.send(Ok(Outcome::Row(row))).ok();
    }
    if job.baseline {
        let values = random_order_values(
            &net,
            matrix.objective,
            matrix.baseline_orders,
            inst.spec.seed,
        )?;
        send.send(Ok(Outcome::Baseline(BaselineRow {
            network: inst.name.clone(),
            objective: matrix.objective,
            orders: values.len(),
            median_value: median(&values),
        })))
        .ok();
    }
    Ok(())
}

fn read_baseline(path: &Path) -> Result<Vec<BaselineRow>> {
    if !path.exists() {
        return Ok(Vec::new());
    }
    let mut r =
        csv::Reader::from_path(path).with_context(|| format!("opening {}", path.display()))?;
    r.deserialize()
        .collect::<Result<Vec<BaselineRow>, _>>()
        .with_context(|| format!("parsing {}", path.display()))
}

fn append_baseline(path: &Path, row: &BaselineRow) -> Result<()> {
    let fresh = fs::metadata(path).map(|m| m.len() == 0).unwrap_or(true);
    let file = OpenOptions::new().create(true).append(true).open(path)?;
    let mut w = csv::WriterBuilder::new()
        .has_headers(fresh)
        .from_writer(file);
    w.serialize(row)?;
    w.flush()?;
    Ok(())
}

pub fn default_baseline_path(csv: &Path) -> PathBuf {
    let stem = csv
        .file_stem()
        .map_or("bench".into(), |s| s.to_string_lossy().into_owned());
    csv.with_file_name(format!("{stem}_baseline.csv"))
}

/// Run every pending instance of the matrix, appending rows as they finish.
pub fn run_matrix(
    matrix: &Matrix,
    budget: Duration,
    csv: &Path,
    baseline_csv: &Path,
) -> Result<Value> {
    let instances = matrix.instances();
    let key = |network: &str, objective: Objective| (network.to_owned(), objective);
    let done: HashSet<_> = read_rows(csv)?
        .iter()
        .map(|r| key(&r.network, r.objective))
        .collect();
    let base_done: HashSet<_> = read_baseline(baseline_csv)?
        .iter()
        .map(|r| key(&r.network, r.objective))
        .collect();
    let jobs: Vec<Job> = instances
        .iter()
        .map(|inst| Job {
            instance: inst,
            pipeline: !done.contains(&key(&inst.name, matrix.objective)),
            baseline: matrix.baseline_orders > 0
                && !base_done.contains(&key(&inst.name, matrix.objective)),
        })
        .filter(|j| j.pipeline || j.baseline)
        .collect();

    let workers = concurrency()?.min(jobs.len()).max(1);
    let next = AtomicUsize::new(0);
    let stop = AtomicBool::new(false);
    let (send, recv) = mpsc::channel::<Result<Outcome>>();
    let mut written = 0;
    let mut failure = None;
    std::thread::scope(|s| {
        for _ in 0..workers {
            let send = send.clone();
            let (jobs, next, stop) = (&jobs, &next, &stop);
            s.spawn(move || loop {
                let k = next.fetch_add(1, AtomicOrdering::SeqCst);
                if k >= jobs.len() || stop.load(AtomicOrdering::SeqCst) {
                    break;
                }
                if let Err(e) = run_job(&jobs[k], matrix, budget, &send) {
                    stop.store(true, AtomicOrdering::SeqCst);
                    send.send(Err(e.context(format!("instance {}", jobs[k].instance.name))))
                        .ok();
                }
            });
        }
        drop(send);
        // the only writer of both files
        for msg in recv {
            let res = match msg {
                Ok(Outcome::Row(row)) => append_rows(csv, &[row]).map(|_| written += 1),
                Ok(Outcome::Baseline(row)) => append_baseline(baseline_csv, &row),
                Err(e) => Err(e),
            };
            if let Err(e) = res {
                stop.store(true, AtomicOrdering::SeqCst);
                failure.get_or_insert(e);
            }
        }
    });
    if let Some(e) = failure {
        return Err(e);
    }
    summarize(matrix, &instances, csv, baseline_csv, written)
}

fn summarize(
    matrix: &Matrix,
    instances: &[Instance],
    csv: &Path,
    baseline_csv: &Path,
    written: usize,
) -> Result<Value> {
    let group_of: BTreeMap<&str, &str> = instances
        .iter()
        .map(|i| (i.name.as_str(), i.group.as_str()))
        .collect();
    let mut pipeline: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    let mut baseline: BTreeMap<&str, Vec<f64>> = BTreeMap::new();
    for r in read_rows(csv)? {
        if let (Some(g), true) = (
            group_of.get(r.network.as_str()),
            r.objective == matrix.objective,
        ) {
            pipeline.entry(g).or_default().push(r.value);
        }
    }
    for r in read_baseline(baseline_csv)? {
        if let (Some(g), true) = (
            group_of.get(r.network.as_str()),
            r.objective == matrix.objective,
        ) {
            baseline.entry(g).or_default().push(r.median_value);
        }
    }
    let groups: Vec<Value> = pipeline
        .iter()
        .map(|(g, v)| {
            json!({
                "group": g,
                "instances": v.len(),
                "median_value": median(v),
                "median_random_order_value": baseline.get(g).map(|b| median(b)),
            })
        })
        .collect();
    Ok(json!({
        "csv": csv,
        "rows_written": written,
        "instances": instances.len(),
        "objective": matrix.objective,
        "groups": groups,
    }))
}

pub fn run(args: &BenchArgs) -> Result<Value> {
    let matrix = Matrix::read(&args.matrix)?;
    let baseline = args
        .baseline_csv
        .clone()
        .unwrap_or_else(|| default_baseline_path(&args.csv));
    run_matrix(&matrix, budget(args.budget_s)?, &args.csv, &baseline)
}
