use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use anyhow::{bail, Context, Result};
use contrakt::network::{io, CostReport, TensorNetwork};
use contrakt::oracle::{best_over_orders, execute_tree};
use contrakt::ordering::read_graph;
use contrakt::qaoa::{self, QaoaSpec};
use contrakt::{evaluate_tree, mla_order, project_graph, MlaConfig, Objective, PipelineConfig};
use serde_json::{json, Value};

use crate::files::{append_rows, read_tree, write_tree, CsvRow};
use crate::{EvalArgs, GenerateArgs, OptimizeArgs, OrderArgs, VerificationFailed};

/// Largest qubit count for which `verify` runs the state-vector comparison.
pub const VERIFY_MAX_QUBITS: usize = 10;
pub const AMPLITUDE_TOLERANCE: f64 = 1e-9;

fn load(path: &Path) -> Result<TensorNetwork<f64>> {
    io::read_network(path).with_context(|| format!("loading network {}", path.display()))
}

/// Network id used in result rows: the file stem.
pub fn network_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn spec_from(args: &GenerateArgs) -> QaoaSpec {
    let mut spec = QaoaSpec::new(args.qubits, args.degree, args.layers, args.seed);
    if let Some(g) = &args.gammas {
        spec.gammas = g.clone();
    }
    if let Some(b) = &args.betas {
        spec.betas = b.clone();
    }
    spec
}

pub fn generate(args: &GenerateArgs) -> Result<Value> {
    let spec = spec_from(args);
    let net = qaoa::build_network::<f64>(&spec)?;
    io::write_network(&net, &args.out)
        .with_context(|| format!("writing {}", args.out.display()))?;
    Ok(json!({
        "out": args.out,
        "tensors": net.num_tensors(),
        "indices": net.num_indices(),
    }))
}

pub fn order(args: &OrderArgs) -> Result<Value> {
    let graph = match (&args.net, &args.graph) {
        (Some(net), _) => project_graph(&load(net)?)?,
        (None, Some(g)) => {
            read_graph(g).with_context(|| format!("loading graph {}", g.display()))?
        }
        (None, None) => bail!("one of --net or --graph is required"),
    };
    let config = MlaConfig {
        p: args.p,
        ..MlaConfig::default()
    };
    let ordering = mla_order(&graph, args.seed, &config)?;
    match &args.out {
        Some(path) => {
            ordering.write(path)?;
            let cost = contrakt::ordering::psum_objective(&graph, &ordering, args.p)?;
            Ok(json!({ "out": path, "psum": cost }))
        }
        None => {
            print!("{}", ordering.to_text());
            Ok(Value::Null)
        }
    }
}

/// Outcome of one `optimize` run.
#[derive(Debug, Clone)]
pub struct RunRecord {
    pub network: String,
    pub objective: Objective,
    pub seed: u64,
    pub attempts: usize,
    pub wall_s: f64,
    pub report: CostReport<f64>,
    pub order_path: Option<PathBuf>,
    pub tree_path: Option<PathBuf>,
}

impl RunRecord {
    pub fn csv_row(&self) -> CsvRow {
        CsvRow {
            network: self.network.clone(),
            objective: self.objective,
            seed: self.seed,
            attempts: self.attempts,
            value: self.report.value(),
            wall_s: self.wall_s,
        }
    }

    pub fn to_json(&self) -> Value {
        json!({
            "network": self.network,
            "objective": self.objective,
            "seed": self.seed,
            "attempts": self.attempts,
            "wall_s": self.wall_s,
            "report": self.report.to_json(),
            "order": self.order_path,
            "tree": self.tree_path,
        })
    }
}

pub fn budget(seconds: f64) -> Result<Duration> {
    if !(seconds > 0.0) || !seconds.is_finite() {
        bail!("budget must be a positive number of seconds, got {seconds}");
    }
    Ok(Duration::from_secs_f64(seconds))
}

pub fn optimize(args: &OptimizeArgs) -> Result<RunRecord> {
    let net = load(&args.net)?;
    let start = Instant::now();
    let (tree, order, report, attempts) = if args.exhaustive_orders {
        let (best, order) = best_over_orders(&net, args.objective)?;
        let report = evaluate_tree(&net, &best.tree, args.objective)?;
        (best.tree, order, report, best.trees_checked)
    } else {
        let mut config = PipelineConfig::new(args.objective, budget(args.budget_s)?, args.seed);
        config.max_attempts = args.attempts;
        config.threads = args.threads;
        let r = contrakt::optimize_pipeline(&net, &config)?;
        (r.tree, r.order, r.report, r.attempts)
    };
    let wall_s = start.elapsed().as_secs_f64();
    if let Some(path) = &args.out_tree {
        write_tree(path, &tree, &report)?;
    }
    if let Some(path) = &args.out_order {
        order
            .write(path)
            .with_context(|| format!("writing {}", path.display()))?;
    }
    let record = RunRecord {
        network: network_id(&args.net),
        objective: args.objective,
        seed: args.seed,
        attempts,
        wall_s,
        report,
        order_path: args.out_order.clone(),
        tree_path: args.out_tree.clone(),
    };
    if let Some(path) = &args.csv {
        append_rows(path, &[record.csv_row()])?;
    }
    Ok(record)
}

fn evaluate_stored(
    args: &EvalArgs,
) -> Result<(
    TensorNetwork<f64>,
    contrakt::ContractionTree,
    CostReport<f64>,
    bool,
)> {
    let net = load(&args.net)?;
    let (tree, stored) = read_tree(&args.tree)?;
    let objective = args
        .objective
        .or(stored.as_ref().map(|s| s.objective))
        .unwrap_or(Objective::VertexCongestion);
    let report = evaluate_tree(&net, &tree, objective)?;
    let consistent = stored.is_none_or(|s| s.objective != objective || s.matches(&report));
    Ok((net, tree, report, consistent))
}

pub fn eval(args: &EvalArgs) -> Result<Value> {
    let (_, _, report, _) = evaluate_stored(args)?;
    Ok(report.to_json())
}

pub fn verify(args: &EvalArgs) -> Result<Value> {
    let (net, tree, report, consistent) = evaluate_stored(args)?;
    if !consistent {
        return Err(VerificationFailed("stored report differs from re-evaluation".into()).into());
    }
    let mut out = json!({ "report": report.to_json(), "report_matches": true });
    if !net.has_values() {
        return Ok(out);
    }
    let circuit = qaoa::circuit_from_network(&net).ok();
    if circuit
        .as_ref()
        .is_some_and(|c| c.qubits > VERIFY_MAX_QUBITS)
    {
        out["amplitude"] = json!("skipped: too many qubits");
        return Ok(out);
    }
    let amp = execute_tree(&net, &tree).context("executing tree")?;
    out["amplitude"] = json!([amp.re, amp.im]);
    if let Some(circuit) = circuit {
        let reference = circuit.zero_amplitude()?;
        let diff = (amp - reference).norm();
        out["reference"] = json!([reference.re, reference.im]);
        out["difference"] = json!(diff);
        if !(diff <= AMPLITUDE_TOLERANCE) {
            return Err(VerificationFailed(format!(
                "amplitude {amp} differs from state-vector {reference} by {diff:e}"
            ))
            .into());
        }
    }
    Ok(out)
}
