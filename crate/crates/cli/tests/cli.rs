use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use contrakt::network::{io, Endpoints, TensorNetwork};
use contrakt::oracle::exhaustive_trees;
use contrakt::{evaluate_tree, ContractionTree, Objective};
use contrakt_cli::files::{read_rows, read_tree};
use serde_json::Value;

fn contrakt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contrakt"))
        .args(args)
        .output()
        .unwrap()
}

fn ok(args: &[&str]) -> Value {
    let out = contrakt(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn chain(n: usize) -> TensorNetwork<f64> {
    let mut net = TensorNetwork::with_tensors(n);
    for t in 0..n - 1 {
        net.add_index(1.0, Endpoints::Pair(t, t + 1)).unwrap();
    }
    net
}

fn ring_with_chords(n: usize) -> TensorNetwork<f64> {
    let mut net = TensorNetwork::with_tensors(n);
    for t in 0..n {
        net.add_index(1.0 + (t % 3) as f64, Endpoints::Pair(t, (t + 1) % n))
            .unwrap();
    }
    net.add_index(2.0, Endpoints::Pair(0, n / 2)).unwrap();
    net
}

#[test]
fn generate_is_deterministic_and_validates() {
    let dir = tempfile::tempdir().unwrap();
    let (a, b) = (dir.path().join("a.json"), dir.path().join("b.json"));
    for path in [&a, &b] {
        let v = ok(&[
            "generate",
            "--qubits",
            "32",
            "--degree",
            "3",
            "--layers",
            "2",
            "--seed",
            "1",
            "--out",
            p(path),
        ]);
        assert_eq!(v["tensors"], 256);
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
    let bad = contrakt(&[
        "generate",
        "--qubits",
        "5",
        "--degree",
        "3",
        "--layers",
        "1",
        "--out",
        p(&a),
    ]);
    assert_eq!(bad.status.code(), Some(3));
    let missing = contrakt(&["generate", "--qubits", "5"]);
    assert_eq!(missing.status.code(), Some(2));
}

#[test]
fn optimize_outputs_re_evaluate_exactly() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("ring10.json");
    io::write_network(&ring_with_chords(10), &net_path).unwrap();
    let (tree, order, csv) = (
        dir.path().join("t.json"),
        dir.path().join("o.txt"),
        dir.path().join("r.csv"),
    );
    for obj in ["edge", "vertex", "total"] {
        ok(&[
            "optimize",
            "--net",
            p(&net_path),
            "--objective",
            obj,
            "--budget-s",
            "1",
            "--seed",
            "3",
            "--out-tree",
            p(&tree),
            "--out-order",
            p(&order),
            "--csv",
            p(&csv),
        ]);
        let net = io::read_network::<f64>(&net_path).unwrap();
        let (t, stored) = read_tree(&tree).unwrap();
        let report = evaluate_tree(&net, &t, obj.parse().unwrap()).unwrap();
        assert!(stored.unwrap().matches(&report));
        let row = read_rows(&csv).unwrap().pop().unwrap();
        assert_eq!(row.network, "ring10");
        assert_eq!(row.value, report.value());
        assert!(row.attempts >= 1);
        assert_eq!(fs::read_to_string(&order).unwrap().lines().count(), 10);
    }
    assert_eq!(read_rows(&csv).unwrap().len(), 3);
}

#[test]
fn vertex_objective_is_at_least_edge_objective() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("ring.json");
    io::write_network(&ring_with_chords(14), &net_path).unwrap();
    let value = |obj: &str| {
        let v = ok(&[
            "optimize",
            "--net",
            p(&net_path),
            "--objective",
            obj,
            "--budget-s",
            "5",
            "--attempts",
            "3",
        ]);
        assert_eq!(v["attempts"], 3);
        v["report"][if obj == "edge" {
            "edge_congestion"
        } else {
            "vertex_congestion"
        }]
        .as_f64()
        .unwrap()
    };
    assert!(value("vertex") >= value("edge"));
}

#[test]
fn exhaustive_orders_match_tree_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("r6.json");
    let net = ring_with_chords(6);
    io::write_network(&net, &net_path).unwrap();
    for obj in Objective::ALL {
        let v = ok(&[
            "optimize",
            "--net",
            p(&net_path),
            "--objective",
            obj.as_str(),
            "--exhaustive-orders",
        ]);
        let oracle = exhaustive_trees(&net, obj).unwrap().value;
        let key = match obj {
            Objective::EdgeCongestion => "edge_congestion",
            Objective::VertexCongestion => "vertex_congestion",
            Objective::TotalOps => "total_ops_log2",
        };
        assert_eq!(v["report"][key].as_f64().unwrap(), oracle);
        assert_eq!(v["attempts"], 720);
    }
}

#[test]
fn eval_and_verify() {
    let dir = tempfile::tempdir().unwrap();
    let net_path = dir.path().join("chain5.json");
    io::write_network(&chain(5), &net_path).unwrap();
    let tree_path = dir.path().join("fig.json");
    let l = ContractionTree::leaf;
    let fig = ContractionTree::join(
        ContractionTree::join(ContractionTree::join(l(0), l(1)), l(2)),
        ContractionTree::join(l(3), l(4)),
    );
    fs::write(&tree_path, fig.to_json().to_string()).unwrap();
    let r = ok(&["eval", "--net", p(&net_path), "--tree", p(&tree_path)]);
    assert_eq!(r["vertex_congestion"], 2.0);
    assert_eq!(r["edge_congestion"], 2.0);
    assert!((r["total_ops_log2"].as_f64().unwrap() - 14f64.log2()).abs() < 1e-12);

    let short = ContractionTree::join(
        ContractionTree::join(l(0), l(1)),
        ContractionTree::join(l(2), l(2)),
    );
    fs::write(&tree_path, short.to_json().to_string()).unwrap();
    assert_eq!(
        contrakt(&["eval", "--net", p(&net_path), "--tree", p(&tree_path)])
            .status
            .code(),
        Some(2)
    );

    // tampered stored report
    let doc = serde_json::json!({
        "tree": fig.to_json(),
        "report": {"total_ops_log2": 1.0, "vertex_congestion": 2.0, "edge_congestion": 2.0, "objective": "vertex"},
    });
    fs::write(&tree_path, doc.to_string()).unwrap();
    assert_eq!(
        contrakt(&["verify", "--net", p(&net_path), "--tree", p(&tree_path)])
            .status
            .code(),
        Some(4)
    );
}

#[test]
fn verify_qaoa_amplitude() {
    let dir = tempfile::tempdir().unwrap();
    let (net, tree) = (dir.path().join("q6.json"), dir.path().join("t.json"));
    ok(&[
        "generate",
        "--qubits",
        "6",
        "--degree",
        "3",
        "--layers",
        "2",
        "--out",
        p(&net),
    ]);
    ok(&[
        "optimize",
        "--net",
        p(&net),
        "--budget-s",
        "0.5",
        "--out-tree",
        p(&tree),
    ]);
    let v = ok(&["verify", "--net", p(&net), "--tree", p(&tree)]);
    assert!(v["difference"].as_f64().unwrap() < 1e-9);
}

#[test]
fn order_command() {
    let dir = tempfile::tempdir().unwrap();
    let graph = dir.path().join("g.txt");
    fs::write(&graph, "n 4\n0 2 1\n2 1 1\n1 3 1\n").unwrap();
    let out = contrakt(&["order", "--graph", p(&graph)]);
    assert!(out.status.success());
    let seq: Vec<usize> = String::from_utf8(out.stdout)
        .unwrap()
        .lines()
        .map(|l| l.parse().unwrap())
        .collect();
    assert!(seq == [0, 2, 1, 3] || seq == [3, 1, 2, 0], "{seq:?}");
}

#[test]
fn bench_matrix_resumes_without_duplicates() {
    let dir = tempfile::tempdir().unwrap();
    let (matrix, csv) = (dir.path().join("m.toml"), dir.path().join("bench.csv"));
    fs::write(
        &matrix,
        "qubits = [4, 6]\ndegrees = [3]\nlayers = [1, 2]\nreplicates = 2\nbaseline_orders = 3\n",
    )
    .unwrap();
    let run = || {
        Command::new(env!("CARGO_BIN_EXE_contrakt"))
            .args([
                "bench",
                "--matrix",
                p(&matrix),
                "--budget-s",
                "0.1",
                "--csv",
                p(&csv),
            ])
            .env("CONTRAKT_THREADS", "2")
            .output()
            .unwrap()
    };
    assert!(run().status.success());
    let rows = read_rows(&csv).unwrap();
    assert_eq!(rows.len(), 8);
    // drop the last row as if the run had been interrupted
    let text = fs::read_to_string(&csv).unwrap();
    let kept: Vec<&str> = text.lines().take(8).collect();
    fs::write(&csv, kept.join("\n") + "\n").unwrap();
    let out = run();
    assert!(out.status.success());
    let summary: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(summary["rows_written"], 1);
    let mut names: Vec<String> = read_rows(&csv)
        .unwrap()
        .into_iter()
        .map(|r| r.network)
        .collect();
    assert_eq!(names.len(), 8);
    names.sort();
    names.dedup();
    assert_eq!(names.len(), 8);
    assert_eq!(
        fs::read_to_string(dir.path().join("bench_baseline.csv"))
            .unwrap()
            .lines()
            .count(),
        9
    );
}
