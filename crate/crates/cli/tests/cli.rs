use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use qnetcap_core::{edge_capacity, LossParams};
use serde_json::Value;

fn qnetcap(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qnetcap"))
        .args(args)
        .env_remove("QNETCAP_THREADS")
        .output()
        .expect("binary runs")
}

fn json_ok(args: &[&str]) -> Value {
    let out = qnetcap(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn write_graph(dir: &Path, name: &str, r_km: f64, nodes: &[(f64, f64)], edges: &[(usize, usize)]) -> String {
    let doc = serde_json::json!({
        "R_km": r_km,
        "nodes": nodes.iter().enumerate()
            .map(|(i, (x, y))| serde_json::json!({"id": i, "x_km": x, "y_km": y}))
            .collect::<Vec<_>>(),
        "edges": edges.iter().map(|(u, v)| serde_json::json!({"u": u, "v": v})).collect::<Vec<_>>(),
    });
    let path = dir.join(name);
    fs::write(&path, doc.to_string()).unwrap();
    path_str(&path).to_string()
}

#[test]
fn generate_writes_requested_nodes() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    let v = json_ok(&["generate", "--model", "waxman", "--n", "100", "--alpha", "0.1", "--seed", "7", "--out", path_str(&out)]);
    assert_eq!(v["nodes"], 100);
    assert!((v["R_km"].as_f64().unwrap() - 799.03).abs() < 0.01);
    let doc: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(doc["nodes"].as_array().unwrap().len(), 100);
}

#[test]
fn scale_free_edge_count() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("sf.json");
    let v = json_ok(&["generate", "--model", "scale_free", "--n", "50", "--m", "2", "--r-km", "500", "--seed", "1", "--out", path_str(&out)]);
    assert_eq!(v["edges"], 97);
}

#[test]
fn missing_node_count_is_a_usage_error() {
    let out = qnetcap(&["generate", "--model", "waxman", "--r-km", "100", "--out", "x.json"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn omitted_seed_is_logged() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("g.json");
    let out = qnetcap(&["generate", "--model", "erdos_renyi", "--n", "20", "--r-km", "100", "--p", "0.3", "--out", path_str(&out_path)]);
    assert!(out.status.success());
    let stderr = String::from_utf8_lossy(&out.stderr);
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(stderr.contains(&format!("master seed {}", v["seed"])), "{stderr}");
}

#[test]
fn invalid_parameters_fail() {
    let out = qnetcap(&["generate", "--model", "scale_free", "--n", "2", "--m", "2", "--r-km", "100", "--out", "/dev/null"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
}

#[test]
fn capacity_queries() {
    let dir = tempfile::tempdir().unwrap();
    let single = write_graph(dir.path(), "one.json", 100.0, &[(0.0, 0.0), (50.0, 0.0)], &[(0, 1)]);
    let v = json_ok(&["capacity", "--graph", &single, "--s", "0", "--t", "1"]);
    let expected = edge_capacity(50.0, &LossParams::default()).unwrap();
    assert_eq!(v["capacity"].as_f64().unwrap(), expected);
    assert_eq!(v["end_ratio"], 1.0);
    assert_eq!(v["d_G_km"], 50.0);

    let split = write_graph(dir.path(), "two.json", 100.0, &[(0.0, 0.0), (50.0, 0.0), (0.0, 60.0)], &[(0, 1)]);
    let v = json_ok(&["capacity", "--graph", &split, "--s", "0", "--t", "2"]);
    assert_eq!(v["capacity"], 0.0);
    assert_eq!(v["connected"], false);
    assert_eq!(v["d_G_km"], Value::Null);

    let out = qnetcap(&["capacity", "--graph", &split, "--s", "0", "--t", "9"]);
    assert_ne!(out.status.code(), Some(0));
}

#[test]
fn four_node_instance_matches_enumeration() {
    let dir = tempfile::tempdir().unwrap();
    let nodes = [(0.0, 0.0), (90.0, 10.0), (30.0, 20.0), (40.0, -25.0)];
    let edges = [(0, 2), (0, 3), (2, 1), (3, 1), (2, 3)];
    let graph = write_graph(dir.path(), "four.json", 100.0, &nodes, &edges);
    let loss = LossParams::default();
    let caps: Vec<f64> = edges
        .iter()
        .map(|&(u, v)| {
            let (a, b): ((f64, f64), (f64, f64)) = (nodes[u], nodes[v]);
            edge_capacity((a.0 - b.0).hypot(a.1 - b.1), &loss).unwrap()
        })
        .collect();
    // source side always holds 0, never 1; enumerate the two free nodes
    let oracle = (0..4u32)
        .map(|free| {
            let side = [true, false, free & 1 == 1, free & 2 == 2];
            edges
                .iter()
                .zip(&caps)
                .filter(|(&(u, v), _)| side[u] != side[v])
                .map(|(_, c)| c)
                .sum::<f64>()
        })
        .fold(f64::INFINITY, f64::min);
    let v = json_ok(&["capacity", "--graph", &graph, "--s", "0", "--t", "1"]);
    assert!((v["capacity"].as_f64().unwrap() / oracle - 1.0).abs() < 1e-12);
}

#[test]
fn stats_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    json_ok(&["generate", "--model", "waxman", "--n", "300", "--r-km", "300", "--seed", "3", "--out", path_str(&out)]);
    let v = json_ok(&["stats", "--graph", path_str(&out)]);
    assert_eq!(v["nodes"], 300);
    assert!(v["poisson_fit"]["lambda"].as_f64().unwrap() > 0.0);
    let g = v["giant_fraction"].as_f64().unwrap();
    assert!(g > 0.0 && g <= 1.0);
}

const MINIMAL: &str = r#"{
  "model": {"family": "waxman"},
  "sweep": {"variable": "n", "values": [60]},
  "R_km": [200],
  "graphs_per_point": 3,
  "pairs_per_graph": 4,
  "master_seed": 11
}"#;

#[test]
fn sweep_is_repeatable_and_thread_independent() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, MINIMAL).unwrap();
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    let v = json_ok(&["sweep", "--config", path_str(&cfg), "--out", path_str(&a), "--threads", "1"]);
    assert_eq!(v["master_seed"], 11);
    assert_eq!(v["records"], 12);
    let out = Command::new(env!("CARGO_BIN_EXE_qnetcap"))
        .args(["sweep", "--config", path_str(&cfg), "--out", path_str(&b)])
        .env("QNETCAP_THREADS", "3")
        .output()
        .unwrap();
    assert!(out.status.success());
    for suffix in ["_records.csv", "_summary.csv"] {
        let x = fs::read(format!("{}{suffix}", a.display())).unwrap();
        let y = fs::read(format!("{}{suffix}", b.display())).unwrap();
        assert_eq!(x, y, "{suffix}");
    }
    let summary = fs::read_to_string(format!("{}_summary.csv", a.display())).unwrap();
    assert_eq!(summary.lines().count(), 2);
    assert!(summary.starts_with("point_index,model,N,R_km,rho,mean_C,median_C,mean_ratio,bound_exact,bound_asymptotic\n"));

    let fit = json_ok(&["fit", "--summary", &format!("{}_summary.csv", a.display())]);
    assert_eq!(fit["curves"][0]["points"], 1);
}

#[test]
fn seed_flag_overrides_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    fs::write(&cfg, MINIMAL).unwrap();
    let out = dir.path().join("o");
    let v = json_ok(&["sweep", "--config", path_str(&cfg), "--out", path_str(&out), "--seed", "99"]);
    assert_eq!(v["master_seed"], 99);
}

#[test]
fn malformed_config_names_fields() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("bad.json");
    fs::write(
        &cfg,
        r#"{"model": {"family": "waxman"}, "sweep": {"variable": "rho", "values": [0.001, 0.0001]},
            "alpha": [0.1], "graphs_per_point": 0}"#,
    )
    .unwrap();
    let out = qnetcap(&["sweep", "--config", path_str(&cfg), "--out", "unused"]);
    assert_eq!(out.status.code(), Some(1));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains("sweep.values") && stderr.contains("graphs_per_point"), "{stderr}");
}

#[test]
fn asymptotic_constants() {
    let z = json_ok(&["asymptotics", "--which", "zeta"]);
    assert_eq!(z["name"], "zeta");
    assert_eq!(z["method"], "quadrature");
    assert!((z["value"].as_f64().unwrap() - 4357.9).abs() <= 1.0);
    let z_er = json_ok(&["asymptotics", "--which", "zeta_er"]);
    assert!((z_er["value"].as_f64().unwrap() - 5137.9).abs() <= 1.0);
    let rho = json_ok(&["asymptotics", "--which", "critical_density", "--target", "1"]);
    assert!((rho["value"].as_f64().unwrap() / 2.2947e-4 - 1.0).abs() < 1e-4);
}

#[test]
fn monte_carlo_bounds_via_cli() {
    let exact = json_ok(&["asymptotics", "--which", "node_bound_waxman", "--bound", "exact", "--n", "2560", "--r-km", "800", "--seed", "5", "--samples", "200000"]);
    let asym = json_ok(&["asymptotics", "--which", "node_bound_waxman", "--n", "2560", "--r-km", "800"]);
    let ratio = exact["value"].as_f64().unwrap() / asym["value"].as_f64().unwrap();
    assert!((ratio - 0.972).abs() < 0.02, "{ratio}");
    let sf = json_ok(&["asymptotics", "--which", "node_bound_scale_free", "--m", "2", "--r-km", "800", "--seed", "5"]);
    assert_eq!(sf["method"], "monte_carlo");
    assert!(sf["error"].as_f64().unwrap() > 0.0);
    let missing = qnetcap(&["asymptotics", "--which", "node_bound_waxman", "--bound", "exact"]);
    assert_eq!(missing.status.code(), Some(1));
}

#[test]
fn unknown_which_is_rejected() {
    let out = qnetcap(&["asymptotics", "--which", "zeta_sf"]);
    assert_ne!(out.status.code(), Some(0));
}
