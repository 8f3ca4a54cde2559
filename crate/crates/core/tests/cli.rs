use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cascade-influence"))
        .args(args)
        .env_remove("CASCADE_INFLUENCE_SEED")
        .output()
        .expect("run binary")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_str(stdout(o).trim()).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn optimal_on_files_and_specs() {
    let dir = tempfile::tempdir().unwrap();
    let star = write(dir.path(), "star.txt", "# star on five nodes\n5\n0 1\n0 2\n0 3\n0 4\n");
    let v = json(&cli(&["optimal", "--tree", &star]));
    assert_eq!((v["influence"].as_u64(), v["k"].as_u64()), (Some(4), Some(1)));
    assert_eq!(v["labels"], "10000");
    assert_eq!(v["seed"], 0);

    let v = json(&cli(&["optimal", "-t", "path:4"]));
    assert_eq!((v["influence"].as_u64(), v["k"].as_u64()), (Some(2), Some(2)));

    let empty = write(dir.path(), "empty.txt", "0\n");
    let o = cli(&["optimal", "--tree", &empty]);
    assert_eq!(o.status.code(), Some(2));
    assert!(!o.stderr.is_empty());

    let cyc = write(dir.path(), "cyc.txt", "3\n0 1\n1 2\n2 0\n");
    assert_eq!(cli(&["optimal", "--tree", &cyc]).status.code(), Some(2));
    assert_eq!(cli(&["optimal", "--tree", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn csv_output_echoes_seed() {
    let o = cli(&["--seed", "77", "--format", "csv", "optimal", "-t", "star:6"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("# seed=77"));
    assert_eq!(lines.next(), Some("id,n,influence,k,one_nodes"));
    assert_eq!(lines.next(), Some("star:6,6,5,1,0"));
}

#[test]
fn greedy_budget_and_determinism() {
    let v = json(&cli(&["greedy", "-t", "star:5", "-k", "1"]));
    assert_eq!(v["influence"], 4);
    let v = json(&cli(&["greedy", "-t", "star:5", "-k", "0"]));
    assert_eq!(v["influence"], 0);
    let a = cli(&["--seed", "5", "greedy", "-t", "random:80:1", "-k", "9"]);
    let b = cli(&["--seed", "5", "greedy", "-t", "random:80:1", "-k", "9"]);
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(json(&a)["one_nodes"].as_array().unwrap().len(), 9);
    assert_eq!(cli(&["greedy", "-t", "star:5", "-k", "6"]).status.code(), Some(2));
}

#[test]
fn phase_histogram_and_guard() {
    let o = cli(&["phase", "-t", "star:5", "-k", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(rows, ["m10,m11,count", "0,0,4", "4,0,1"]);

    let opt = json(&cli(&["optimal", "-t", "random:14:3"]));
    let phase = json(&cli(&["--format", "json", "phase", "-t", "random:14:3"]));
    assert_eq!(phase["max_m10"], opt["influence"]);
    assert_eq!(phase["k"], opt["k"]);

    let o = cli(&["--max-enum", "10", "phase", "-t", "random:20:1", "-k", "5"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_and_help() {
    assert_eq!(cli(&[]).status.code(), Some(1));
    assert_eq!(cli(&["optimal"]).status.code(), Some(1));
    assert_eq!(cli(&["--seed", "abc", "optimal", "-t", "star:3"]).status.code(), Some(1));
    let h = cli(&["--help"]);
    assert_eq!(h.status.code(), Some(0));
    assert!(stdout(&h).contains("simulate"));
    assert_eq!(cli(&["--version"]).status.code(), Some(0));
}

#[test]
fn env_overrides_flags() {
    let o = Command::new(env!("CARGO_BIN_EXE_cascade-influence"))
        .args(["--format", "csv", "optimal", "-t", "star:3"])
        .env("CASCADE_INFLUENCE_SEED", "31")
        .output()
        .unwrap();
    assert!(stdout(&o).starts_with("# seed=31\n"));
}

#[test]
fn simulate_writes_curve_and_fit() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("curve.csv");
    let fit = dir.path().join("fit.json");
    let args = [
        "--seed", "3", "--out", csv.to_str().unwrap(), "--json-out", fit.to_str().unwrap(),
        "simulate", "vs-n", "--n-min", "5", "--n-max", "30", "--replicates", "5",
    ];
    assert!(cli(&args).status.success());
    let curve = std::fs::read_to_string(&csv).unwrap();
    assert!(curve.starts_with("# seed=3\nx,mean_I,sd_I,mean_k,sd_k\n"));
    assert_eq!(curve.lines().count(), 2 + 26);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&fit).unwrap()).unwrap();
    assert_eq!(v["seed"], 3);
    assert_eq!(v["degenerate"], false);
    assert!(v["influence_fit"]["slope"].as_f64().unwrap() > 0.0);

    let first = std::fs::read(&csv).unwrap();
    assert!(cli(&args).status.success());
    assert_eq!(std::fs::read(&csv).unwrap(), first);

    let o = cli(&["simulate", "vs-n", "--n-min", "12", "--n-max", "12", "--replicates", "1"]);
    assert!(o.status.success());
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("\"degenerate\": true"));

    let o = cli(&["simulate", "vs-height", "-n", "12", "--replicates", "3"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 11);
}

fn synthetic_jsonl(dir: &Path, count: usize) -> String {
    let mut body = String::new();
    for i in 0..count {
        let n = 15 + i;
        let edges: Vec<[usize; 2]> = (1..n).map(|v| [(v - 1) / 2, v]).collect();
        let line = serde_json::json!({"id": format!("c{i:02}"), "edges": edges, "coordinated": [i % n, n - 1]});
        body.push_str(&line.to_string());
        body.push('\n');
    }
    body.push_str(r#"{"id":"small","edges":[[0,1],[0,2]],"coordinated":[0]}"#);
    body.push('\n');
    write(dir, "cascades.jsonl", &body)
}

#[test]
fn analyze_end_to_end() {
    let dir = tempfile::tempdir().unwrap();
    let input = synthetic_jsonl(dir.path(), 20);
    let out = dir.path().join("metrics.csv");
    let summary = dir.path().join("summary.json");
    let o = cli(&[
        "--seed", "11", "--out", out.to_str().unwrap(), "--json-out", summary.to_str().unwrap(),
        "analyze", "--input", &input,
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let metrics = std::fs::read_to_string(&out).unwrap();
    let mut lines = metrics.lines();
    assert_eq!(lines.next(), Some("# seed=11"));
    assert_eq!(lines.next(), Some("id,n,k_obs,I_obs,I_star,k_star,I_k,rho,rho_k"));
    assert_eq!(lines.count(), 20);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&summary).unwrap()).unwrap();
    assert_eq!(v["seed"], 11);
    assert_eq!(v["cascades_total"], 21);
    assert_eq!(v["cascades_removed"], 1);
    assert_eq!(v["rho_out_of_range"], 0);
    assert_eq!(v["log_base"], "e");
    assert_eq!(v["smoothing"], 1e-4);

    let o = cli(&["analyze", "--input", &input, "--min-nodes", "30"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 5);

    let o = cli(&["analyze", "--input", &input, "--bins", "8", "--distribution", "rho"]);
    assert!(o.status.success());
    assert!(String::from_utf8_lossy(&o.stderr).contains("\"count\": 8"));

    assert_eq!(cli(&["analyze", "--input", &input, "--bins", "wide"]).status.code(), Some(2));
    assert_eq!(cli(&["analyze", "--input", &input, "--smoothing", "0"]).status.code(), Some(2));
    let bad = write(dir.path(), "bad.jsonl", "{\"id\":\"x\",\"edges\":[[0,1],[1,0]],\"coordinated\":[]}\n");
    let o = cli(&["analyze", "--input", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("line 1"));
}

#[test]
fn jsonl_trees_feed_optimal() {
    let dir = tempfile::tempdir().unwrap();
    let input = synthetic_jsonl(dir.path(), 3);
    let o = cli(&["--format", "csv", "optimal", "-t", &input]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 2 + 4);
}
