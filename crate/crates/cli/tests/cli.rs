use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_episource"))
}

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn episource")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json_lines(o: &Output) -> Vec<Value> {
    stdout(o).lines().map(|l| serde_json::from_str(l).unwrap()).collect()
}

#[test]
fn generate_grid_and_cycle() {
    let o = run(&["generate", "grid:3x3", "--seed", "1"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).lines().count(), 12);
    let o = run(&["generate", "circulant:6:s=1", "--seed", "1"]);
    assert_eq!(stdout(&o).lines().count(), 6);
}

#[test]
fn generate_is_seeded() {
    let a = run(&["generate", "rbt:dmax=4:n=200", "--seed", "9"]);
    let b = run(&["generate", "rbt:dmax=4:n=200", "--seed", "9"]);
    assert_eq!(a.stdout, b.stdout);
    let c = run(&["generate", "rbt:dmax=4:n=200"]);
    assert!(String::from_utf8_lossy(&c.stderr).contains("seed: "));
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(run(&["generate", "grid:0x3", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["generate", "nonsense", "--seed", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "--bogus-flag", "x"]).status.code(), Some(2));
    assert_eq!(run(&["estimate", "/no/such/file"]).status.code(), Some(2));
}

#[test]
fn estimate_sct_on_six_vertex_tree() {
    let f = fixture("six_vertex_tree.edges");
    let o = run(&["estimate", f.to_str().unwrap(), "--est", "sct"]);
    assert!(o.status.success());
    let v = &json_lines(&o)[0];
    assert_eq!(v["estimator"], "sct");
    assert!(v["candidates"].as_array().unwrap().contains(&Value::from("v1")));
    assert_eq!(v["scores"]["v2"], "11/2");
}

#[test]
fn estimate_all_emits_one_object_per_estimator() {
    let f = fixture("six_vertex_tree.edges");
    let o = run(&["estimate", f.to_str().unwrap(), "--est", "all"]);
    let lines = json_lines(&o);
    let names: Vec<_> = lines.iter().map(|v| v["estimator"].as_str().unwrap().to_string()).collect();
    assert_eq!(names, ["algo1", "sct", "bfs-rc", "epidemic", "distance", "jordan"]);
}

#[test]
fn epidemic_on_path_picks_middle() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("p3.edges");
    std::fs::write(&p, "a b\nb c\n").unwrap();
    let o = run(&["estimate", p.to_str().unwrap(), "--est", "epidemic"]);
    assert_eq!(json_lines(&o)[0]["candidates"], serde_json::json!(["b"]));
}

#[test]
fn disconnected_input_exits_3_unless_per_component() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("two.edges");
    std::fs::write(&p, "a b\nb c\nx y\ny z\n").unwrap();
    let o = run(&["estimate", p.to_str().unwrap(), "--est", "sct"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("component 1"));
    let o = run(&["estimate", p.to_str().unwrap(), "--est", "sct", "--per-component"]);
    assert!(o.status.success());
    let lines = json_lines(&o);
    assert_eq!(lines.len(), 2);
    assert_eq!(lines[0]["candidates"], serde_json::json!(["b"]));
    assert_eq!(lines[1]["candidates"], serde_json::json!(["y"]));
}

#[test]
fn oracle_orders_six_vertex_tree() {
    let f = fixture("six_vertex_tree.edges");
    let o = run(&["oracle", f.to_str().unwrap(), "--host-degree", "3", "--degree", "v5=2"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v["likelihoods"].as_array().unwrap();
    let order: Vec<_> = rows.iter().map(|r| r["vertex"].as_str().unwrap()).collect();
    assert_eq!(order, ["v1", "v5", "v2", "v3", "v4", "v6"]);
    assert_eq!(rows[0]["numerator"], "53");
    assert_eq!(rows[0]["denominator"], "3600");
    assert_eq!(rows[3]["decimal"], rows[4]["decimal"]);
}

#[test]
fn oracle_single_vertex_and_cap() {
    let dir = tempfile::tempdir().unwrap();
    let p = dir.path().join("one.edges");
    std::fs::write(&p, "%n 1\n").unwrap();
    let o = run(&["oracle", p.to_str().unwrap(), "--host-degree", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["likelihoods"][0]["numerator"], "1");
    assert_eq!(v["likelihoods"][0]["denominator"], "1");
    let big = fixture("four_places.edges");
    assert_eq!(run(&["oracle", big.to_str().unwrap()]).status.code(), Some(4));
}

#[test]
fn oracle_on_host_with_infected_subset() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("host.edges");
    let gen = run(&["generate", "regtree:d=3:depth=3", "--seed", "0", "-o", host.to_str().unwrap()]);
    assert!(gen.status.success());
    let o = run(&["oracle", host.to_str().unwrap(), "--infected", "0,1,2,4"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["likelihoods"].as_array().unwrap().len(), 4);
}

#[test]
fn oracle_unicyclic_argmax_on_cycle() {
    let f = fixture("triangle_with_tails.edges");
    let o = run(&["oracle", f.to_str().unwrap(), "--host-degree", "3"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let top = v["likelihoods"][0]["vertex"].as_str().unwrap();
    assert!(["v1", "v2", "v3"].contains(&top), "argmax {top}");
}

#[test]
fn replay_four_places_picks_wtg() {
    let f = fixture("four_places.edges");
    let o = run(&["replay", f.to_str().unwrap(), "--source", "WTG", "--est", "sct"]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["results"][0]["candidates"], serde_json::json!(["WTG"]));
    assert_eq!(v["results"][0]["error"], 0);
}

#[test]
fn simulate_then_replay_snapshot() {
    let dir = tempfile::tempdir().unwrap();
    let host = dir.path().join("grid.edges");
    run(&["generate", "grid:20x20", "--seed", "1", "-o", host.to_str().unwrap()]);
    let h = host.to_str().unwrap();
    let a = run(&["simulate", "--graph", h, "-n", "30", "--seed", "5"]);
    let b = run(&["simulate", "--graph", h, "-n", "30", "--seed", "5"]);
    assert_eq!(a.stdout, b.stdout);
    let snap: Value = serde_json::from_str(&stdout(&a)).unwrap();
    assert_eq!(snap["order"].as_array().unwrap().len(), 30);
    let sp = dir.path().join("snap.json");
    std::fs::write(&sp, &a.stdout).unwrap();
    let r = run(&["replay", h, "--snapshot", sp.to_str().unwrap(), "--est", "sct,bfs-rc"]);
    assert!(r.status.success(), "{}", String::from_utf8_lossy(&r.stderr));
    let v: Value = serde_json::from_str(&stdout(&r)).unwrap();
    assert_eq!(v["true_source"], snap["source"]);
    assert!(v["results"][0]["error"].as_u64().is_some());
}

#[test]
fn bench_csv_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("exp.cfg");
    std::fs::write(&cfg, "generator = grid:30x30\nn = 40\ntrials = 6\nestimators = sct,bfs-rc\nseed = 3\n").unwrap();
    let mut outs = Vec::new();
    for (i, threads) in ["1", "4"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}.csv"));
        let o = run(&[
            "bench",
            "--config",
            cfg.to_str().unwrap(),
            "--threads",
            threads,
            "--out",
            out.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
        let summary: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(summary["summary"]["trials"], 6);
        outs.push(std::fs::read(&out).unwrap());
    }
    assert_eq!(outs[0], outs[1]);
    let text = String::from_utf8(outs[0].clone()).unwrap();
    assert!(text.starts_with("trial,seed,source,estimator,k,error,micros\n"));
    assert_eq!(text.lines().count(), 1 + 6 * 2);
}

#[test]
fn bench_flags_without_config() {
    let o = run(&[
        "--format", "csv", "bench", "--generator", "rbt:dmax=4:n=200", "-n", "20", "--trials", "3", "--est",
        "algo1,bfs-rc", "--seed", "2",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 7);
    assert!(run(&["bench", "-n", "5"]).status.code() == Some(2));
}
