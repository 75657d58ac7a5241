use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use hyperpath::molgraph::parse_molecule;
use hyperpath::netcore::from_json;
use serde_json::Value;
use sha2::{Digest, Sha256};

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../core/data").join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hyperpath"))
        .args(args)
        .env_remove("HYPERPATH_NODE_LIMIT")
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn read_json(p: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(p).unwrap()).unwrap()
}

fn expand_args<'a>(seeds: &[&'a str], rules: &'a str, out: &'a str, extra: &[&'a str]) -> Vec<&'a str> {
    let mut args = vec!["expand"];
    for seed in seeds {
        args.extend(["--seeds", seed]);
    }
    args.extend(["--rules", rules, "--out", out]);
    args.extend(extra);
    args
}

#[test]
fn expand_reproduces_counts_and_writes_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("net.json");
    let dot = dir.path().join("net.dot");
    let seeds = data("seeds.mgf");
    let rules = data("rules.txt");
    let mut args = expand_args(&[s(&seeds)], s(&rules), s(&out), &[]);
    args.extend([
        "--max-iterations", "4", "--max-elements", "C=2,N=4,O=4",
        "--filter", "no-rings-le=3", "--filter", "no-cumulated", "--dot", s(&dot),
    ]);
    let first = run(&args);
    assert_eq!(code(&first), 0, "{}", String::from_utf8_lossy(&first.stderr));
    let stdout = String::from_utf8_lossy(&first.stdout);
    assert!(stdout.contains("iteration 4: 17 molecules, 26 reactions"), "{stdout}");
    let h = from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((h.vertex_count(), h.edge_count()), (17, 26));
    assert!(std::fs::read_to_string(&dot).unwrap().starts_with("digraph"));

    let manifest = read_json(&dir.path().join("net.json.manifest.json"));
    assert_eq!(manifest["command"], "expand");
    assert_eq!(manifest["flags"]["max_iterations"], 4);
    assert_eq!(manifest["flags"]["filters"], serde_json::json!(["no-rings-le=3", "no-cumulated"]));
    let seed_digest = format!("{:x}", Sha256::digest(std::fs::read(&seeds).unwrap()));
    assert_eq!(manifest["inputs"][0]["sha256"], seed_digest.as_str());
    let out_digest = format!("{:x}", Sha256::digest(std::fs::read(&out).unwrap()));
    assert_eq!(manifest["outputs"][0]["sha256"], out_digest.as_str());
    assert!(manifest["duration_seconds"].as_f64().unwrap() >= 0.0);
    assert!(manifest["tool_version"].is_string());

    let before = std::fs::read(&out).unwrap();
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read(&out).unwrap(), before);
}

#[test]
fn zero_iterations_keep_only_seeds() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("net.json");
    let (seeds, rules) = (data("seeds.mgf"), data("rules.txt"));
    let args = expand_args(&[s(&seeds)], s(&rules), s(&out), &["--max-iterations", "0"]);
    assert_eq!(code(&run(&args)), 0);
    let h = from_json(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!((h.vertex_count(), h.edge_count()), (2, 0));
}

#[test]
fn usage_and_input_errors() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("net.json");
    let (seeds, rules) = (data("seeds.mgf"), data("rules.txt"));
    let bad_filter = run(&expand_args(&[s(&seeds)], s(&rules), s(&out), &["--filter", "no-rings"]));
    assert_eq!(code(&bad_filter), 1);
    assert!(String::from_utf8_lossy(&bad_filter.stderr).contains("unknown filter"));
    assert_eq!(code(&run(&["frobnicate"])), 1);
    assert_eq!(code(&run(&["--help"])), 0);

    let missing = dir.path().join("missing.mgf");
    assert_eq!(code(&run(&expand_args(&[s(&missing)], s(&rules), s(&out), &[]))), 2);
    let broken = dir.path().join("broken.mgf");
    std::fs::write(&broken, "atom 1 O\nbond 1 2 1\n").unwrap();
    let err = run(&expand_args(&[s(&broken)], s(&rules), s(&out), &[]));
    assert_eq!(code(&err), 2);
    assert!(String::from_utf8_lossy(&err.stderr).contains("line 2"));
}

fn query(dir: &Path, demo: &str, extra: &[&str]) -> (Output, PathBuf) {
    let out = dir.join(format!("{demo}-solutions.json"));
    let (net, bar, q) = (
        data(&format!("{demo}/network.json")),
        data(&format!("{demo}/barriers.csv")),
        data(&format!("{demo}/query.json")),
    );
    let mut args = vec!["query", "--network", s(&net), "--barriers", s(&bar), "--query", s(&q), "--out", s(&out)];
    args.extend(extra);
    (run(&args), out)
}

#[test]
fn glyoxal_query_finds_the_four_edge_pathway() {
    let dir = tempfile::tempdir().unwrap();
    let dots = dir.path().join("dots");
    let profile = dir.path().join("profile.csv");
    let (out, path) = query(
        dir.path(),
        "glyoxal",
        &["-k", "3", "--dot-dir", s(&dots), "--profile", s(&profile)],
    );
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let sols = read_json(&path);
    let list = sols.as_array().unwrap();
    assert_eq!(list.len(), 3);
    assert_eq!(list[0]["status"], "optimal");
    assert_eq!(list[0]["rank"], 1);
    assert_eq!(list[0]["support"].as_array().unwrap().len(), 4);
    assert_eq!(list[1]["cuts_before"].as_array().unwrap().len(), 1);
    let objectives: Vec<f64> = list.iter().map(|e| e["objective_j_per_mol"].as_f64().unwrap()).collect();
    assert!(objectives.windows(2).all(|w| w[0] <= w[1]));
    for rank in 1..=3 {
        let dot = std::fs::read_to_string(dots.join(format!("solution-{rank}.dot"))).unwrap();
        assert!(dot.contains("style=bold"));
    }
    let csv = std::fs::read_to_string(&profile).unwrap();
    let first: Vec<&str> = csv.lines().skip(1).filter(|l| l.starts_with("1,")).collect();
    assert_eq!(first.len(), 4);
    assert!(first.last().unwrap().ends_with(",200"));

    let before = std::fs::read(&path).unwrap();
    let (again, _) = query(dir.path(), "glyoxal", &["-k", "3"]);
    assert_eq!(code(&again), 0);
    assert_eq!(std::fs::read(&path).unwrap(), before);
}

#[test]
fn relaxation_of_flux_demo() {
    let dir = tempfile::tempdir().unwrap();
    let (out, path) = query(dir.path(), "flux-demo", &["--relax"]);
    assert_eq!(code(&out), 0);
    let doc = read_json(&path);
    assert_eq!(doc["status"], "optimal");
    assert!((doc["objective"].as_f64().unwrap() - 1.5).abs() < 1e-9);

    let (out, path) = query(dir.path(), "flux-demo", &["-k", "10"]);
    assert_eq!(code(&out), 0);
    let list = read_json(&path);
    let best: Vec<&Value> = list.as_array().unwrap().iter().filter(|e| e["objective_j_per_mol"] == 1.0).collect();
    assert_eq!(best.len(), 3);
}

#[test]
fn flux_demo_without_barriers() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("relax.json");
    let (net, q) = (data("flux-demo/network.json"), data("flux-demo/query.json"));
    let res = run(&["query", "--network", s(&net), "--query", s(&q), "--relax", "--out", s(&out)]);
    assert_eq!(code(&res), 0);
    assert!((read_json(&out)["objective"].as_f64().unwrap() - 1.5).abs() < 1e-9);

    let (gnet, gq) = (data("glyoxal/network.json"), data("glyoxal/query.json"));
    let res = run(&["query", "--network", s(&gnet), "--query", s(&gq), "--out", s(&out)]);
    assert_eq!(code(&res), 1);
}

#[test]
fn infeasible_query_is_data() {
    let dir = tempfile::tempdir().unwrap();
    let q = dir.path().join("q.json");
    std::fs::write(&q, r#"{"sources":{"2":{"max":3}},"targets":{"9":{"min":1,"max":1}}}"#).unwrap();
    let out = dir.path().join("s.json");
    let (net, bar) = (data("glyoxal/network.json"), data("glyoxal/barriers.csv"));
    let res = run(&["query", "--network", s(&net), "--barriers", s(&bar), "--query", s(&q), "--out", s(&out)]);
    assert_eq!(code(&res), 0);
    let list = read_json(&out);
    assert_eq!(list[0]["status"], "infeasible");
    assert!(list[0]["objective_j_per_mol"].is_null());
}

#[test]
fn node_limit_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("s.json");
    let (net, bar, q) = (data("glyoxal/network.json"), data("glyoxal/barriers.csv"), data("glyoxal/query.json"));
    let res = Command::new(env!("CARGO_BIN_EXE_hyperpath"))
        .args(["query", "--network", s(&net), "--barriers", s(&bar), "--query", s(&q), "--out", s(&out)])
        .env("HYPERPATH_NODE_LIMIT", "1")
        .output()
        .unwrap();
    assert_eq!(code(&res), 3);
    assert!(String::from_utf8_lossy(&res.stderr).contains("node limit"));
    let flag = run(&["query", "--network", s(&net), "--barriers", s(&bar), "--query", s(&q), "--out", s(&out), "--node-limit", "1"]);
    assert_eq!(code(&flag), 3);
}

#[test]
fn export_lp_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let lp = dir.path().join("demo.lp");
    let (net, bar, q) = (data("flux-demo/network.json"), data("flux-demo/barriers.csv"), data("flux-demo/query.json"));
    let args = ["export-lp", "--network", s(&net), "--barriers", s(&bar), "--query", s(&q), "--out", s(&lp)];
    assert_eq!(code(&run(&args)), 0);
    let text = std::fs::read_to_string(&lp).unwrap();
    let general = text.split("Generals").nth(1).unwrap().split("Binaries").next().unwrap();
    let names: Vec<&str> = general.split_whitespace().collect();
    assert_eq!(names, ["f_0", "f_1", "f_2", "in_0", "in_1", "in_2", "out_3"]);
    assert!(text.contains("Maximize"));
    assert_eq!(code(&run(&args)), 0);
    assert_eq!(std::fs::read_to_string(&lp).unwrap(), text);
    let manifest = read_json(&dir.path().join("demo.lp.manifest.json"));
    assert_eq!(manifest["summary"]["variables"], 10);
}

#[test]
fn missing_barrier_row_names_the_edge() {
    let dir = tempfile::tempdir().unwrap();
    let short = dir.path().join("short.csv");
    std::fs::write(&short, "edge_id,barrier_kj_per_mol\n0,50\n1,50\n").unwrap();
    let (net, q) = (data("flux-demo/network.json"), data("flux-demo/query.json"));
    let lp = dir.path().join("x.lp");
    let res = run(&["export-lp", "--network", s(&net), "--barriers", s(&short), "--query", s(&q), "--out", s(&lp)]);
    assert_eq!(code(&res), 2);
    assert!(String::from_utf8_lossy(&res.stderr).contains("edge 2"));
}

#[test]
fn annotate_check_reports_probabilities() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("ann.json");
    let (net, bar) = (data("glyoxal/network.json"), data("glyoxal/barriers.csv"));
    let res = run(&["annotate-check", "--network", s(&net), "--barriers", s(&bar), "--out", s(&out), "--temperature-k", "350"]);
    assert_eq!(code(&res), 0);
    let report = read_json(&out);
    assert_eq!(report["temperature_k"], 350.0);
    let total: f64 = report["edges"].as_array().unwrap().iter().map(|e| e["probability"].as_f64().unwrap()).sum();
    assert!((total - 1.0).abs() < 1e-12);
    let bad = run(&["annotate-check", "--network", s(&net), "--barriers", s(&bar), "--out", s(&out), "--temperature-k", "-1"]);
    assert_eq!(code(&bad), 1);
}

#[test]
fn export_dot_highlights_a_ranked_solution() {
    let dir = tempfile::tempdir().unwrap();
    let (res, sols) = query(dir.path(), "glyoxal", &["-k", "2"]);
    assert_eq!(code(&res), 0);
    let net = data("glyoxal/network.json");
    let dot = dir.path().join("rank2.dot");
    let res = run(&["export-dot", "--network", s(&net), "--solutions", s(&sols), "--rank", "2", "--out", s(&dot)]);
    assert_eq!(code(&res), 0);
    let text = std::fs::read_to_string(&dot).unwrap();
    let bold_boxes = text.lines().filter(|l| l.contains("shape=square") && l.contains("style=bold")).count();
    assert_eq!(bold_boxes, 5);
    let plain = dir.path().join("plain.dot");
    assert_eq!(code(&run(&["export-dot", "--network", s(&net), "--out", s(&plain)])), 0);
    assert!(!std::fs::read_to_string(&plain).unwrap().contains("style=bold"));
    let res = run(&["export-dot", "--network", s(&net), "--solutions", s(&sols), "--rank", "9", "--out", s(&dot)]);
    assert_eq!(code(&res), 2);
}

/// Glycine (H2N-CH2-COOH) from glycolonitrile and water over the fully
/// expanded three-seed network, five ranked pathways.
#[test]
fn five_glycine_pathways_over_a_generated_network() {
    let dir = tempfile::tempdir().unwrap();
    let net = dir.path().join("net.json");
    let (seeds, ammonia, rules) = (data("seeds.mgf"), data("ammonia.mgf"), data("rules.txt"));
    let mut args = expand_args(&[s(&seeds), s(&ammonia)], s(&rules), s(&net), &[]);
    args.extend([
        "--max-iterations", "50", "--max-elements", "C=2,N=4,O=4",
        "--filter", "no-rings-le=3", "--filter", "no-cumulated",
    ]);
    assert_eq!(code(&run(&args)), 0);
    let h = from_json(&std::fs::read_to_string(&net).unwrap()).unwrap();
    let glycine = parse_molecule(
        "atom 1 N; atom 2 H; atom 3 H; atom 4 C; atom 5 H; atom 6 H; atom 7 C; atom 8 O; atom 9 O; atom 10 H
         bond 1 2 1; bond 1 3 1; bond 1 4 1; bond 4 5 1; bond 4 6 1; bond 4 7 1; bond 7 8 2; bond 7 9 1; bond 9 10 1",
    )
    .unwrap();
    let target = h.find_molecule(&glycine).expect("glycine is generated");

    let barriers = dir.path().join("barriers.csv");
    let mut csv = String::from("edge_id,barrier_kj_per_mol\n");
    for e in h.edges() {
        csv.push_str(&format!("{},{}\n", e.id, 40 + (e.id.0 * 7) % 30));
    }
    std::fs::write(&barriers, csv).unwrap();
    let q = dir.path().join("query.json");
    std::fs::write(
        &q,
        format!(r#"{{"sources":{{"0":{{"max":3}},"1":{{"max":1}}}},"targets":{{"{target}":{{"min":1,"max":1}}}},"byproducts":{{"0":3,"2":3}}}}"#),
    )
    .unwrap();
    let out = dir.path().join("s.json");
    let res = run(&["query", "--network", s(&net), "--barriers", s(&barriers), "--query", s(&q), "-k", "5", "--out", s(&out)]);
    assert_eq!(code(&res), 0, "{}", String::from_utf8_lossy(&res.stderr));
    let list = read_json(&out);
    let objectives: Vec<f64> = list.as_array().unwrap().iter().map(|e| e["objective_j_per_mol"].as_f64().unwrap()).collect();
    assert_eq!(objectives.len(), 5);
    assert!(objectives.windows(2).all(|w| w[0] <= w[1]), "{objectives:?}");
}
