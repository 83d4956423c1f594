#[path = "../../core/tests/oracles/mod.rs"]
mod oracles;

use std::fs;
use std::process::{Command, Output};

use rand::rngs::StdRng;
use rand::SeedableRng;

const TABLE_TEXT: &str = include_str!("../fixtures/table_6_2.txt");
const TABLE_CSV: &str = include_str!("../fixtures/table_6_2.csv");

fn domino(args: &[&str]) -> Output {
    domino_env(args, &[])
}

fn domino_env(args: &[&str], env: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_domino"));
    cmd.args(args);
    for key in [
        "DOMINO_CONFIG",
        "DOMINO_MAX_VERTICES",
        "DOMINO_WORK_LIMIT",
        "DOMINO_MAX_PATH_DEGREE",
        "DOMINO_MAX_COUNT_DEGREE",
    ] {
        cmd.env_remove(key);
    }
    cmd.envs(env.iter().copied());
    cmd.output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn table_matches_fixtures() {
    let text = domino(&["table", "-n", "6", "-q", "2"]);
    assert_eq!(code(&text), 0);
    assert_eq!(stdout(&text), TABLE_TEXT);
    let csv = domino(&["table", "-n", "6", "-q", "2", "--format", "csv"]);
    assert_eq!(stdout(&csv), TABLE_CSV);
}

#[test]
fn table_small_cases() {
    let out = stdout(&domino(&["table", "-n", "1", "-q", "2", "--format", "csv"]));
    assert_eq!(out, "trace,necklace,period,lyndon_subword\n0,[0],1,0\n1,[1],1,1\n");

    let out = stdout(&domino(&["table", "-n", "4", "-q", "2", "--traces", "0", "--format", "csv"]));
    let necklaces: Vec<&str> = out.lines().skip(1).map(|l| l.split(',').nth(1).unwrap()).collect();
    assert_eq!(necklaces, ["[0000]", "[0011]", "[0101]", "[1111]"]);
}

#[test]
fn table_json_is_well_formed() {
    let out = domino(&["table", "-n", "6", "-q", "2", "--format", "json"]);
    let value: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(value.is_object() || value.is_array());
}

#[test]
fn cycles_formula_matches_orbit_walk() {
    for (n, q, t) in [("6", "2", "0"), ("1", "3", "2"), ("4", "2", "0"), ("5", "3", "1")] {
        let out = domino(&["cycles", "-n", n, "-q", q, "-t", t]);
        assert_eq!(code(&out), 0, "Λ({n},{q},{t})");
        assert!(stdout(&out).contains("MATCH"));
        assert!(!stdout(&out).contains("MISMATCH"));
    }
}

#[test]
fn build_dot_output() {
    let dot = stdout(&domino(&["build", "-n", "6", "-q", "2", "-t", "0", "--format", "dot"]));
    assert!(dot.starts_with("digraph"));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 32);
    assert_eq!(dot.matches("style=solid").count(), 32);
    assert_eq!(dot.matches("style=dashed").count(), 1024);

    let dot = stdout(&domino(&["build", "-n", "1", "-q", "2", "-t", "0", "--format", "dot"]));
    assert_eq!(dot.lines().filter(|l| l.contains("[label=")).count(), 1);
    assert_eq!(dot.matches("v0 -> v0 [color=blue, style=solid]").count(), 1);
    assert_eq!(dot.matches("v0 -> v0 [color=red, style=dashed]").count(), 1);
}

#[test]
fn build_json_counts() {
    let out = domino(&["build", "-n", "3", "-q", "3", "-t", "1", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["vertices"].as_array().unwrap().len(), 9);
    assert_eq!(v["blue_edges"].as_array().unwrap().len(), 9);
    assert_eq!(v["red_edges"].as_array().unwrap().len(), 81);
    assert_eq!(v["squares"].as_array().unwrap().len(), 81);
}

#[test]
fn oversized_build_exits_with_limit_code() {
    let out = domino(&["build", "-n", "6", "-q", "9", "-t", "0"]);
    assert_eq!(code(&out), 3);
    assert!(!out.stderr.is_empty());
}

#[test]
fn usage_errors_exit_two() {
    assert_eq!(code(&domino(&["build", "-n", "3", "-q", "2", "-t", "5"])), 2);
    assert_eq!(code(&domino(&["build", "-n", "0", "-q", "2", "-t", "0"])), 2);
    assert_eq!(code(&domino(&["frobnicate"])), 2);
}

#[test]
fn verify_passes_and_notes_degenerate_case() {
    let out = domino(&["verify", "-n", "3", "-q", "2", "-t", "0"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    for suite in ["axioms: PASS", "iso: PASS", "paths: PASS"] {
        assert!(text.contains(suite), "{text}");
    }

    let out = domino(&["verify", "-n", "2", "-q", "2", "-t", "0", "--suite", "iso"]);
    assert_eq!(code(&out), 0);
    assert!(stdout(&out).contains("NOTE: degenerate"));
}

#[test]
fn verify_reports_tampered_squares() {
    let out = domino(&["verify", "-n", "3", "-q", "2", "-t", "0", "--suite", "axioms", "--tamper-square", "delete"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("missing blue-red key"));

    let out = domino(&["verify", "-n", "3", "-q", "2", "-t", "0", "--suite", "axioms", "--tamper-square", "swap"]);
    assert_eq!(code(&out), 1);
    assert!(stdout(&out).contains("square endpoint mismatch"));
}

#[test]
fn ktheory_examples() {
    let text = stdout(&domino(&["ktheory", "-n", "6", "-q", "2", "-t", "0"]));
    assert!(text.contains("K0: Z/31"));
    assert!(text.contains("K1: Z/31"));
    assert!(text.contains("Prim: T "));

    let text = stdout(&domino(&["ktheory", "-n", "1", "-q", "3", "-t", "0"]));
    assert!(text.contains("K0: Z^2"));
    assert!(text.contains("Prim: T^2"));

    let text = stdout(&domino(&["ktheory", "-n", "2", "-q", "2", "-t", "0"]));
    assert!(text.contains("K0: 0"));

    let out = domino(&["ktheory", "-n", "6", "-q", "2", "-t", "0", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["case"], "CROSSED");
    assert_eq!(v["primitive_ideal_space"]["value"], "CIRCLE");
}

fn graph_file(dir: &tempfile::TempDir, name: &str, edges: &[(usize, usize)]) -> String {
    let path = dir.path().join(name);
    let body: String = edges.iter().map(|(u, w)| format!("{u} {w}\n")).collect();
    fs::write(&path, format!("# test graph\n{body}")).unwrap();
    path.to_str().unwrap().to_owned()
}

fn graph_json(file: &str, checks: &[&str]) -> serde_json::Value {
    let mut args = vec!["graph", file, "--format", "json"];
    for c in checks {
        args.extend(["--check", c]);
    }
    let out = domino(&args);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn graph_checks_on_small_graphs() {
    let dir = tempfile::tempdir().unwrap();
    let complete: Vec<_> = (0..3).flat_map(|u| (0..3).map(move |w| (u, w))).collect();
    let file = graph_file(&dir, "complete.txt", &complete);
    assert_eq!(graph_json(&file, &["n-connected=1"])["1_connected"], true);

    let file = graph_file(&dir, "cycle.txt", &[(0, 1), (1, 0)]);
    let v = graph_json(&file, &["period", "exponent", "strongly-connected"]);
    assert_eq!(v["period"], 2);
    assert_eq!(v["strongly_connected"], true);

    let text = stdout(&domino(&["graph", &file]));
    assert!(text.contains("exponent: none"));
}

#[test]
fn graph_checks_agree_with_oracles() {
    let dir = tempfile::tempdir().unwrap();
    let mut rng = StdRng::seed_from_u64(6);
    for i in 0..20 {
        let adj = oracles::random_digraph(&mut rng, 6);
        let edges = oracles::edges_of(&adj);
        if edges.is_empty() {
            continue;
        }
        let n = adj.len();
        let file = graph_file(&dir, &format!("g{i}.txt"), &edges);
        let v = graph_json(&file, &["strongly-connected", "exponent"]);
        assert_eq!(v["strongly_connected"], oracles::strongly_connected(&adj), "graph {i}");
        let expected = oracles::exponent(&adj, ((n - 1) * (n - 1) + 1) as u64);
        // a file only names vertices that carry an edge, so compare when all do
        let covered = (0..n).all(|x| edges.iter().any(|&(u, w)| u == x || w == x));
        if covered {
            assert_eq!(v["exponent"]["n"].as_u64(), expected, "graph {i}: {v}");
        }
    }
}

#[test]
fn output_is_deterministic() {
    let args = ["build", "-n", "4", "-q", "3", "-t", "2", "--format", "json"];
    assert_eq!(domino(&args).stdout, domino(&args).stdout);
}

#[test]
fn timestamps_are_opt_in() {
    let plain = stdout(&domino(&["cycles", "-n", "6", "-q", "2", "-t", "0"]));
    assert!(!plain.contains("generated at"));
    let stamped = stdout(&domino(&["--timestamps", "cycles", "-n", "6", "-q", "2", "-t", "0"]));
    assert!(stamped.starts_with("# generated at unix time "));

    let json = domino(&["--timestamps", "ktheory", "-n", "6", "-q", "2", "-t", "0", "--format", "json"]);
    serde_json::from_slice::<serde_json::Value>(&json.stdout).unwrap();
    assert!(String::from_utf8_lossy(&json.stderr).contains("generated at"));
}

#[test]
fn limits_come_from_file_env_and_flags() {
    let dir = tempfile::tempdir().unwrap();
    let config = dir.path().join("limits.conf");
    fs::write(&config, "# tight\nmax_vertices = 16\n").unwrap();
    let config = config.to_str().unwrap();
    let args = ["build", "-n", "6", "-q", "2", "-t", "0"];

    assert_eq!(code(&domino(&args)), 0);
    assert_eq!(code(&domino_env(&args, &[("DOMINO_MAX_VERTICES", "16")])), 3);
    assert_eq!(code(&domino_env(&args, &[("DOMINO_CONFIG", config)])), 3);
    let flagged = ["--config", config, "--max-vertices", "64", "build", "-n", "6", "-q", "2", "-t", "0"];
    assert_eq!(code(&domino(&flagged)), 0);

    fs::write(dir.path().join("bad.conf"), "colour = blue\n").unwrap();
    let bad = dir.path().join("bad.conf");
    assert_eq!(code(&domino(&["--config", bad.to_str().unwrap(), "table", "-n", "3", "-q", "2"])), 2);
}
