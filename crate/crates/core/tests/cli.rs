//! End-to-end checks of the orbitgraph binary: piping through stdin/stdout,
//! exit codes, error JSON on stderr, and seeded determinism.

use std::io::Write;
use std::process::{Command, Output, Stdio};

fn run(args: &[&str], stdin: &[u8]) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_orbitgraph"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .expect("spawn orbitgraph");
    child.stdin.as_mut().unwrap().write_all(stdin).unwrap();
    child.wait_with_output().expect("wait for orbitgraph")
}

fn stdout_str(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn fixture_reeb_orbit_dim_pipeline() {
    for (name, expect) in [("vertical-torus", "d = 0"), ("inclined-torus", "d = 1")] {
        let mesh = run(&["fixtures", name], b"");
        assert!(mesh.status.success());
        let graph = run(&["reeb"], &mesh.stdout);
        assert!(graph.status.success());
        let dim = run(&["orbit-dim"], &graph.stdout);
        assert!(dim.status.success());
        assert_eq!(stdout_str(&dim).trim(), expect, "{name}");
    }
}

#[test]
fn classify_relabeled_copy_exits_zero_with_mapping() {
    let g = orbitgraph::fixtures::figure3_graph();
    let (h, _) = orbitgraph::classify::relabel_graph(&g, 3);
    let dir = std::env::temp_dir();
    let p1 = dir.join("orbitgraph-cli-g1.json");
    let p2 = dir.join("orbitgraph-cli-g2.json");
    std::fs::write(&p1, orbitgraph::io::graph_to_json(&g)).unwrap();
    std::fs::write(&p2, orbitgraph::io::graph_to_json(&h)).unwrap();
    let out = run(&["classify", p1.to_str().unwrap(), p2.to_str().unwrap()], b"");
    assert!(out.status.success());
    let body: serde_json::Value = serde_json::from_str(&stdout_str(&out)).unwrap();
    assert_eq!(body["isomorphic"], serde_json::json!(true));
    assert_eq!(body["nodes"].as_array().unwrap().len(), g.nodes.len());
    assert_eq!(body["edges"].as_array().unwrap().len(), g.edges.len());
}

#[test]
fn classify_distinct_graphs_exits_one() {
    let dir = std::env::temp_dir();
    let p1 = dir.join("orbitgraph-cli-f2.json");
    let p2 = dir.join("orbitgraph-cli-f3.json");
    std::fs::write(&p1, orbitgraph::io::graph_to_json(&orbitgraph::fixtures::figure2_graph()))
        .unwrap();
    std::fs::write(&p2, orbitgraph::io::graph_to_json(&orbitgraph::fixtures::figure3_graph()))
        .unwrap();
    let out = run(&["classify", p1.to_str().unwrap(), p2.to_str().unwrap()], b"");
    assert_eq!(out.status.code(), Some(1));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["kind"], serde_json::json!("validation"));
}

#[test]
fn malformed_input_exits_two_with_error_json() {
    let out = run(&["reeb"], b"{\"vertices\": [");
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value =
        serde_json::from_str(String::from_utf8(out.stderr).unwrap().trim()).unwrap();
    assert_eq!(err["kind"], serde_json::json!("malformed"));
    assert!(err["error"].is_string());
}

#[test]
fn seeded_subcommands_are_deterministic() {
    let a = run(&["fixtures", "random", "--seed", "9"], b"");
    let b = run(&["fixtures", "random", "--seed", "9"], b"");
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);

    let mesh = run(&["fixtures", "sphere"], b"");
    let p1 = run(&["perturb", "--eps", "1/64", "--seed", "4"], &mesh.stdout);
    let p2 = run(&["perturb", "--eps", "1/64", "--seed", "4"], &mesh.stdout);
    assert!(p1.status.success());
    assert_eq!(p1.stdout, p2.stdout);
}

#[test]
fn validate_realize_roundtrip_via_files() {
    let dir = std::env::temp_dir();
    let gpath = dir.join("orbitgraph-cli-realize.json");
    std::fs::write(&gpath, orbitgraph::io::graph_to_json(&orbitgraph::fixtures::figure2_graph()))
        .unwrap();
    let mesh = run(&["realize", gpath.to_str().unwrap(), "--refine", "2"], b"");
    assert!(mesh.status.success());
    let report = run(&["validate"], &mesh.stdout);
    assert!(report.status.success());
    let body: serde_json::Value = serde_json::from_str(&stdout_str(&report)).unwrap();
    assert_eq!(body["valid"], serde_json::json!(true));
    let dot = run(&["export-dot", gpath.to_str().unwrap()], b"");
    assert!(dot.status.success());
    assert!(stdout_str(&dot).starts_with("digraph"));
}
