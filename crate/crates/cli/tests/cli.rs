use std::io::Write;
use std::process::{Command, Output, Stdio};

fn fixture(name: &str) -> String {
    format!("{}/tests/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn forestbn(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forestbn")).args(args).output().unwrap()
}

fn with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_forestbn"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(input.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn stderr(out: &Output) -> String {
    String::from_utf8(out.stderr.clone()).unwrap()
}

#[test]
fn forest_tsv_on_path() {
    let out = forestbn(&["forest", "--input", &fixture("path.graph"), "--mode", "exact", "--format", "tsv"]);
    assert_eq!(stdout(&out), "# f=4\n2\t1\t1\n0\t2\t2\n0\t0\t4\n");
}

#[test]
fn forest_json_reparses_to_the_same_values() {
    let out = forestbn(&["forest", "--input", &fixture("triangle.graph"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["f"], "6");
    assert_eq!(v["F"], serde_json::json!([["2", "1", "3"], ["0", "3", "3"], ["0", "0", "6"]]));
    assert_eq!(v["Q"][0], serde_json::json!(["1/3", "1/6", "1/2"]));
}

#[test]
fn float_mode_prints_decimals() {
    let out = forestbn(&["forest", "--input", &fixture("path.graph"), "--mode", "float"]);
    assert_eq!(stdout(&out), "# f=4\n2\t1\t1\n0\t2\t2\n0\t0\t4\n");
    let out = forestbn(&["proximity", "--input", &fixture("triangle.graph"), "--mode", "float"]);
    let first: Vec<f64> =
        stdout(&out).lines().next().unwrap().split('\t').map(|x| x.parse().unwrap()).collect();
    assert!((first[0] - 1.0 / 3.0).abs() < 1e-12);
    assert!((first[2] - 0.5).abs() < 1e-12);
}

#[test]
fn bottleneck_lines() {
    let out = forestbn(&["bottleneck", "--input", &fixture("path.graph"), "-i", "1", "-j", "2", "-k", "3"]);
    assert_eq!(stdout(&out), "equal separator=true lhs=2 rhs=2\n");
    let out = forestbn(&["bottleneck", "--input", &fixture("triangle.graph"), "-i", "1", "-j", "2", "-k", "3"]);
    assert_eq!(stdout(&out), "strict separator=false lhs=3 rhs=9\n");
}

#[test]
fn verify_triangle_summary() {
    let out = forestbn(&["verify", "--input", &fixture("triangle.graph")]);
    assert_eq!(stdout(&out), "triples=27 equal=18 strict=9 inconsistent=0\noracle=match\n");
}

#[test]
fn verify_skips_oracle_above_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_forestbn"))
        .args(["verify", "--input", &fixture("triangle.graph")])
        .env("FOREST_ORACLE_CAP", "3")
        .output()
        .unwrap();
    assert!(stdout(&out).ends_with("oracle=skipped\n"));
}

#[test]
fn verify_undirected_triangle() {
    let out = forestbn(&["verify", "--input", &fixture("triangle.graph"), "--undirected"]);
    assert!(stdout(&out).ends_with("inconsistent=0\noracle=match\n"));
}

#[test]
fn enumerate_path() {
    let out = forestbn(&["enumerate", "--input", &fixture("path.graph")]);
    assert_eq!(
        stdout(&out),
        "root root root\t1\n1 root root\t1\nroot 2 root\t1\n1 2 root\t1\n# forests=4 f=4\n"
    );
}

#[test]
fn routes_closed_form_and_series() {
    let out = forestbn(&["routes", "--input", &fixture("path.graph")]);
    assert_eq!(stdout(&out), "# epsilon=1/2 method=closed-form\n3/2\t3/4\t3/4\n0\t3/2\t3/2\n0\t0\t3\n");

    let out = forestbn(&["routes", "--input", &fixture("path.graph"), "--mode", "float", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v["method"], "series");
    let bound = v["tail_bound"].as_f64().unwrap();
    let exact = [[1.5, 0.75, 0.75], [0.0, 1.5, 1.5], [0.0, 0.0, 3.0]];
    for (i, row) in exact.iter().enumerate() {
        for (j, x) in row.iter().enumerate() {
            let got: f64 = v["R"][i][j].as_str().unwrap().parse().unwrap();
            assert!((got - x).abs() <= bound, "({i},{j}): {got} vs {x}");
        }
    }
}

#[test]
fn decompose_triangle() {
    let out = forestbn(&["decompose", "--input", &fixture("triangle.graph"), "-i", "1", "-j", "2", "-k", "3"]);
    let text = stdout(&out);
    for line in ["epsilon=1/4", "r_ij=5/6", "r_ik=5/2", "r_i_notj_k=5/3", "relation=strict", "identities=true"] {
        assert!(text.lines().any(|l| l == line), "missing {line} in\n{text}");
    }
    let out = forestbn(&[
        "decompose", "--input", &fixture("path.graph"), "-i", "1", "-j", "2", "-k", "3", "--epsilon", "1/3",
    ]);
    let text = stdout(&out);
    assert!(text.contains("r_i_notj_k=0\n") && text.contains("relation=equal\n"));
}

#[test]
fn stdin_input() {
    let text = std::fs::read_to_string(fixture("path.graph")).unwrap();
    for args in [
        &["forest", "--input", "-"][..],
        &["proximity", "--input", "-"],
        &["enumerate", "--input", "-"],
        &["routes", "--input", "-"],
        &["verify", "--input", "-"],
        &["bottleneck", "--input", "-", "-i", "1", "-j", "2", "-k", "3"],
        &["decompose", "--input", "-", "-i", "1", "-j", "2", "-k", "3"],
    ] {
        let out = with_stdin(args, &text);
        let path = fixture("path.graph");
        let from_file: Vec<&str> =
            args.iter().map(|a| if *a == "-" { path.as_str() } else { a }).collect();
        assert_eq!(stdout(&out), stdout(&forestbn(&from_file)), "{args:?}");
    }
}

#[test]
fn json_graph_input() {
    let json = r#"{"n": 3, "directed": true, "arcs": [[1, 2, "1"], [2, 3, "1"]]}"#;
    let out = with_stdin(&["forest", "--input", "-"], json);
    assert_eq!(stdout(&out), "# f=4\n2\t1\t1\n0\t2\t2\n0\t0\t4\n");
}

#[test]
fn gen_fixed_kinds() {
    assert_eq!(stdout(&forestbn(&["gen", "path", "3", "--weights", "1"])), "digraph 3\n1 2 1\n2 3 1\n");
    let complete = stdout(&forestbn(&["gen", "complete", "3", "--weights", "1"]));
    let arcs: Vec<&str> = complete.lines().skip(1).collect();
    assert_eq!(arcs.len(), 6);
    assert!(arcs.iter().all(|l| l.ends_with(" 1")));
}

#[test]
fn gen_random_is_deterministic() {
    let a = forestbn(&["gen", "random", "4", "--seed", "7"]);
    let b = forestbn(&["gen", "random", "4", "--seed", "7"]);
    assert_eq!(stdout(&a), stdout(&b));
    let c = forestbn(&["gen", "random", "6", "--seed", "7", "--weights", "1..5"]);
    let d = forestbn(&["gen", "random", "6", "--seed", "7", "--weights", "1..5"]);
    assert_eq!(c.stdout, d.stdout);
}

#[test]
fn emitted_graphs_round_trip() {
    let first = stdout(&forestbn(&["gen", "random", "5", "--seed", "11", "--weights", "1..5"]));
    let path = std::env::temp_dir().join(format!("forestbn-roundtrip-{}.graph", std::process::id()));
    std::fs::write(&path, &first).unwrap();
    let json = stdout(&forestbn(&["gen", "random", "5", "--seed", "11", "--weights", "1..5", "--format", "json"]));
    // Both encodings describe the same graph, so every command agrees on them.
    let via_text = stdout(&forestbn(&["forest", "--input", path.to_str().unwrap()]));
    let via_json = stdout(&with_stdin(&["forest", "--input", "-"], &json));
    std::fs::remove_file(&path).unwrap();
    assert_eq!(via_text, via_json);
}

#[test]
fn input_errors_exit_1() {
    let out = forestbn(&["bottleneck", "--input", &fixture("path.graph"), "-i", "1", "-j", "4", "-k", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:input:"));

    let out = with_stdin(&["forest", "--input", "-"], "digraph 2\n1 2 0\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:"));

    let out = with_stdin(&["forest", "--input", "-"], "digraph 2\n1 5 1\n");
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).starts_with("error:parse:"));

    let out = forestbn(&["routes", "--input", &fixture("path.graph"), "--epsilon", "2"]);
    assert_eq!(out.status.code(), Some(1));

    let out = forestbn(&["forest", "--input", "/nonexistent/graph"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn usage_errors_exit_1() {
    for args in [&["nope"][..], &["forest"], &["forest", "--input", "x", "--bogus"], &["gen", "path", "1"]] {
        let out = forestbn(args);
        assert_eq!(out.status.code(), Some(1), "{args:?}");
        assert!(stderr(&out).starts_with("error:"), "{args:?}");
    }
    assert_eq!(forestbn(&["--help"]).status.code(), Some(0));
    assert_eq!(forestbn(&["--version"]).status.code(), Some(0));
}

#[test]
fn resource_errors_exit_2() {
    let out = forestbn(&["routes", "--input", &fixture("path.graph"), "--mode", "float", "--max-terms", "3"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:not-converged:"));

    let out = Command::new(env!("CARGO_BIN_EXE_forestbn"))
        .args(["enumerate", "--input", &fixture("triangle.graph")])
        .env("FOREST_ORACLE_CAP", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr(&out).starts_with("error:too-large:"));
}

#[test]
fn parallel_arcs_enumerate_separately() {
    let out = forestbn(&["enumerate", "--input", &fixture("unsorted.graph"), "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    // Parallel arcs 1->2 of weights 3 and 1/4 count as separate forests.
    assert_eq!(v["count"], 6);
    assert_eq!(v["f"], "51/8");
}
