use std::path::{Path, PathBuf};
use std::process::Command;

use rigidkit_cli::report::AnalysisReport;
use rigidkit_core::corpus::CORPUS;
use serde_json::Value;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn rigidkit(args: &[&str]) -> Run {
    let out = Command::new(env!("CARGO_BIN_EXE_rigidkit")).args(args).output().unwrap();
    Run {
        code: out.status.code().unwrap(),
        stdout: String::from_utf8(out.stdout).unwrap(),
        stderr: String::from_utf8(out.stderr).unwrap(),
    }
}

fn corpus_file(name: &str) -> String {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/corpus")
        .join(format!("{name}.json"))
        .display()
        .to_string()
}

/// Copies the bundled corpus into a fresh directory, applying `edit` to
/// the named entry.
fn corpus_dir(target: &str, edit: impl Fn(&mut Value)) -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    for e in CORPUS.iter() {
        let mut v: Value = serde_json::from_str(e.json).unwrap();
        if e.name == target {
            edit(&mut v);
        }
        std::fs::write(dir.path().join(format!("{}.json", e.name)), v.to_string()).unwrap();
    }
    dir
}

fn write(dir: &Path, name: &str, content: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, content).unwrap();
    p
}

const SQUARE: &str = r#"{"dimension": 2, "vertices": [[0,0],[1,0],[1,1],[0,1]], "edges": [[1,2],[2,3],[3,4],[4,1]]}"#;

#[test]
fn bundled_corpus_verifies() {
    let run = rigidkit(&["corpus-verify"]);
    assert_eq!(run.code, 0, "{}", run.stdout);
    assert!(run.stdout.contains("8/8 match"));
}

#[test]
fn corpus_verify_honors_thread_cap() {
    let out = Command::new(env!("CARGO_BIN_EXE_rigidkit"))
        .arg("corpus-verify")
        .env("RIGIDKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_rigidkit"))
        .arg("corpus-verify")
        .env("RIGIDKIT_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn perturbed_vertex_is_a_mismatch() {
    let dir = corpus_dir("asym_flipped_prism", |v| {
        let x = v["vertices"][0][0].as_f64().unwrap();
        v["vertices"][0][0] = Value::from(x + 1e-2);
    });
    let run = rigidkit(&["corpus-verify", "--dir", dir.path().to_str().unwrap()]);
    assert_eq!(run.code, 2);
    let line = run.stdout.lines().find(|l| l.starts_with("asym_flipped_prism")).unwrap();
    assert!(line.contains("MISMATCH"), "{line}");
    assert!(run.stdout.contains("7/8 match"));
}

#[test]
fn removing_k33_edges() {
    // one edge: the self-stress loses its support, dim K stays 1, the rest flexes
    let one = corpus_dir("k33", |v| {
        v["edges"].as_array_mut().unwrap().remove(0);
    });
    let run = rigidkit(&["corpus-verify", "--dir", one.path().to_str().unwrap(), "--json"]);
    assert_eq!(run.code, 2);
    let lines: Value = serde_json::from_str(&run.stdout).unwrap();
    let k33 = lines.as_array().unwrap().iter().find(|l| l["name"] == "k33").unwrap();
    assert_eq!(k33["dim_k"], 1);
    assert_eq!(k33["verdict"]["kind"], "flex_found_up_to");
    assert_eq!(k33["ok"], false);

    // two edges: dim K = 2, handled by the order-4 energy test
    let two = corpus_dir("k33", |v| {
        let edges = v["edges"].as_array_mut().unwrap();
        edges.remove(0);
        edges.pop();
    });
    let run = rigidkit(&["corpus-verify", "--dir", two.path().to_str().unwrap()]);
    assert_eq!(run.code, 2);
    let line = run.stdout.lines().find(|l| l.starts_with("k33")).unwrap();
    assert!(line.contains("dimK 2"), "{line}");
    assert!(line.contains("MISMATCH"), "{line}");
}

#[test]
fn analyze_reports_corpus_orders() {
    let run = rigidkit(&["analyze", &corpus_file("half_flat_prism")]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("rigidity order 4 (ladder)"), "{}", run.stdout);
    let run = rigidkit(&["analyze", &corpus_file("leonardo3")]);
    assert!(run.stdout.contains("rigidity order 8 (ladder)"), "{}", run.stdout);
    assert!(run.stdout.contains("n=7 |G|=11 N=11"));
}

#[test]
fn square_has_no_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let square = write(dir.path(), "square.json", SQUARE);
    let run = rigidkit(&["analyze", square.to_str().unwrap(), "--max-k", "10"]);
    assert_eq!(run.code, 0);
    assert!(run.stdout.contains("no rigidity certificate up to k=10; (1,10)-flex found"), "{}", run.stdout);
    let run = rigidkit(&["analyze", square.to_str().unwrap(), "--expect", "2"]);
    assert_eq!(run.code, 2);
}

#[test]
fn json_report_round_trips() {
    for args in [
        vec!["analyze", "--json"],
        vec!["analyze", "--json", "--growth", "--n", "4", "--starts", "8", "--no-timings"],
    ] {
        let mut full = args.clone();
        let path = corpus_file("k33");
        full.insert(1, &path);
        let run = rigidkit(&full);
        assert_eq!(run.code, 0, "{}", run.stderr);
        let report = AnalysisReport::from_json(&run.stdout).unwrap();
        assert_eq!(report.to_json() + "\n", run.stdout);
        assert_eq!(report.method.tag(), "ladder");
        assert_eq!(report.dim_k, 1);
    }
}

#[test]
fn coned_prism_is_relabeled() {
    let path = corpus_file("coned_prism");
    let run = rigidkit(&["analyze", &path, "--json"]);
    let report = AnalysisReport::from_json(&run.stdout).unwrap();
    assert!(!report.is_identity_permutation());
    assert_eq!(report.summary, "rigidity order 4 (ladder)");
    let strict = rigidkit(&["analyze", &path, "--no-auto-permute"]);
    assert_eq!(strict.code, 3, "{}", strict.stderr);
}

#[test]
fn growth_is_deterministic_and_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("g.csv");
    let path = corpus_file("k33");
    let args = ["growth", &path, "--n", "5", "--starts", "8", "--seed", "3"];
    let a = rigidkit(&args);
    let b = rigidkit(&args);
    assert_eq!(a.code, 0);
    assert_eq!(a.stdout, b.stdout);
    let mut with_csv = args.to_vec();
    with_csv.extend(["--csv", csv.to_str().unwrap()]);
    let run = rigidkit(&with_csv);
    assert!(run.stdout.starts_with("fit: s = "));
    let table = std::fs::read_to_string(&csv).unwrap();
    let mut lines = table.lines();
    assert_eq!(lines.next(), Some("r,m_r,log_r,log_m"));
    assert_eq!(lines.count(), 5);
    let too_big = rigidkit(&["growth", &path, "--rmax", "10"]);
    assert_eq!(too_big.code, 1);
}

#[test]
fn energy_coefficients_along_order_witness() {
    let dir = tempfile::tempdir().unwrap();
    let path = corpus_file("k33");
    let order = rigidkit(&["order", &path, "--json"]);
    let traj = write(dir.path(), "w.json", &order.stdout);
    let run = rigidkit(&["energy", &path, "--family", "lj", "--traj", traj.to_str().unwrap(), "--order", "7"]);
    assert_eq!(run.code, 0, "{}", run.stderr);
    let rows: Vec<Vec<f64>> = run
        .stdout
        .lines()
        .skip(1)
        .map(|l| l.split(',').map(|x| x.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 8);
    let c6 = rows[6][1];
    assert!(c6 > 0.0);
    assert!(rows[1..6].iter().all(|r| r[1].abs() < 1e-8 * c6));
    let bad = write(dir.path(), "bad.json", r#"{"coeffs": [[1.0, 2.0]]}"#);
    assert_eq!(rigidkit(&["energy", &path, "--traj", bad.to_str().unwrap()]).code, 1);
}

#[test]
fn critpoint_commands() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(
        dir.path(),
        "p.json",
        r#"[{"exps":[2,0],"coef":1},{"exps":[1,2],"coef":-2},{"exps":[0,4],"coef":2}]"#,
    );
    let run = rigidkit(&["critpoint", "--poly", poly.to_str().unwrap()]);
    let v: Value = serde_json::from_str(&run.stdout).unwrap();
    assert_eq!(v["classification"], "strict_min");

    let path = corpus_file("k33");
    let at3: Value = serde_json::from_str(&rigidkit(&["critpoint", &path, "--order", "3"]).stdout).unwrap();
    assert_eq!(at3["classification"], "strict_min");
    let at2: Value = serde_json::from_str(&rigidkit(&["critpoint", &path, "--order", "2"]).stdout).unwrap();
    assert_eq!(at2["classification"], "inconclusive");
    // no (1,3)-flex exists for an order-3 framework
    assert_eq!(rigidkit(&["critpoint", &path, "--order", "4"]).code, 3);
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(rigidkit(&["analyze"]).code, 1);
    assert_eq!(rigidkit(&["analyze", "/nonexistent/file.json"]).code, 1);
    assert_eq!(rigidkit(&["frobnicate"]).code, 1);
    assert_eq!(rigidkit(&["--help"]).code, 0);
    let dir = tempfile::tempdir().unwrap();
    let broken = write(dir.path(), "b.json", r#"{"dimension": 2, "vertices": [[0,0],[0,0]], "edges": [[1,2]]}"#);
    let run = rigidkit(&["analyze", broken.to_str().unwrap()]);
    assert_eq!(run.code, 1);
    assert!(run.stderr.contains("coincident"), "{}", run.stderr);
}
