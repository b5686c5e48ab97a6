use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn data(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../core/data")
        .join(rel)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_periodica"))
        .args(args)
        .env_remove("PERIODICA_SEED")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn validate_reports_exit_codes_and_rules() {
    let dir = tempfile::tempdir().unwrap();
    let ok = run(&["validate", data("diagrams/hopf.pdg").to_str().unwrap()]);
    assert_eq!(ok.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&ok)).unwrap();
    assert_eq!(v["valid"], true);

    let empty = run(&["validate", &write(dir.path(), "empty.pdg", "")]);
    assert_eq!(empty.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&empty.stderr).contains("line 1"));

    let shared_slot = "pdg 1\nX 0 a b c d over=02\nP L 0 p\nP L 0 q\nP R 0 r\nP R 0 s\n\
                       A a p\nA b q\nA c r\nA d s\n";
    let bad = run(&["validate", &write(dir.path(), "bad.pdg", shared_slot)]);
    assert_eq!(bad.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&bad)).unwrap();
    let failed: Vec<&Value> = v["diagrams"][0]["rules"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|r| r["passed"] == false)
        .collect();
    assert_eq!(failed.len(), 1);
    assert_eq!(failed[0]["rule"], 5);
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["untangle"]).status.code(), Some(2));
    let hopf = data("diagrams/hopf.pdg");
    let o = run(&["untangle", hopf.to_str().unwrap(), "--method", "sideways"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn straight_thread_projects_to_one_marker() {
    let dir = tempfile::tempdir().unwrap();
    let net = write(
        dir.path(),
        "thread.net",
        "vertex a 0.3 0.4 0.5\nedge a a 0 0 1\n",
    );
    let o = run(&["project", &net, "--axis", "3"]);
    assert_eq!(
        o.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&o.stderr)
    );
    let d = periodica::parse_diagram(&stdout(&o)).unwrap();
    assert_eq!((d.marker_count(), d.crossing_count()), (1, 0));
}

#[test]
fn dia_c_projects_to_zero_crossings_and_renders_without_crossings() {
    let dir = tempfile::tempdir().unwrap();
    let net = data("nets/dia-c.net");
    let pdg = dir.path().join("dia-c.pdg");
    let o = run(&[
        "project",
        net.to_str().unwrap(),
        "--simplify",
        "-o",
        pdg.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let t = periodica::parse_tridiagram(&std::fs::read_to_string(&pdg).unwrap()).unwrap();
    assert_eq!(t.triplet().as_array(), [0, 0, 0]);

    // Rendering consumes exactly what projection emits.
    let svg = run(&["render", pdg.to_str().unwrap()]);
    assert_eq!(svg.status.code(), Some(0));
    let svg = stdout(&svg);
    assert_eq!(svg.matches("class=\"diagram\"").count(), 3);
    assert_eq!(svg.matches("class=\"crossing\"").count(), 0);

    let split = dir.path().join("split");
    let o = run(&[
        "render",
        pdg.to_str().unwrap(),
        "--split",
        split.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    for a in 1..=3 {
        assert!(split.join(format!("axis-{a}.svg")).exists());
    }
}

#[test]
fn projection_is_deterministic_per_seed() {
    let net = data("nets/srs-translated.net");
    let a = run(&["project", net.to_str().unwrap(), "--seed", "11"]);
    let b = run(&["project", net.to_str().unwrap(), "--seed", "11"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let env = Command::new(env!("CARGO_BIN_EXE_periodica"))
        .args(["project", net.to_str().unwrap()])
        .env("PERIODICA_SEED", "11")
        .output()
        .unwrap();
    assert_eq!(env.stdout, a.stdout);
}

#[test]
fn untangle_reports_json() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "thread.pdg", "pdg 1\nP L 0 a\nP R 0 b\nA a b\n");
    let o = run(&["untangle", &zero]);
    assert_eq!(o.status.code(), Some(0));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["u_upper"], 0);

    let hopf = data("diagrams/hopf.pdg");
    for method in ["fixed", "bfs"] {
        let o = run(&["untangle", hopf.to_str().unwrap(), "--method", method]);
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["u_upper"], 1, "{method}");
    }

    let o = run(&[
        "untangle",
        hopf.to_str().unwrap(),
        "--method",
        "fixed",
        "--max-states",
        "2",
    ]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("budget"));
}

#[test]
fn pretty_prints_a_table() {
    let hopf = data("diagrams/hopf.pdg");
    let o = run(&["--pretty", "untangle", hopf.to_str().unwrap()]);
    let text = stdout(&o);
    assert!(text.contains("u_upper"));
    assert!(serde_json::from_str::<Value>(&text).is_err());
}

#[test]
fn simplify_removes_a_curl() {
    let o = run(&["simplify", data("diagrams/curl.pdg").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let d = periodica::parse_diagram(&stdout(&o)).unwrap();
    assert_eq!(d.crossing_count(), 0);
}

#[test]
fn batch_continues_past_failures() {
    let o = run(&[
        "batch",
        data("nets/srs.net").to_str().unwrap(),
        "/no/such/file.pdg",
        data("diagrams/hopf.pdg").to_str().unwrap(),
        "--untangle",
        "1",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[0]["ground"], true);
    assert!(rows[1]["error"].is_string());
    assert_eq!(rows[2]["u_upper"][0], 1);
}
