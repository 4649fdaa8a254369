use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_angleset")).args(args).output().unwrap()
}

fn report(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn spiral_scenario_passes_and_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario("spiral_angle_set.json");
    let out = run(&[
        "--scenario",
        path.to_str().unwrap(),
        "--out",
        dir.path().to_str().unwrap(),
        "--emit",
        "angle_trace",
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["verdict"], "angle_set");
    let interval = &r["results"]["classification"]["result"];
    assert!((interval["theta1"].as_f64().unwrap() - std::f64::consts::FRAC_PI_3).abs() < 0.02);
    assert!((interval["theta2"].as_f64().unwrap() - 2.0 * std::f64::consts::FRAC_PI_3).abs() < 0.02);

    let saved = std::fs::read_to_string(dir.path().join("spiral_angle_set.report.json")).unwrap();
    assert_eq!(serde_json::from_str::<serde_json::Value>(&saved).unwrap(), r);
    let csv = std::fs::read_to_string(dir.path().join("spiral_angle_set_angle_trace.csv")).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("n,re,im,theta"));
    assert_eq!(lines.count(), 5000);
}

#[test]
fn failed_sandwich_exits_one() {
    let path = scenario("sandwich_failure.json");
    let out = run(&["--scenario", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(r["results"]["cond_i"]["verdict"], "fails_inner");
    let w = r["results"]["cond_i"]["witness"].as_array().unwrap()[0].as_f64().unwrap();
    assert!(w > 0.5 && w < 1.0, "witness real part {w}");
}

#[test]
fn malformed_input_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, r#"{"id": "x", "kind": "classify", "domain": {"kind": "half_plane"}, "sequence": {"type": "ray", "angle": "a", "count": 3}}"#).unwrap();
    let out = run(&["--scenario", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let err: serde_json::Value = serde_json::from_slice(&out.stderr).unwrap();
    assert_eq!(err["error"], "schema");
    assert!(err["path"].as_str().unwrap().starts_with("sequence"));

    std::fs::write(&bad, "{").unwrap();
    assert_eq!(run(&["--scenario", bad.to_str().unwrap()]).status.code(), Some(2));
    let missing = dir.path().join("missing.json");
    assert_eq!(run(&["--scenario", missing.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn emit_needs_out() {
    let path = scenario("spiral_angle_set.json");
    let out = run(&["--scenario", path.to_str().unwrap(), "--emit", "angle_trace"]);
    assert_eq!(out.status.code(), Some(2));
    let out = run(&["--scenario", path.to_str().unwrap(), "--emit", "nonsense"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn overrides_are_echoed_and_reruns_are_identical() {
    let path = scenario("half_plane_side.json");
    let args = ["--scenario", path.to_str().unwrap(), "--seed", "11", "--walks", "3000"];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let r = report(&a);
    assert_eq!(r["seed"], 11);
    assert_eq!(r["knobs"]["walks"], 3000);

    // the embedded scenario reproduces the report
    let dir = tempfile::tempdir().unwrap();
    let embedded = dir.path().join("embedded.json");
    std::fs::write(&embedded, r["scenario"].to_string()).unwrap();
    let c = run(&["--scenario", embedded.to_str().unwrap()]);
    assert_eq!(report(&c)["results"], r["results"]);
}

#[test]
fn every_bundled_scenario_runs() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios");
    for entry in std::fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        let out = run(&["--scenario", path.to_str().unwrap()]);
        let expected = if path.ends_with("sandwich_failure.json") { 1 } else { 0 };
        assert_eq!(out.status.code(), Some(expected), "{}: {}", path.display(), String::from_utf8_lossy(&out.stderr));
    }
}
