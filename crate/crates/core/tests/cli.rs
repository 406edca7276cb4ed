use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

use rftwirl::matcore::io::read_binary;
use rftwirl::schurweyl::SchurTransform;

fn rftwirl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_rftwirl")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", stdout(o)))
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn block_rows(o: &Output) -> Vec<(String, usize, usize)> {
    stdout(o)
        .lines()
        .skip(2)
        .map(|l| {
            let f: Vec<&str> = l.split_whitespace().collect();
            (f[0].to_string(), f[1].parse().unwrap(), f[2].parse().unwrap())
        })
        .collect()
}

fn generate(dir: &Path, name: &str, extra: &[&str]) -> String {
    let out = dir.join(name);
    let mut args = vec!["scheme", "generate", "--out", path_str(&out)];
    args.extend_from_slice(extra);
    let o = rftwirl(&args);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    out.to_str().unwrap().to_owned()
}

#[test]
fn schur_block_tables() {
    let o = rftwirl(&["schur", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let expect: Vec<(String, usize, usize)> =
        vec![("2".into(), 5, 1), ("1".into(), 3, 3), ("0".into(), 1, 2)];
    assert_eq!(block_rows(&o), expect);
    assert_eq!(block_rows(&rftwirl(&["schur", "--n", "1"])), vec![("1/2".to_string(), 2, 1)]);
    assert_eq!(
        block_rows(&rftwirl(&["schur", "--n", "3"])),
        vec![("3/2".to_string(), 4, 1), ("1/2".to_string(), 2, 2)]
    );
}

#[test]
fn schur_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let o = rftwirl(&["--no-timestamp", "schur", "--n", "3", "--out", path_str(dir.path()), "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let header = json(&o);
    assert_eq!(header["n_qubits"], 3);
    let on_disk: Value =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("schur_n3.json")).unwrap()).unwrap();
    assert_eq!(on_disk, header);
    let bin = std::fs::File::open(dir.path().join("schur_n3.bin")).unwrap();
    let u = read_binary(bin).unwrap();
    let t = SchurTransform::shared(3).unwrap();
    assert_eq!(u.max_abs_diff(t.unitary()).unwrap(), 0.0);
    assert!(dir.path().join("schur_n3.txt").exists());
}

#[test]
fn qubit_cap_and_override() {
    assert_eq!(rftwirl(&["schur", "--n", "40"]).status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_rftwirl"))
        .env("RFTWIRL_MAX_N", "3")
        .args(["schur", "--n", "4"])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn generate_and_certify() {
    let dir = tempfile::tempdir().unwrap();
    let tet = generate(dir.path(), "tet.json", &["--construction", "tetrahedron"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&tet).unwrap()).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 4);

    let octet = generate(dir.path(), "octet.json", &["--construction", "octet"]);
    let o = rftwirl(&["--no-timestamp", "scheme", "certify", "--in", &octet]);
    assert_eq!(o.status.code(), Some(0));
    let report = json(&o);
    assert_eq!(report["passed"], true);
    assert_eq!(report["n_states"], 8);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&octet).unwrap()).unwrap();
    let re = v["rho0"]["re"].as_array().unwrap();
    for (k, x) in re.iter().enumerate() {
        let expect = if k % 9 == 0 { 0.125 } else { 0.0 };
        assert!((x.as_f64().unwrap() - expect).abs() < 1e-12);
    }

    let su2 = generate(dir.path(), "su2.json", &["--construction", "su2-classical", "--n", "6", "--jmin", "2"]);
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&su2).unwrap()).unwrap();
    assert_eq!(v["states"].as_array().unwrap().len(), 25);
}

#[test]
fn certify_all_constructions() {
    let dir = tempfile::tempdir().unwrap();
    let cases: &[&[&str]] = &[
        &["--construction", "tetrahedron", "--srf", "both"],
        &["--construction", "perm-classical", "--n", "4", "--irreps", "1,0"],
        &["--construction", "perm-classical", "--n", "5"],
        &["--construction", "both-classical", "--n", "4"],
        &["--construction", "quantum-basis", "--n", "3", "--srf", "perm"],
        &["--construction", "quantum", "--n", "3", "--srf", "both"],
        &["--construction", "quantum", "--n", "4", "--srf", "perm"],
        &["--construction", "su2-classical", "--n", "5"],
    ];
    for (i, args) in cases.iter().enumerate() {
        let f = generate(dir.path(), &format!("s{i}.json"), args);
        let o = rftwirl(&["scheme", "certify", "--in", &f, "--format", "text"]);
        assert_eq!(o.status.code(), Some(0), "{args:?}: {}", stdout(&o));
        assert!(stdout(&o).contains("PASS"));
    }
}

#[test]
fn certify_failures_and_malformed_input() {
    let dir = tempfile::tempdir().unwrap();
    for srf in ["su2", "perm", "both"] {
        let f = generate(dir.path(), &format!("bad_{srf}.json"), &["--construction", "sabotaged", "--srf", srf]);
        let o = rftwirl(&["scheme", "certify", "--in", &f]);
        assert_eq!(o.status.code(), Some(2), "{srf}");
        assert_eq!(json(&o)["passed"], false);
    }
    let junk = dir.path().join("junk.json");
    std::fs::write(&junk, "{\"n\": 2").unwrap();
    assert_eq!(rftwirl(&["scheme", "certify", "--in", path_str(&junk)]).status.code(), Some(3));
    let missing = dir.path().join("absent.json");
    assert_eq!(rftwirl(&["scheme", "certify", "--in", path_str(&missing)]).status.code(), Some(3));
    assert_eq!(
        rftwirl(&["scheme", "generate", "--construction", "tetrahedron", "--n", "3"]).status.code(),
        Some(3)
    );
    assert_eq!(rftwirl(&["scheme", "generate", "--construction", "nonsense"]).status.code(), Some(3));
}

#[test]
fn capacity_json() {
    let o = rftwirl(&["--no-timestamp", "capacity", "--n-min", "3", "--n-max", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["rows"].as_array().unwrap().clone();
    let row = |srf: &str| rows.iter().find(|r| r["srf"] == srf).unwrap().clone();
    assert_eq!(row("su2")["quantum_qubits"].as_f64(), Some(2.0));
    assert_eq!(row("su2")["classical_cbits"].as_f64(), Some(3.0));
    assert_eq!(row("both")["classical_cbits"].as_f64(), Some(3.0));
    let text = stdout(&rftwirl(&["capacity", "--n-min", "1", "--n-max", "4"]));
    assert_eq!(text.lines().filter(|l| l.contains('|')).count(), 5);
}

#[test]
fn simulate_reports() {
    let dir = tempfile::tempdir().unwrap();
    let tet = generate(dir.path(), "tet.json", &["--construction", "tetrahedron"]);
    let transcript = dir.path().join("t.jsonl");
    let o = rftwirl(&[
        "--no-timestamp", "simulate", "--in", &tet, "--trials", "10000", "--seed", "3", "--out",
        path_str(&transcript),
    ]);
    assert_eq!(o.status.code(), Some(0));
    let s = json(&o);
    assert_eq!(s["bob_success_rate"].as_f64(), Some(1.0));
    let eve = s["eve_guess_rate"].as_f64().unwrap();
    assert!((0.48..=0.52).contains(&eve), "{eve}");
    let lines = std::fs::read_to_string(&transcript).unwrap();
    assert_eq!(lines.lines().count(), 10_000);
    let first: Value = serde_json::from_str(lines.lines().next().unwrap()).unwrap();
    for key in ["trial", "sent", "bob", "eve"] {
        assert!(first.get(key).is_some());
    }

    let o = rftwirl(&["simulate", "--in", &tet, "--trials", "2000", "--reuse-frame", "2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(json(&o)["reuse_frame"]["advantage"].as_f64().unwrap() > 0.0);

    let fixed = rftwirl(&["--no-timestamp", "simulate", "--in", &tet, "--trials", "500", "--strategy", "fixed"]);
    assert_eq!(fixed.status.code(), Some(0));
}

#[test]
fn simulate_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let tet = generate(dir.path(), "tet.json", &["--construction", "tetrahedron"]);
    let bad = generate(dir.path(), "bad.json", &["--construction", "sabotaged"]);
    assert_eq!(rftwirl(&["simulate", "--in", &bad, "--trials", "10"]).status.code(), Some(2));
    let o = rftwirl(&["simulate", "--in", &tet, "--seed", "abc"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(!o.stderr.is_empty());
    assert_eq!(rftwirl(&["simulate", "--in", &tet, "--reuse-frame", "3"]).status.code(), Some(3));
    assert_eq!(rftwirl(&["simulate", "--in", &tet, "--pair", "0,9"]).status.code(), Some(3));
    assert_eq!(rftwirl(&["simulate", "--in", &tet, "--pair", "7"]).status.code(), Some(3));
    let o = rftwirl(&["--no-timestamp", "simulate", "--in", &tet, "--trials", "200", "--pair", "1,3"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["strategy"]["b"], 3);
}

#[test]
fn output_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "a.json", &["--construction", "perm-classical", "--n", "4"]);
    let b = generate(dir.path(), "b.json", &["--construction", "perm-classical", "--n", "4"]);
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let run = || rftwirl(&["--no-timestamp", "simulate", "--in", &a, "--trials", "300", "--seed", "9"]).stdout;
    assert_eq!(run(), run());
    let cert = || rftwirl(&["--no-timestamp", "scheme", "certify", "--in", &a]).stdout;
    assert_eq!(cert(), cert());
    let stamped = json(&rftwirl(&["scheme", "certify", "--in", &a]));
    assert!(stamped["timestamp"].is_u64());
    assert!(json(&rftwirl(&["--no-timestamp", "scheme", "certify", "--in", &a])).get("timestamp").is_none());
}

#[test]
fn help_and_version() {
    assert_eq!(rftwirl(&["--help"]).status.code(), Some(0));
    assert_eq!(rftwirl(&["--version"]).status.code(), Some(0));
    assert_eq!(rftwirl(&[]).status.code(), Some(3));
}
