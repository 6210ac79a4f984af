use std::process::{Command, Output};

fn doldlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_doldlab")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON")
}

#[test]
fn betti_with_oracle() {
    let o = doldlab(&["betti", "--m", "2", "--nu", "1,1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("b_e = 2, b_o = 0, b'_e = 1, b'_o = 1"), "{s}");
    assert!(s.contains("oracle: agree"));
}

#[test]
fn degenerate_sphere_is_a_usage_error() {
    let o = doldlab(&["betti", "--m", "0", "--nu", "1,1"]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("CG(nu)"));
}

#[test]
fn malformed_input_exits_one() {
    assert_eq!(doldlab(&["betti", "--m", "2", "--nu", "1,x"]).status.code(), Some(1));
    assert_eq!(doldlab(&["betti", "--nu", "1,1"]).status.code(), Some(1));
    assert_eq!(doldlab(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(doldlab(&["verify", "--n-max", "1"]).status.code(), Some(1));
    assert_eq!(doldlab(&["verify", "--suite", "bogus"]).status.code(), Some(1));
    assert_eq!(doldlab(&["--help"]).status.code(), Some(0));
}

#[test]
fn betti_json_contract() {
    let o = doldlab(&["betti", "--m", "3", "--nu", "1,2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    for (k, want) in [("b_e", 2), ("b_o", 2), ("bp_e", 2), ("bp_o", 2), ("m", 3)] {
        assert_eq!(v[k], want, "{k}");
    }
    assert!(v["version"].is_string());
}

#[test]
fn json_output_is_deterministic() {
    for args in [
        &["betti", "--m", "4", "--nu", "2,1,1", "--format", "json"][..],
        &["presentation", "--m", "2", "--nu", "1,2", "--format", "json"][..],
        &["verify", "--m-max", "2", "--n-max", "3", "--format", "json"][..],
    ] {
        assert_eq!(doldlab(args).stdout, doldlab(args).stdout);
    }
}

#[test]
fn homology_table() {
    let o = doldlab(&["homology", "--m", "1", "--nu", "1,1", "--verify", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let groups: Vec<String> = v["degrees"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["homology"]["rank"].as_u64().unwrap(), d["homology"]["torsion"].as_array().unwrap().len()))
        .map(|(r, t)| format!("{r}/{t}"))
        .collect();
    assert_eq!(groups, ["1/0", "1/0", "0/1", "0/0"]);
    let text = stdout(&doldlab(&["homology", "--m", "1", "--nu", "1,1"]));
    assert!(text.contains("Z_2"));
}

#[test]
fn presentation_latex_case_two() {
    let o = doldlab(&["presentation", "--m", "3", "--nu", "1,1", "--format", "latex"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("case 2"));
    assert!(s.contains("{u_{3}}^{2}"));
}

#[test]
fn presentation_verifies() {
    let o = doldlab(&["presentation", "--m", "2", "--nu", "1,1", "--verify"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("verification: pass"));
}

#[test]
fn ktheory_summary_with_classical_check() {
    let o = doldlab(&["ktheory", "--m", "2", "--nu", "1,1"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("K^0 rank 2"));
    assert!(s.contains("A_0 = Z_2 exactly"));
    assert!(s.contains("classical table"));
    assert!(s.contains("identities: pass"));
}

#[test]
fn verify_filters_suites_and_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = doldlab(&[
        "verify", "--m-max", "2", "--n-max", "3", "--suite", "ktheory", "--format", "json", "--out",
        out.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let cases = v["cases"].as_array().unwrap();
    assert!(!cases.is_empty());
    assert!(cases.iter().all(|c| c["suite"] == "ktheory" && c["passed"] == true));
    assert!(v["version"].is_string());
}

#[test]
fn config_file_supplies_defaults() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("sweep.conf");
    std::fs::write(&cfg, "# small sweep\nm_max = 2\nn_max = 3\nsuite = homology,combinatorics\n").unwrap();
    let o = doldlab(&["verify", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let s = stdout(&o);
    assert!(s.contains("PASS homology"));
    assert!(!s.contains("ktheory"));
    assert!(s.contains("0 failed"));

    std::fs::write(&cfg, "colour = blue\n").unwrap();
    assert_eq!(doldlab(&["verify", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn thread_cap_is_honoured() {
    let o = Command::new(env!("CARGO_BIN_EXE_doldlab"))
        .args(["verify", "--m-max", "1", "--n-max", "2"])
        .env("DOLDLAB_THREADS", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0));
    let bad = Command::new(env!("CARGO_BIN_EXE_doldlab"))
        .args(["verify", "--m-max", "1", "--n-max", "2"])
        .env("DOLDLAB_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
