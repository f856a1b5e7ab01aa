use std::process::{Command, Output};

use serde_json::Value;

fn pseudoprob(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pseudoprob")).args(args).output().expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pseudoprob(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

fn stdout(args: &[&str]) -> String {
    let out = pseudoprob(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn temp_file(name: &str, contents: &str) -> std::path::PathBuf {
    let dir = std::env::temp_dir().join(format!("pseudoprob-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn probabilities(report: &Value) -> Vec<f64> {
    report["entries"].as_array().unwrap().iter().map(|e| e["p"].as_f64().unwrap()).collect()
}

#[test]
fn mixed_state_orthogonal_triple_is_uniform() {
    let r = json(&["scheme", "--bloch", "0,0,0", "--dirs", "z", "x", "y", "--recipe", "weyl"]);
    let p = probabilities(&r);
    assert_eq!(p.len(), 8);
    assert!(p.iter().all(|x| (x - 0.125).abs() < 1e-15));
    assert_eq!(r["negativity"], 0.0);
    assert_eq!(r["classical"], true);
    assert_eq!(r["recipe"], "weyl");
    assert_eq!(r["entries"][0]["a"], serde_json::json!([1, 1, 1]));
    assert_eq!(r["entries"][7]["a"], serde_json::json!([-1, -1, -1]));
}

#[test]
fn coplanar_unit_recipe_agrees_with_weyl_only_when_mixed() {
    let weyl = json(&["scheme", "--bloch", "0,0,0", "--dirs", "coplanar120"]);
    let p = probabilities(&weyl);
    assert_eq!(p.iter().filter(|x| (**x + 0.0625).abs() < 1e-12).count(), 2);
    assert_eq!(weyl["classical"], false);

    // at the maximally mixed state every ordering gives the same trace
    let unit = json(&["scheme", "--bloch", "0,0,0", "--dirs", "coplanar120", "--recipe", "unit:0"]);
    assert_eq!(unit["recipe"], serde_json::json!({"unit": 0}));
    let q = probabilities(&unit);
    assert!(p.iter().zip(&q).all(|(a, b)| (a - b).abs() < 1e-12));

    let weyl = probabilities(&json(&["scheme", "--bloch", "0.5,0,0.3", "--dirs", "coplanar120"]));
    let unit = probabilities(&json(&["scheme", "--bloch", "0.5,0,0.3", "--dirs", "coplanar120", "--recipe", "unit:0"]));
    assert!(weyl.iter().zip(&unit).any(|(a, b)| (a - b).abs() > 1e-3));
    assert!((unit.iter().sum::<f64>() - 1.0).abs() < 1e-12);
}

#[test]
fn scheme_csv_layout() {
    let text = stdout(&["scheme", "--bloch", "0,0,1", "--dirs", "z", "x", "--format", "csv"]);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "a1,a2,p");
    assert_eq!(lines[1], "1,1,0.5");
    assert_eq!(lines.len(), 7);
    assert_eq!(lines[6], "# classical=true");
}

#[test]
fn state_and_direction_files() {
    let state = temp_file("state.json", r#"{"rho":{"dim":2,"re":[[0.5,0],[0,0.5]],"im":[[0,0],[0,0]]}}"#);
    let dirs = temp_file("dirs.json", r#"[{"m":[0,0,2]},{"m":[1,0,0]},{"m":[0,1,0]}]"#);
    let r = json(&["scheme", "--state", state.to_str().unwrap(), "--dirs-file", dirs.to_str().unwrap()]);
    assert_eq!(r["observables"][0]["m"], serde_json::json!([0.0, 0.0, 1.0]));
    assert!(probabilities(&r).iter().all(|x| (x - 0.125).abs() < 1e-15));

    let bloch = temp_file("bloch.json", r#"{"bloch":[0,0,1]}"#);
    let r = json(&["scheme", "--state", bloch.to_str().unwrap(), "--dirs", "z"]);
    assert_eq!(probabilities(&r), vec![1.0, 0.0]);
}

#[test]
fn scan_negativity_rows() {
    let r = json(&["scan-negativity", "--pnorm", "1", "--theta-min", "120", "--theta-max", "120", "--steps", "2", "--degrees"]);
    let n = r["rows"][0]["negativity"].as_f64().unwrap();
    assert!((n - 0.125).abs() < 1e-12);

    let text = stdout(&["scan-negativity", "--pnorm", "0.8", "--theta-min", "90", "--theta-max", "180", "--steps", "2", "--degrees", "--format", "csv"]);
    let row: Vec<f64> = text.lines().nth(1).unwrap().split(',').map(|x| x.parse().unwrap()).collect();
    assert!((row[1] - 0.5 * (0.8 / 2f64.sqrt() - 0.5)).abs() < 1e-12);

    let zero = json(&["scan-negativity", "--pnorm", "0"]);
    let rows = zero["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 179);
    assert!(rows.iter().all(|r| r["negativity"] == 0.0));
}

#[test]
fn scan_negativity_clips_with_warning() {
    let out = pseudoprob(&["scan-negativity", "--pnorm", "1", "--theta-min", "-1", "--theta-max", "4", "--steps", "3"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("clipped"));
}

#[test]
fn classical_region_orthogonal_families() {
    let r = json(&["classical-region", "--family", "orthogonal-pair", "--samples", "40000"]);
    let row = &r["rows"][0];
    assert!((row["critical_radius"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-3);
    assert!((row["radius_fraction"].as_f64().unwrap() - 0.5f64.sqrt()).abs() < 1e-3);
    assert!((row["euclidean_volume_fraction"].as_f64().unwrap() - 0.3536).abs() < 0.01);

    let r = json(&["classical-region", "--family", "orthogonal-triple", "--samples", "1000"]);
    assert!((r["rows"][0]["critical_radius"].as_f64().unwrap() - 1.0 / 3f64.sqrt()).abs() < 1e-3);

    let r = json(&["classical-region", "--family", "free-pair", "--samples", "2000", "--geometry-grid", "200"]);
    assert!(r["rows"][0]["nonclassical_fraction"].as_f64().unwrap() > 0.99);
}

#[test]
fn spectrum_summaries() {
    for args in [["--dim", "2", "--ranks", "1,1"], ["--dim", "4", "--ranks", "2,1"]] {
        let mut full = vec!["spectrum", "--pairs", "1000"];
        full.extend(args);
        let r = json(&full);
        assert_eq!(r["summary"]["violations"], 0);
        assert_eq!(r["summary"]["pairs"], 1000);
    }
    let r = json(&["spectrum", "--dim", "3", "--ranks", "1,2", "--pairs", "50", "--commuting"]);
    assert!(r["rows"].as_array().unwrap().iter().all(|row| row["min_eig"].as_f64().unwrap() >= -1e-12));
}

#[test]
fn entanglement_examples() {
    let m = |alpha: &str| json(&["entanglement", "--schmidt-alpha", alpha])["monotone"].as_f64().unwrap();
    assert!((m("0.7853981634") - 1.0).abs() < 1e-9);
    assert_eq!(m("0"), 0.0);
    assert!((m("0.3926990817") - 0.5).abs() < 1e-9);

    let state = temp_file("bell.json", r#"{"amps_re":[0.7071067811865476,0,0,0.7071067811865476],"amps_im":[0,0,0,0]}"#);
    let r = json(&["entanglement", "--state", state.to_str().unwrap()]);
    assert!((r["monotone"].as_f64().unwrap() - 1.0).abs() < 1e-12);
    assert!(r["reduced_bloch_norm"].as_f64().unwrap() < 1e-12);
    assert!(r["n_max_reduced"].is_number());
}

#[test]
fn exit_codes() {
    let code = |args: &[&str]| pseudoprob(args).status.code();
    // usage errors
    assert_eq!(code(&["classical-region", "--family", "orthogonal-pair", "--samples", "0"]), Some(2));
    assert_eq!(code(&["scheme", "--bloch", "0,0", "--dirs", "z"]), Some(2));
    assert_eq!(code(&["scheme", "--bloch", "0,0,0", "--dirs", "z", "--recipe", "lexical"]), Some(2));
    assert_eq!(code(&["scan-negativity", "--pnorm", "1", "--steps", "1"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    let malformed = temp_file("malformed.json", r#"{"bloch":[0,0"#);
    assert_eq!(code(&["scheme", "--state", malformed.to_str().unwrap(), "--dirs", "z"]), Some(2));
    // domain errors
    assert_eq!(code(&["scheme", "--bloch", "1,1,1", "--dirs", "z"]), Some(3));
    assert_eq!(code(&["scheme", "--bloch", "0,0,0", "--dirs", "z", "x", "--recipe", "unit:1"]), Some(3));
    assert_eq!(code(&["scheme", "--bloch", "0,0,0", "--dirs", "z", "x", "y", "z", "x", "y", "z", "x", "y"]), Some(3));
    assert_eq!(code(&["scan-negativity", "--pnorm", "1.5"]), Some(3));
    let unnormalised = temp_file("unnormalised.json", r#"{"amps_re":[1,0.2,0,0],"amps_im":[0,0,0,0]}"#);
    assert_eq!(code(&["entanglement", "--state", unnormalised.to_str().unwrap()]), Some(3));
    let not_density = temp_file("rho.json", r#"{"rho":{"dim":2,"re":[[1.5,0],[0,-0.5]],"im":[[0,0],[0,0]]}}"#);
    assert_eq!(code(&["scheme", "--state", not_density.to_str().unwrap(), "--dirs", "z"]), Some(3));
}

#[test]
fn deterministic_runs_are_byte_identical() {
    for args in [
        vec!["classical-region", "--family", "orthogonal-triple", "--samples", "5000", "--seed", "42", "--deterministic"],
        vec!["spectrum", "--dim", "6", "--ranks", "3,2", "--pairs", "200", "--seed", "7", "--deterministic", "--format", "csv"],
        vec!["scan-negativity", "--pnorm", "0.6", "--deterministic"],
    ] {
        assert_eq!(pseudoprob(&args).stdout, pseudoprob(&args).stdout);
    }
    let a = json(&["classical-region", "--family", "orthogonal-pair", "--samples", "500", "--deterministic"]);
    assert!(a["metadata"].get("generated_unix").is_none());
    assert_eq!(a["params"]["seed"], 0);
    let b = json(&["classical-region", "--family", "orthogonal-pair", "--samples", "500"]);
    assert!(b["metadata"]["generated_unix"].is_u64());
    let c = json(&["classical-region", "--family", "orthogonal-pair", "--samples", "500", "--seed", "1"]);
    assert_ne!(a["rows"], c["rows"]);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("pseudoprob-out-{}.csv", std::process::id()));
    let out = pseudoprob(&["scan-negativity", "--pnorm", "1", "--steps", "5", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    assert_eq!(text.lines().count(), 6);
    std::fs::remove_file(path).unwrap();
}
