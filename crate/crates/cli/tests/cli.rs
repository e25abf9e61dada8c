use std::io::Write;
use std::process::{Command, Output};

use serde_json::Value;

fn pencil(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pencil"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = pencil(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("valid JSON")
}

#[test]
fn exact_scalar_reports_the_hand_sum() {
    let v = json(&["exact-scalar", "--d", "2", "--g", "2", "--x", "0.3,0.4", "--y", "0.3,0.4", "--exact"]);
    assert_eq!(v["command"], "exact-scalar");
    assert_eq!(v["output"]["exact"], "12981/10000");
    assert_eq!(v["output"]["float"], 1.2981);
    assert_eq!(v["inputs"]["command"]["x"], "0.3,0.4");
    assert!(v["elapsed_ms"].is_u64());
}

#[test]
fn scalar_limit_is_four_thirds() {
    let v = json(&["limit", "--x", "0.3,0.4", "--y", "0.3,0.4"]);
    assert_eq!(v["output"]["float"], 1.33333333333);
}

#[test]
fn k_one_moment_matches_scalar_moment() {
    for x in ["0.3,0.4", "1/3+1/5i,-1/7", "0.9"] {
        for d in ["1", "3", "5"] {
            let a = json(&["exact-moment", "--d", d, "--k", "1", "--x", x, "--exact"]);
            let b = json(&["exact-scalar", "--d", d, "--x", x, "--y", x, "--exact"]);
            assert!(a["output"]["exact"].is_string());
            assert_eq!(a["output"]["exact"], b["output"]["exact"], "x={x} d={d}");
        }
    }
}

#[test]
fn verify_bounds_csv_rows_are_ok() {
    let out = pencil(&["verify-bounds", "--n", "6", "--k", "2", "--d", "4", "--csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("lambda;mu;nu;d;ratio_num;ratio_den;bound;ok"));
    let rows: Vec<&str> = lines.collect();
    assert!(!rows.is_empty());
    for row in rows {
        let cols: Vec<&str> = row.split(';').collect();
        assert_eq!(cols.len(), 8);
        assert_eq!(cols[7], "true", "{row}");
    }
}

#[test]
fn matrix_limit_reads_tuple_files() {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    write!(f, r#"{{"k":1,"g":2,"matrices":[[[[0.3,0]]],[[[0.4,0]]]]}}"#).unwrap();
    let path = f.path().to_str().unwrap();
    let v = json(&["limit", "--matrices", path]);
    assert_eq!(v["output"]["float"], 1.33333333333);

    let mut bad = tempfile::NamedTempFile::new().unwrap();
    write!(bad, r#"{{"k":2,"g":1,"matrices":[[[[1,0]]]]}}"#).unwrap();
    let out = pencil(&["limit", "--matrices", bad.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn diagonal_limit_multiplies_kernels() {
    let v = json(&["diagonal-limit", "--x", "0.5;0.25"]);
    let want = 1.0 / ((1.0 - 0.25) * (1.0 - 0.125) * (1.0 - 0.125) * (1.0 - 0.0625));
    assert!((v["output"]["float"].as_f64().unwrap() - want).abs() < 1e-10);
}

#[test]
fn mc_is_reproducible_and_thread_independent() {
    let args = ["mc", "--d", "2", "--x", "0.3,0.4", "--samples", "3000", "--seed", "9", "--chunk", "500"];
    let a = json(&args);
    let mut with_threads = args.to_vec();
    with_threads.extend(["--threads", "3"]);
    let b = json(&with_threads);
    assert_eq!(a["output"], b["output"]);
    assert_eq!(a["output"]["samples"], 3000);
}

#[test]
fn randomized_commands_need_a_seed() {
    let out = pencil(&["mc", "--d", "2", "--x", "0.3"]);
    assert_eq!(out.status.code(), Some(3));
    let out = pencil(&["orthogonality", "--sigma", "(1)", "--tau", "(1)", "--alpha", "1"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn orthogonality_runs() {
    let v = json(&[
        "orthogonality", "--sigma", "(1 2)", "--tau", "(1 2)", "--alpha", "2,0", "--d", "4", "--samples", "2000",
        "--seed", "3",
    ]);
    assert_eq!(v["output"]["d"], 4);
    assert!(v["output"]["stderr"].as_f64().unwrap() > 0.0);
}

#[test]
fn max_ratio_reports_special_form() {
    let v = json(&["max-ratio", "--lambda", "4,4,3", "--d", "3"]);
    assert_eq!(v["output"]["all_special_form"], true);
    let v = json(&["max-ratio", "--lambda", "1,1", "--d", "2", "--a", "1"]);
    assert_eq!(v["output"]["best"]["ratio"], "1/2");
}

#[test]
fn conic_sweep_approaches_prediction() {
    let v = json(&["conic", "--x", "0.5", "--k", "2", "--d-values", "10,40"]);
    let rows = v["output"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1]["error"].as_f64().unwrap().abs() < 1e-6);
}

#[test]
fn exit_codes_separate_domain_and_parse_errors() {
    assert_eq!(pencil(&["exact-scalar", "--d", "2", "--x", "0.3,zz"]).status.code(), Some(3));
    assert_eq!(pencil(&["exact-scalar", "--d", "2", "--bogus", "1"]).status.code(), Some(3));
    assert_eq!(pencil(&["limit", "--x", "0.8,0.8"]).status.code(), Some(2));
    assert_eq!(pencil(&["exact-moment", "--d", "20", "--k", "1", "--x", "1.2", "--n-max", "5"]).status.code(), Some(2));
    assert_eq!(pencil(&["verify-bounds", "--n", "9", "--k", "2", "--d", "3"]).status.code(), Some(2));
    let out = pencil(&["exact-scalar", "--d", "2", "--bogus", "1"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--bogus"));
}

#[test]
fn json_payloads_round_trip() {
    let v = json(&["exact-scalar", "--d", "3", "--x", "1/3+1/4i,1/5", "--exact"]);
    let m: pencil_core::MomentValue = serde_json::from_value(v["output"].clone()).unwrap();
    assert_eq!(pencil_core::numbers::format_gauss(m.exact.as_ref().unwrap()), v["output"]["exact"].as_str().unwrap());
    let v = json(&["verify-bounds", "--n", "4", "--k", "2", "--d", "2"]);
    let reports: Vec<pencil_core::RatioReport> = serde_json::from_value(v["output"]["reports"].clone()).unwrap();
    assert_eq!(reports.len() as u64, v["output"]["count"].as_u64().unwrap());
}
