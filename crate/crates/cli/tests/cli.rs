use serde_json::Value;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qesdyn"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = run(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn unknown_flag_is_usage_error_without_output() {
    let out = run(&["dyn", "fixed-points", "--g", "1", "--frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(out.stdout.is_empty());
    assert!(!out.stderr.is_empty());
    assert_eq!(run(&["qes"]).status.code(), Some(1));
}

#[test]
fn help_and_version_succeed() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn fixed_points_at_unit_coupling() {
    let v = json(&["dyn", "fixed-points", "--g", "1"]);
    let fps = v["result"]["fixed_points"].as_array().unwrap();
    assert_eq!(fps.len(), 2);
    assert!(fps.iter().all(|f| f["location"]["kind"] == "real"));
    assert_eq!(fps[0]["class"], "center");
    assert_eq!(fps[1]["class"], "saddle");
    assert_eq!(v["config"]["global"]["a"].as_f64().unwrap(), 2.0 / 3.0);
    assert_eq!(v["config"]["global"]["b"].as_f64().unwrap(), 1.0);

    let all = json(&["dyn", "fixed-points", "--g", "1", "--include-complex"]);
    let fps = all["result"]["fixed_points"].as_array().unwrap();
    assert_eq!(fps.len(), 4);
    assert!(fps[2..].iter().all(|f| f["class"] == "non_real"));
}

#[test]
fn numerical_failures_exit_2() {
    let out = run(&["qes", "g", "--J", "2", "--branch", "printed"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert_eq!(
        run(&["qes", "verify", "--J", "3", "--branch", "printed"]).status.code(),
        Some(2)
    );
}

#[test]
fn bad_parameters_exit_1() {
    assert_eq!(run(&["qes", "g", "--J", "0"]).status.code(), Some(1));
    assert_eq!(
        run(&["qes", "spectrum", "--J", "2", "--format", "csv"]).status.code(),
        Some(1)
    );
    assert_eq!(run(&["dyn", "scan", "--steps", "1"]).status.code(), Some(1));
}

#[test]
fn output_is_byte_identical_across_runs() {
    for args in [
        &["qes", "table"][..],
        &["canon", "check", "--g", "0.5", "--seed", "11"],
        &["dyn", "scan", "--format", "csv", "--steps", "41"],
        &[
            "dyn",
            "integrate",
            "--g",
            "0.4",
            "--x0",
            "0.8",
            "--t-max",
            "5",
            "--format",
            "csv",
        ],
    ] {
        let (a, b) = (run(args), run(args));
        assert!(a.status.success());
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn csv_formats() {
    let out = run(&[
        "dyn",
        "integrate",
        "--g",
        "0.4",
        "--x0",
        "0.8",
        "--t-max",
        "1",
        "--every",
        "100",
        "--format",
        "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "t,x,y,H");
    assert_eq!(lines.len(), 12);
    assert_eq!(
        lines[1],
        "0.0000000000000000e0,8.0000000000000004e-1,0.0000000000000000e0,-4.5866666666666667e-1"
    );
    assert!(!text.contains('\r'));

    let out = run(&[
        "dyn", "scan", "--g-min", "1", "--g-max", "2", "--steps", "3", "--format", "csv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("g,fp,re_lambda,im_lambda,class\n"));
    assert!(text.lines().any(|l| l.ends_with(",iii,") || l.contains(",iii,")));
}

#[test]
fn spectrum_methods_agree_and_are_tagged() {
    let tri = json(&["qes", "spectrum", "--J", "5", "--method", "tri"]);
    let comp = json(&["qes", "spectrum", "--J", "5", "--method", "companion"]);
    assert_eq!(tri["method"], "tridiagonal");
    assert_eq!(comp["method"], "companion");
    let (t, c) = (
        tri["result"]["energies"].as_array().unwrap(),
        comp["result"]["energies"].as_array().unwrap(),
    );
    assert_eq!(t.len(), 5);
    for (x, y) in t.iter().zip(c) {
        assert!((x.as_f64().unwrap() - y.as_f64().unwrap()).abs() <= 1e-8);
    }
}

#[test]
fn verify_reports_all_sections() {
    let v = json(&["qes", "verify", "--J", "1", "--branch", "printed"]);
    let r = &v["result"];
    assert!(r["factorization_max_residual"].as_f64().unwrap() <= 1e-8);
    assert!(r["reality_certificate"].is_null());
    assert_eq!(r["flavor_equivalence"]["at_g"]["equivalent"], true);
    let eta = r["eta_diagnostics"].as_array().unwrap();
    let constant = eta.iter().find(|e| e["branch"] == "constant").unwrap();
    assert_eq!(constant["truncation_index"], 2);
}

#[test]
fn out_and_side_csv_files() {
    let dir = std::env::temp_dir().join(format!("qesdyn-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let (json_path, csv_path) = (dir.join("t.json"), dir.join("t.csv"));
    let out = run(&[
        "qes",
        "table",
        "--j-max",
        "3",
        "--out",
        json_path.to_str().unwrap(),
        "--csv",
        csv_path.to_str().unwrap(),
    ]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&json_path).unwrap()).unwrap();
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 3);
    assert_eq!(
        std::fs::read_to_string(&csv_path).unwrap().lines().count(),
        1 + 1 + 2 + 3
    );
    std::fs::remove_dir_all(&dir).unwrap();
}

#[test]
fn table_matches_golden_file() {
    let golden = include_str!("golden/qes_table.csv");
    let out = run(&["qes", "table", "--format", "csv"]);
    let fresh = String::from_utf8(out.stdout).unwrap();
    let (g_lines, f_lines): (Vec<_>, Vec<_>) = (golden.lines().collect(), fresh.lines().collect());
    assert_eq!(g_lines.len(), f_lines.len());
    assert_eq!(g_lines[0], f_lines[0]);
    for (g, f) in g_lines[1..].iter().zip(&f_lines[1..]) {
        let (g, f): (Vec<_>, Vec<_>) = (g.split(',').collect(), f.split(',').collect());
        assert_eq!((g[0], g[2], g[5]), (f[0], f[2], f[5]), "key/verdict");
        for k in [1, 3, 4] {
            let (x, y): (f64, f64) = (g[k].parse().unwrap(), f[k].parse().unwrap());
            assert!((x - y).abs() <= 1e-12 * x.abs().max(1.0), "{x} vs {y}");
        }
    }
}
