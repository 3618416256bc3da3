//! End-to-end tests of the `sol` binary: determinism, the byte-exact
//! trajectory header, exit codes, and agreement with the library.

use std::process::{Command, Output};

fn sol(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sol"))
        .args(args)
        .output()
        .expect("binary runs")
}

#[test]
fn identical_invocations_are_byte_identical() {
    let args = [
        "geodesic", "--k", "0.6", "--h", "0", "--periods", "1", "--dt", "0.05",
        "--format", "csv",
    ];
    let first = sol(&args);
    let second = sol(&args);
    assert!(first.status.success());
    assert_eq!(first.stdout, second.stdout);
    assert!(!first.stdout.is_empty());

    let json_args = [
        "geodesic", "--k", "0.6", "--h", "0", "--periods", "1", "--dt", "0.05",
        "--format", "json",
    ];
    let j1 = sol(&json_args);
    let j2 = sol(&json_args);
    assert!(j1.status.success());
    assert_eq!(j1.stdout, j2.stdout);

    // the shooting solver is deterministic as well
    let dist_args = ["distance", "--from", "0.2,0.1,0", "--to", "1,2,0.4", "--format", "json"];
    let d1 = sol(&dist_args);
    let d2 = sol(&dist_args);
    assert!(d1.status.success());
    assert_eq!(d1.stdout, d2.stdout);
}

#[test]
fn trajectory_header_is_byte_exact() {
    let out = sol(&["geodesic", "--k", "0.5", "--periods", "1", "--dt", "0.1"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("t,x,y,z,zdot,res_speed,res_grayson\n"));
}

#[test]
fn geodesic_periodicity_through_cli() {
    let out = sol(&["geodesic", "--k", "0.6", "--h", "0", "--periods", "2", "--dt", "0.01"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines().skip(1);
    let first: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let last: Vec<f64> = text
        .lines()
        .last()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    // z column returns to its starting value after two periods
    assert!((first[3] - last[3]).abs() < 1e-8, "{} vs {}", first[3], last[3]);
}

#[test]
fn invariants_subcommand_endpoint_values() {
    let out = sol(&["invariants", "--k", "0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    let sqrt2_pi = std::f64::consts::SQRT_2 * std::f64::consts::PI;
    assert!((row[2] - sqrt2_pi).abs() < 1e-12, "T(0)");
    assert!((row[4] - std::f64::consts::PI).abs() < 1e-12, "H(0)");
}

#[test]
fn distance_subcommand_closed_form() {
    let out = sol(&["distance", "--from", "0,0,0", "--to", "3,0,0"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let row = text.lines().nth(1).unwrap();
    let value: f64 = row.split(',').next().unwrap().parse().unwrap();
    assert!((value - 2.0 * 1.5f64.asinh()).abs() < 1e-10);
    assert!(row.contains("hyperbolic-closed-form"));
}

#[test]
fn json_samples_parse_back() {
    let out = sol(&["geodesic", "--k", "0.4", "--periods", "1", "--dt", "0.2", "--format", "json"]);
    assert!(out.status.success());
    let parsed: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(parsed["meta"]["class"], "generic");
    assert!(parsed["samples"].as_array().unwrap().len() > 3);
    assert!((parsed["meta"]["k"].as_f64().unwrap() - 0.4).abs() < 1e-15);
}

#[test]
fn exit_codes() {
    // invalid modulus: argument error, exit 2
    let out = sol(&["invariants", "--k", "1.5"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());

    // unknown flag: clap usage error, exit 2
    let out = sol(&["invariants", "--nonsense"]);
    assert_eq!(out.status.code(), Some(2));

    // unknown subcommand: exit 2
    let out = sol(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(2));

    // non-unit velocity: precondition error, exit 2
    let out = sol(&[
        "geodesic", "--point", "0,0,0", "--velocity", "1,1,1", "--t1", "1", "--dt", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));

    // vertical geodesics have no period: --periods is a class error
    let out = sol(&[
        "geodesic", "--point", "0,0,0", "--velocity", "0,0,1", "--periods", "1", "--dt", "0.1",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_file_sink() {
    let dir = std::env::temp_dir().join("sol_cli_test");
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("inv.csv");
    let out = sol(&["invariants", "--k", "0.3", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let written = std::fs::read_to_string(&path).unwrap();
    assert!(written.starts_with("k,A,T,M,H\n"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn invariants_with_derivatives_and_signs() {
    let out = sol(&["invariants", "--k", "0.5", "--derivatives"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("k,A,T,M,H,dT,dM,dH\n"));
    let row: Vec<f64> = text
        .lines()
        .nth(1)
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert!(row[5] > 0.0 && row[6] > 0.0 && row[7] > 0.0);

    // sign flags select the branch of (a, b)
    let out = sol(&["geodesic", "--k", "0.5", "--sign-a", "-", "--periods", "1", "--dt", "0.5"]);
    assert!(out.status.success());
}

#[test]
fn nil_subcommand_unit_speed() {
    let out = sol(&[
        "nil", "--point", "0,0,0", "--velocity", "0.6,0,0.8", "--t1", "2", "--dt", "0.25",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for line in text.lines().skip(1) {
        let res: f64 = line.split(',').next_back().unwrap().parse().unwrap();
        assert!(res.abs() < 1e-12, "NIL unit-speed residual {res}");
    }
}
