//! Exit codes and output shape of the command-line front end.

use std::process::{Command, Output};

use serde_json::Value;

fn ellcoh(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ellcoh"))
        .args(args)
        .env_remove("ELLCOH_PREC")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    let out = ellcoh(args);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

#[test]
fn value_examples() {
    let v = json(&["value", "--rep", "(1,0):1,(0,1):1", "--sign", "+"]);
    assert_eq!((v["even"].as_u64(), v["odd"].as_u64()), (Some(1), Some(0)));
    assert_eq!(v["schema"], "ellcoh/1");
    let v = json(&["value", "--rep", "(1,0):1", "--sign", "+"]);
    assert_eq!((v["even"].as_u64(), v["odd"].as_u64()), (Some(1), Some(1)));
    assert_eq!(
        ellcoh(&["value", "--rep", "(0,0):1"]).status.code(),
        Some(2)
    );
    assert_eq!(ellcoh(&["value", "--rep", "(1,0:1"]).status.code(), Some(2));
}

#[test]
fn fgl_examples() {
    let v = json(&["fgl", "log", "--curve", "0,0,0,1,0", "--prec", "6"]);
    assert_eq!(v["coefficients"][1], "1");
    assert_eq!(v["coefficients"][5], "2/5");
    let v = json(&[
        "fgl",
        "fundrel",
        "--subgroup",
        "1/3,1/3",
        "--dir",
        "0,1",
        "--prec",
        "8",
    ]);
    assert_eq!(v["holds"], true);
    assert_eq!(
        ellcoh(&["fgl", "log", "--curve", "0,0,0,-3,2"])
            .status
            .code(),
        Some(3)
    );
}

#[test]
fn subgroup_examples() {
    let v = json(&["subgroup", "--gens", "1/2,0;0,1/2"]);
    assert_eq!(v["order"], 4);
    assert!(v["directions"]
        .as_array()
        .unwrap()
        .iter()
        .all(|d| d["n"] == 2));
    let v = json(&["subgroup", "--gens", ""]);
    assert_eq!(v["order"], 1);
    let v = json(&["subgroup", "--gens", "1/3,1/3"]);
    assert_eq!(v["split"][0]["dir"], "(-1,1)");
    assert_eq!(v["split"][0]["n"], 1);
    assert_eq!(v["split"][1]["dir"], "(1,0)");
    assert_eq!(v["split"][1]["n"], 3);
}

#[test]
fn cousin_examples() {
    let v = json(&[
        "cousin",
        "--dirs",
        "(1,0),(0,1)",
        "--polecap",
        "2",
        "--prec",
        "8",
    ]);
    assert_eq!(v["all_pass"], true);
    assert_eq!(
        ellcoh(&["cousin", "--dirs", "(1,0),(1,0)"]).status.code(),
        Some(3)
    );
    assert_eq!(
        ellcoh(&[
            "cousin",
            "--dirs",
            "(1,0),(0,1)",
            "--polecap",
            "2",
            "--prec",
            "4"
        ])
        .status
        .code(),
        Some(3)
    );
}

#[test]
fn tsv_output_has_a_header() {
    let out = ellcoh(&[
        "intersect",
        "--dirs",
        "(1,0),(0,1)",
        "--max-j",
        "2",
        "--format",
        "tsv",
    ]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "j\tl\tformula");
    assert_eq!(lines.len(), 5);
    assert_eq!(lines[1], "1\t1\t1");
}

#[test]
fn config_file_and_env_precedence() {
    let path = std::env::temp_dir().join(format!("ellcoh-cli-{}.conf", std::process::id()));
    std::fs::write(&path, "prec=5\nformat=tsv\n").unwrap();
    let p = path.to_str().unwrap();
    let out = ellcoh(&["fgl", "log", "--config", p]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 6);
    let out = ellcoh(&["fgl", "log", "--config", p, "--prec", "7"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap().lines().count(), 8);
    let out = Command::new(env!("CARGO_BIN_EXE_ellcoh"))
        .args(["fgl", "log"])
        .env("ELLCOH_PREC", "4")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["prec"], 4);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(
        ellcoh(&["fgl", "log", "--config", "/nonexistent/x"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn brute_force_guard() {
    assert_eq!(
        ellcoh(&[
            "intersect",
            "--dirs",
            "(1,0),(1,4)",
            "--max-j",
            "5",
            "--brute"
        ])
        .status
        .code(),
        Some(3)
    );
    let v = json(&["intersect", "--dirs", "(1,0),(1,2)", "--brute"]);
    assert_eq!(v["agree"], true);
}
