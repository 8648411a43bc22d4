use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use homprod::codes::steane_boundary;
use homprod::{io, BitMatrix};
use serde_json::Value;
use tempfile::TempDir;

fn homprod(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_homprod"))
        .args(args)
        .current_dir(dir)
        .env("HOMPROD_THREADS", "1")
        .output()
        .expect("binary runs")
}

fn ok_json(dir: &Path, args: &[&str]) -> Value {
    let out = homprod(dir, args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn steane_dir() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    let d = steane_boundary(&BitMatrix::identity(3)).unwrap();
    fs::write(dir.path().join("steane.mat"), io::write_boundary(&d)).unwrap();
    dir
}

#[test]
fn steane_code_and_distance() {
    let dir = steane_dir();
    let d = dir.path();
    let code = ok_json(d, &["code", "steane.mat", "--distance", "--json", "-o", "steane.css"]);
    assert_eq!(
        (code["n"].as_u64(), code["k"].as_u64(), code["w"].as_u64()),
        (Some(7), Some(1), Some(4))
    );
    assert_eq!((code["d_z"].as_u64(), code["d_x"].as_u64()), (Some(3), Some(3)));
    assert!(fs::read_to_string(d.join("steane.css")).unwrap().starts_with("CSS n=7"));

    let dist = ok_json(d, &["distance", "steane.mat", "--json"]);
    assert_eq!(dist["d_z"], 3);
    assert!(dist["witness_z"].is_string());

    let bounded = ok_json(d, &["distance", "steane.mat", "--bound", "2", "--json"]);
    assert_eq!(bounded["found"], false);
}

#[test]
fn product_then_encode_and_verify() {
    let dir = steane_dir();
    let d = dir.path();
    let p = ok_json(d, &["product", "steane.mat", "steane.mat", "-o", "p.mat", "--json"]);
    assert_eq!((p["m"].as_u64(), p["h"].as_u64()), (Some(49), Some(1)));

    let enc = ok_json(
        d,
        &[
            "encode",
            "steane.mat",
            "--with",
            "steane.mat",
            "--verify",
            "-o",
            "c.txt",
            "--json",
        ],
    );
    assert_eq!(enc["verified"], true);
    assert!(enc["gates"].as_u64().unwrap() <= 2 * 7 * 56);
    let circuit = fs::read_to_string(d.join("c.txt")).unwrap();
    assert!(circuit.starts_with("QUBITS 49"));
}

#[test]
fn reduce_writes_code_and_trace() {
    let dir = steane_dir();
    let d = dir.path();
    ok_json(d, &["product", "steane.mat", "steane.mat", "-o", "p.mat", "--json"]);
    ok_json(d, &["code", "p.mat", "-o", "p.css", "--json"]);
    let r = ok_json(
        d,
        &[
            "reduce", "p.css", "--target", "6", "-o", "r.css", "--trace", "t.json", "--json",
        ],
    );
    assert_eq!(r["reached"], true);
    assert!(r["max_check_weight"].as_u64().unwrap() <= 6);
    assert_eq!(r["k"], 1);
    let trace: Value = serde_json::from_str(&fs::read_to_string(d.join("t.json")).unwrap()).unwrap();
    let steps = trace["steps"].as_array().unwrap().len();
    assert_eq!(trace["weight_history"].as_array().unwrap().len(), steps + 1);
    assert!(fs::read_to_string(d.join("r.css"))
        .unwrap()
        .starts_with(&format!("CSS n={}", r["n"])));

    ok_json(d, &["code", "steane.mat", "-o", "steane.css", "--json"]);
    let out = homprod(d, &["reduce", "steane.css", "--target", "3", "--max-steps", "2"]);
    assert!(!out.status.success(), "target 3 is out of reach in two splits");
}

#[test]
fn count_with_oracle() {
    let dir = tempfile::tempdir().unwrap();
    let v = ok_json(
        dir.path(),
        &["count", "gamma", "4", "2", "3", "2", "--oracle", "--json"],
    );
    assert_eq!(v["agree"], true);
    let v = ok_json(dir.path(), &["count", "rank", "3", "3", "3", "--json"]);
    assert_eq!(v["value"], "168");
}

#[test]
fn gf4_boundary_product_distance() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    let out = homprod(d, &["gf4", "boundary", "--code", "five-qubit", "-o", "f.gf4"]);
    assert!(out.status.success());
    ok_json(d, &["gf4", "product", "f.gf4", "f.gf4", "-o", "ff.gf4", "--json"]);
    let r = ok_json(d, &["gf4", "distance", "ff.gf4", "--json"]);
    assert_eq!(r["d"], 5);
    let e = ok_json(d, &["gf4", "enum-selfadjoint", "--m", "2", "--json"]);
    assert_eq!(e["count"], 10);
}

#[test]
fn reproduce_exit_code_follows_pass() {
    let dir = tempfile::tempdir().unwrap();
    let r = ok_json(dir.path(), &["reproduce", "steane-css-params", "--json"]);
    assert_eq!(r["pass"], true);
    assert_eq!(r["seed"], 7);

    let out = homprod(dir.path(), &["reproduce", "nope"]);
    assert!(!out.status.success());
}

#[test]
fn montecarlo_is_seeded() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "montecarlo",
        "--m",
        "6",
        "--h",
        "2",
        "--c",
        "0.4",
        "--samples",
        "20",
        "--seed",
        "5",
        "--json",
    ];
    let mut a = ok_json(dir.path(), &args);
    let mut b = ok_json(dir.path(), &args);
    for v in [&mut a, &mut b] {
        v.as_object_mut().unwrap().remove("wall_time");
    }
    assert_eq!(a, b);
    assert_eq!(a["seed"], 5);

    let out = homprod(dir.path(), &["montecarlo", "--m", "6", "--h", "1", "--c", "0.4"]);
    assert!(!out.status.success());
}

#[test]
fn malformed_input_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    fs::write(dir.path().join("bad.mat"), "GF2 2 3\n010\n01\n").unwrap();
    let out = homprod(dir.path(), &["distance", "bad.mat"]);
    assert!(!out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"));
}

#[test]
fn gen_random_is_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path();
    for name in ["a.mat", "b.mat"] {
        ok_json(
            d,
            &[
                "gen-random",
                "--m",
                "10",
                "--h",
                "2",
                "--good",
                "9",
                "--seed",
                "11",
                "-o",
                name,
                "--json",
            ],
        );
    }
    assert_eq!(fs::read(d.join("a.mat")).unwrap(), fs::read(d.join("b.mat")).unwrap());
}
