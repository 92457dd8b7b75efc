use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_reluvol"))
        .args(args)
        .output()
        .expect("binary runs");
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (out.status.code().unwrap_or(-1), json)
}

fn path(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn volume_and_sum() {
    let (code, v) = run(&["vol", &path("plane_rectangle.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["value"], 6);
    let (_, v) = run(&["mink", &path("plane_rectangle.json"), &path("plane_triangle.json")]);
    assert_eq!(v["vertices"].as_array().unwrap().len(), 5);
    let (_, v) = run(&["mixedvol", &path("plane_rectangle.json"), &path("plane_triangle.json")]);
    assert_eq!(v["mixed_volume"], 4);
    let (_, v) = run(&["count", &path("plane_triangle.json"), "--tmax", "3"]);
    assert_eq!(v["counts"], serde_json::json!([1, 3, 6, 10]));
}

#[test]
fn check_exit_codes() {
    let parts = [path("plane_rectangle.json"), path("plane_triangle.json")];
    let (code, v) = run(&["check", "modular", &parts[0], &parts[1], "-p", "2", "-t", "1"]);
    assert_eq!((code, v["verdict"].as_str()), (0, Some("holds")));
    let (code, v) = run(&["check", "modular", &parts[0], &parts[1], "-p", "3", "-t", "1"]);
    assert_eq!(code, 2);
    assert_eq!(v["verdict"], "inapplicable");
    let (code, v) = run(&["check", "join", &path("flat_rectangle.json"), &path("apex.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["witness_volumes"]["join"], 12);
    let (code, _) = run(&["check", "su-invariant", &path("unit_square_su.json"), "-p", "2"]);
    assert_eq!(code, 0);
}

#[test]
fn network_commands() {
    let (code, v) = run(&["net", "refute", &path("impostor_f2.json"), "-n", "2"]);
    assert_eq!(code, 1);
    assert_eq!(v["certificate"]["verdict"], "fails");
    let (code, v) = run(&["net", "verify-max", "-n", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v["hidden_layers"], 2);
    let (code, v) = run(&["net", "clear", &path("decimal_relu.json")]);
    assert_eq!(code, 0);
    assert_eq!(v["M"], 20);
    let (code, v) = run(&["net", "eval", &path("impostor_f2.json"), "--x", "-1,1"]);
    assert_eq!((code, v["value"].as_str()), (0, Some("2")));
    let (code, _) = run(&["net", "equal", &path("impostor_f2.json"), &path("impostor_f2.json")]);
    assert_eq!(code, 0);
}

#[test]
fn bounds() {
    let (_, v) = run(&["bound", "-n", "9", "-N", "10"]);
    assert_eq!((v["p"].as_u64(), v["k_lo"].as_u64()), (Some(3), Some(3)));
    let (_, v) = run(&["growth", "-n", "9"]);
    assert_eq!(v.as_array().unwrap().len(), 2);
}

#[test]
fn errors_and_guard() {
    let (code, v) = run(&["vol", "/nonexistent/poly.json"]);
    assert_eq!(code, 3);
    assert!(v["error"].is_string());
    let (code, _) = run(&["no-such-command"]);
    assert_eq!(code, 3);
    let out = Command::new(env!("CARGO_BIN_EXE_reluvol"))
        .args(["vol", &path("flat_rectangle.json")])
        .env("RELUVOL_MAX_DIM", "2")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn non_homogeneous_network_is_rejected() {
    let dir = std::env::temp_dir().join(format!("reluvol-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let file = dir.join("biased.json");
    std::fs::write(&file, r#"{"ring": "Z", "layers": [{"A": [["1"]], "b": ["1"]}, {"A": [["1"]]}]}"#).unwrap();
    let (code, v) = run(&["net", "refute", &file.to_string_lossy(), "-n", "1"]);
    assert_eq!(code, 2);
    assert!(v["error"].as_str().unwrap().contains("homogeneity required"));
    std::fs::remove_dir_all(&dir).ok();
}
