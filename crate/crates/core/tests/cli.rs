use std::process::Command;

use serde_json::Value;

fn run(args: &[&str]) -> (i32, Value) {
    let out = Command::new(env!("CARGO_BIN_EXE_addforms")).args(args).output().unwrap();
    let code = out.status.code().unwrap();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json)
}

#[test]
fn density_report() {
    let (code, v) = run(&["density", "--group", "Z4", "--set", "{0,2}", "--system", "[g1; g2; g1 + g2]"]);
    assert_eq!(code, 0);
    assert_eq!(v["schema"], "addforms/1");
    assert_eq!(v["density"]["num"], 1);
    assert_eq!(v["density"]["den"], 4);
}

#[test]
fn energy_paths_agree() {
    let (code, v) = run(&["energy", "--group", "Z5", "--set", "{0,1}"]);
    assert_eq!(code, 0);
    assert_eq!(v["energy"]["num"], 6);
    assert_eq!(v["energy"]["den"], 125);
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["density", "--group", "Z4", "--set", "{0,9}", "--system", "[g1]"]).0, 2);
    assert_eq!(run(&["density", "--group", "Zx", "--set", "{0}", "--system", "[g1]"]).0, 2);
    assert_eq!(run(&["verify", "pinpoint", "--k", "5"]).0, 3);
    assert_eq!(run(&["--max-order", "10", "energy", "--group", "Z11", "--set", "{0}"]).0, 3);
    let (code, v) = run(&["check", "--quantum", "[g1] - [g1; g2]", "--group", "Z3", "--set", "{0}"]);
    assert_eq!(code, 0);
    assert_eq!(v["passed"], true);
    let (code, v) = run(&["check", "--quantum", "[g1; g2] - [g1]", "--group", "Z3", "--set", "{0}"]);
    assert_eq!(code, 1);
    assert_eq!(v["passed"], false);
}

#[test]
fn witness_subset_file_round_trips() {
    let dir = std::env::temp_dir().join(format!("addforms-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("a.txt");
    let (code, w) = run(&["witness", "--k", "2", "--n", "3,3", "--subset-out", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    let (code, e) = run(&["energy", "--group", "Z9 x Z3 x Z3", "--set-file", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(e["set_size"], w["subset_size"]);
    assert_eq!(e["set_size"], 21);
    std::fs::remove_dir_all(&dir).unwrap();
}
