use std::process::{Command, Output};

fn tracealg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tracealg")).args(args).env_remove("TRACEALG_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn identity_expansion() {
    let o = tracealg(&["identity", "-n", "2", "(12,3,4)"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o).trim(), "[1234] + [1243] - [12][34] - [123][4] - [124][3] + [12][3][4]");
    let o = tracealg(&["identity", "-n", "1", "(1,2)"]);
    assert_eq!(stdout(&o).trim(), "[12] - [1][2]");
}

#[test]
fn exit_codes() {
    assert_eq!(tracealg(&["identity", "-n", "2", "(12,3)"]).status.code(), Some(2));
    assert_eq!(tracealg(&["identity", "-n", "2", "(12,x,4)"]).status.code(), Some(2));
    assert_eq!(tracealg(&["generators", "-n", "5", "-d", "2"]).status.code(), Some(4));
    assert_eq!(tracealg(&["hilbert", "-n", "3", "-d", "3", "-k", "8"]).status.code(), Some(5));
    assert_eq!(tracealg(&["bound", "--degrees", "1x2", "--dim", "19", "--a", "0"]).status.code(), Some(2));
}

#[test]
fn bounds() {
    let o = tracealg(&["bound", "--degrees", "6x10,5x9,4x9,3x11,2x6,1x3", "--dim", "19", "--a", "-27"]);
    assert_eq!(stdout(&o).trim(), "82");
    assert_eq!(stdout(&tracealg(&["bound", "--generic", "3,3"])).trim(), "161");
    let o = tracealg(&["bound", "--degrees", "6x10,5x9,4x9,3x11,2x6,1x3", "--a", "-27", "--hsop", "1x3,2x6,3x7,4x3"]);
    assert_eq!(stdout(&o).trim(), "27");
}

#[test]
fn generators_listing() {
    let o = tracealg(&["generators", "-n", "2", "-d", "3"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.starts_with("10 generators; multiplicities by degree: 1^3 2^6 3^1"));
    assert_eq!(out.lines().count(), 11);
    let o = tracealg(&["--format", "json", "generators", "-n", "2", "-d", "2", "--plain"]);
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["generators"].as_array().unwrap().len(), 5);
}

#[test]
fn json_is_identical_across_thread_counts() {
    let args = ["--format", "json", "relations", "-n", "2", "-d", "3", "--max-degree", "6", "--list"];
    let one = tracealg(&[&["--threads", "1"], &args[..]].concat());
    let many = tracealg(&[&["--threads", "3"], &args[..]].concat());
    assert!(one.status.success());
    assert_eq!(one.stdout, many.stdout);
    let v: serde_json::Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(v["counts"]["(2,2,2)"], 1);
}

#[test]
fn rule_export_and_import() {
    let dir = std::env::temp_dir().join(format!("tracealg-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("rule2.json");
    let path = path.to_str().unwrap();
    let a = tracealg(&["--format", "json", "reduce", "-n", "2", "--order", "canonical", "--export-rule", path]);
    assert!(a.status.success());
    let b = tracealg(&["--format", "json", "reduce", "-n", "2", "--rule", path]);
    assert!(b.status.success());
    assert_eq!(a.stdout, b.stdout);
    // a rule for the wrong size is rejected
    assert_eq!(tracealg(&["reduce", "-n", "3", "--rule", path]).status.code(), Some(2));
    std::fs::remove_dir_all(&dir).ok();
}

#[test]
fn degree_four_rewrites() {
    let o = tracealg(&["reduce", "-n", "3", "--trace", "1122", "--trace", "2233"]);
    assert!(o.status.success());
    let out = stdout(&o);
    assert!(out.contains("[1122] = 1/6*t_1*t_2 + 1/3*t_4^2 + 1/3*t_18"));
    assert!(out.contains("[2233] = 1/6*t_2*t_3 + 1/3*t_6^2 + 1/3*t_20"));
}

#[test]
fn hilbert_agreement() {
    let o = tracealg(&["--format", "json", "hilbert", "-n", "2", "-d", "3", "-k", "8", "--presented"]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["agree"], true);
    assert_eq!(v["direct"][2], 12);
}

#[test]
fn hsop_report() {
    let o = tracealg(&["hsop"]);
    assert!(o.status.success());
    assert!(stdout(&o).starts_with("19 parameters (expected 19), elimination well defined"));
}

#[test]
fn certify_low_degrees() {
    let o = tracealg(&["--format", "json", "certify", "--max-degree", "8"]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["certified"], 10);
    assert_eq!(v["failed"], 0);
    assert!(v["multidegrees"].as_array().unwrap().iter().all(|m| m["completeness"] == "complete"));
}
