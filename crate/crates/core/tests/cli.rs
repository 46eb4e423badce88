use std::process::Command;

use serde_json::Value;

fn hermcong(args: &[&str]) -> (i32, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_hermcong")).args(args).output().unwrap();
    (out.status.code().unwrap_or(-1), String::from_utf8(out.stdout).unwrap())
}

fn json(s: &str) -> Value {
    serde_json::from_str(s).unwrap()
}

#[test]
fn verify_main_default_is_verified() {
    let (code, out) = hermcong(&["verify-main"]);
    assert_eq!(code, 0);
    let r = json(&out);
    assert_eq!(r["verdict"], "verified-within-bound");
    assert_eq!(r["counts"]["violations"], 0);
    assert!(r["witnesses"].as_array().unwrap().iter().any(|w| w == "2;1,2;2,1"));
}

#[test]
fn unmet_hypotheses_are_inconclusive() {
    for args in [&["verify-main", "--prime", "5"][..], &["verify-main", "--disc", "7", "--prime", "7"], &["verify-example", "--prime", "13"]] {
        let (code, out) = hermcong(args);
        assert_eq!(code, 0, "{args:?}");
        let r = json(&out);
        assert_eq!(r["verdict"], "inconclusive", "{args:?}");
        assert!(r["reason"].as_str().unwrap().starts_with("hypotheses unmet"));
    }
}

#[test]
fn fq_prints_polynomial_and_route() {
    let (code, out) = hermcong(&["fq", "2;1,3;0,0", "--q", "3"]);
    assert_eq!(code, 0);
    assert_eq!(out.trim(), "3; 1,-9 (route: functional-equation)");
    let (_, out) = hermcong(&["fq", "1;16", "--q", "2"]);
    assert_eq!(out.trim(), "2; 1,2,4,8,16 (route: closed-form)");
}

#[test]
fn config_file_and_flag_override() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.conf");
    std::fs::write(&path, "# main scenario\ndisc = 4\nprime = 5\nmax-diag = 2\n").unwrap();
    let (_, out) = hermcong(&["verify-main", "--config", path.to_str().unwrap()]);
    assert_eq!(json(&out)["verdict"], "inconclusive");
    let (_, out) = hermcong(&["verify-main", "--config", path.to_str().unwrap(), "--prime", "7"]);
    let r = json(&out);
    assert_eq!(r["verdict"], "verified-within-bound");
    assert_eq!(r["hypotheses"]["p"], 7);
}

#[test]
fn bad_input_is_an_error() {
    assert_eq!(hermcong(&["verify-main", "--disc", "12"]).0, 1);
    assert_eq!(hermcong(&["fq", "2;1,1;9", "--q", "2"]).0, 1);
}

#[test]
fn export_table_csv_and_cache_reuse() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().to_str().unwrap();
    let args = ["export-table", "--format", "csv", "--max-diag", "2", "--cache-dir", cache];
    let (code, first) = hermcong(&args);
    assert_eq!(code, 0);
    assert_eq!(first.lines().next(), Some("key,numerator,denominator,status"));
    assert!(first.contains("\"2;1,1;0,0\",7862400,61,computed"));
    assert!(std::fs::read_dir(dir.path()).unwrap().count() >= 1);
    let (_, second) = hermcong(&args);
    assert_eq!(first, second);

    let (_, out) = hermcong(&["verify-main", "--max-diag", "2", "--cache-dir", cache]);
    assert_eq!(json(&out)["scalars"]["cache_hit"], "true");
}

#[test]
fn scalars_command_passes() {
    let (code, out) = hermcong(&["scalars"]);
    assert_eq!(code, 0);
    assert_eq!(json(&out)["verdict"], "verified-within-bound");
}
