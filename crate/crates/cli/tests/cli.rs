use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

/// The trefoil with one copy of the two-crossing virtual knot summed in.
const KPRIME_PLUS_TREFOIL: &str = "O1+O2+U1+U2+U3+O4+U5+O3+U4+O5+";

fn vknot(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_vknot")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = vknot(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap().trim_end().to_string()
}

fn json(args: &[&str]) -> Value {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    serde_json::from_str(&stdout(&all)).expect("valid json")
}

#[test]
fn kprime_f_and_s3_homs() {
    assert_eq!(stdout(&["f", "--fixture", "Kprime"]), "A^-4 + A^-6 - A^-10");
    assert_eq!(stdout(&["colorings", "--fixture", "Kprime", "--group", "S3"]), "6");
    let panel = json(&["invariants", "--fixture", "Kprime", "--nmax", "2"]);
    let entry = |name: &str| panel["entries"].as_array().unwrap().iter().find(|e| e["name"] == name).unwrap().clone();
    assert_eq!(entry("f")["value"], "A^-4 + A^-6 - A^-10");
    assert_eq!(entry("f")["invariance"], "virtual_isotopy");
    assert_eq!(entry("homs_S3")["value"], "6");
    assert_eq!(entry("planar")["invariance"], "diagram_dependent");
}

#[test]
fn d_has_trivial_f_and_nontrivial_z() {
    assert_eq!(stdout(&["f", "--fixture", "D"]), "1");
    assert_eq!(stdout(&["z", "--fixture", "D"]), "A^7 - A^5 - 4*A^3 + 2*A + A^-1 - A^-3");
    assert_eq!(stdout(&["bracket", "--fixture", "D"]), "-A^3");
}

#[test]
fn single_curl() {
    let p = json(&["parse", "O1+U1+"]);
    assert_eq!(p["classical"], 1);
    assert_eq!(p["virtual"], 0);
    assert_eq!(stdout(&["realizable", "O1+U1+"]), "true");
    assert_eq!(stdout(&["f", "O1+U1+"]), "1");
}

#[test]
fn code_from_stdin() {
    let mut child = Command::new(env!("CARGO_BIN_EXE_vknot"))
        .args(["f", "--jones"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"O1+U2+O3+U1+O2+U3+\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap().trim(), "-t^4 + t^3 + t");
}

#[test]
fn code_predicates() {
    assert_eq!(stdout(&["planar", "O1+U2+O3+U1+O2+U3+"]), "true");
    assert_eq!(stdout(&["planar", "--fixture", "Kprime"]), "false");
    assert_eq!(stdout(&["prime", "O1+U2+O3+U1+O2+U3+"]), "true");
    assert_eq!(stdout(&["realizable", "--fixture", "Kprime"]), "false");
}

#[test]
fn algebraic_invariants() {
    assert_eq!(stdout(&["det", "--fixture", "K"]), "3");
    assert_eq!(stdout(&["alexander", "--fixture", "knot_4_1"]), "t^2 - 3*t + 1");
    assert_eq!(stdout(&["colorings", "--fixture", "K", "--n", "3", "--t", "2"]), "9");
    assert_eq!(stdout(&["zbar", "--fixture", "F"]), "A2 - 2*A0");
    let v = json(&["vassiliev", "--fixture", "two_node_trefoil", "--nmax", "2"]);
    assert_eq!(v["coefficients"][2], "-48");
}

#[test]
fn quandle_separates_k_from_its_flip() {
    let out = stdout(&["distinguish", "--fixture", "quandle_K", "--fixture", "quandle_Kstar", "--nmax", "2"]);
    assert!(out.starts_with("distinguished by colorings_R3"), "{out}");
}

#[test]
fn trivial_f_knot_is_still_knotted() {
    assert_eq!(stdout(&["f", "--fixture", "K"]), stdout(&["f", "O1+U1+"]));
    let v = json(&["distinguish", "--fixture", "K", "O1+U1+", "--nmax", "2"]);
    assert_eq!(v["left"], "K");
    assert!(v["verdict"]["distinguished_by"].as_str().unwrap().starts_with("colorings_"));
}

#[test]
fn summing_in_kprime_changes_only_f() {
    for n in ["3", "5", "7"] {
        assert_eq!(
            stdout(&["colorings", "--n", n, KPRIME_PLUS_TREFOIL]),
            stdout(&["colorings", "--n", n, "--fixture", "knot_3_1"])
        );
    }
    let v = json(&["distinguish", KPRIME_PLUS_TREFOIL, "--fixture", "knot_3_1", "--nmax", "2"]);
    assert_eq!(v["verdict"]["distinguished_by"], "f");
    assert_eq!(v["right"], "knot_3_1");
}

#[test]
fn same_panels_are_indistinguishable() {
    let out = stdout(&["distinguish", "O1+U2+O3+U1+O2+U3+", "--fixture", "knot_3_1", "--nmax", "2"]);
    assert_eq!(out, "indistinguishable by panel");
}

#[test]
fn fuzz_is_clean_and_reproducible() {
    let args = ["fuzz", "--fixture", "D", "--moves", "regular", "--iterations", "60", "--seed", "9"];
    let a = vknot(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, vknot(&args).stdout);
    assert!(String::from_utf8(a.stdout).unwrap().ends_with("0 violations\n"));

    let r = json(&["fuzz", "--fixture", "D", "--iterations", "200", "--seed", "5"]);
    assert!(r["violations"].as_array().unwrap().is_empty());
    let changed: Vec<&str> =
        r["expected_changes"].as_array().unwrap().iter().map(|c| c["entry"].as_str().unwrap()).collect();
    assert!(changed.contains(&"bracket"), "{changed:?}");
}

#[test]
fn fixtures_verify() {
    let out = stdout(&["verify-fixtures"]);
    assert!(out.ends_with(" 0 failed"), "{out}");
    assert_eq!(stdout(&["verify-fixtures", "--fixture", "Kprime"]), "ok   Kprime\n1 fixtures, 0 failed");
}

#[test]
fn diagram_json_round_trip() {
    let p = json(&["parse", "--fixture", "Kprime"]);
    let path = std::env::temp_dir().join(format!("vknot-cli-{}.json", std::process::id()));
    std::fs::write(&path, p["diagram"].to_string()).unwrap();
    let f = stdout(&["f", "--json", path.to_str().unwrap()]);
    std::fs::remove_file(&path).unwrap();
    assert_eq!(f, "A^-4 + A^-6 - A^-10");
}

#[test]
fn errors_carry_codes() {
    let out = vknot(&["--format", "json", "f", "O1+U2+"]);
    assert_eq!(out.status.code(), Some(2));
    let e: Value = serde_json::from_slice(&out.stderr).unwrap();
    assert!(e["error"]["code"].is_string());

    let out = vknot(&["f", "--fixture", "nonesuch"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[unknown_fixture]"));

    let out = vknot(&["distinguish", "--fixture", "K"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("error[usage]"));
}
