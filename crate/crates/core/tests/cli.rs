use std::path::PathBuf;
use std::process::Command;
use std::{env, fs};

use serde_json::Value;

fn data(name: &str) -> String {
    let mut p = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    p.extend(["tests", "data", name]);
    p.to_string_lossy().into_owned()
}

fn cubecycles(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_cubecycles"))
        .args(args)
        .output()
        .expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8(out.stdout).expect("utf-8 stdout"),
        String::from_utf8(out.stderr).expect("utf-8 stderr"),
    )
}

/// Compares stdout with `tests/golden/cli/<name>.json`; `BLESS=1` rewrites it.
fn golden(name: &str, args: &[&str]) {
    let (code, stdout, stderr) = cubecycles(args);
    assert_eq!(code, 0, "{name}: {stderr}{stdout}");
    let mut path = PathBuf::from(env!("CARGO_MANIFEST_DIR"));
    path.extend(["tests", "golden", "cli", &format!("{name}.json")]);
    if env::var_os("BLESS").is_some() {
        fs::create_dir_all(path.parent().unwrap()).unwrap();
        fs::write(&path, &stdout).unwrap();
    }
    let expected = fs::read_to_string(&path)
        .unwrap_or_else(|_| panic!("missing golden file {path:?}; run with BLESS=1"));
    assert_eq!(stdout, expected, "{name} differs from golden output");
}

#[test]
fn golden_third_point() {
    let s = data("fermat.json");
    golden("third_point", &["geom", "third-point", "--surface", &s, "--x", "1,-1,0,0", "--y", "0,1,-1,0"]);
}

#[test]
fn golden_delta_and_psi() {
    let s = data("fermat.json");
    golden("delta", &["geom", "delta", "--surface", &s, "--line", "1,2,0,0;0,0,1,3"]);
    golden(
        "psi",
        &["geom", "psi", "--surface", &s, "--axis", "1,0,0,0;0,1,0,0", "--line", "1,2,0,0;0,0,1,3"],
    );
}

#[test]
fn golden_chow_report() {
    golden("chow_report", &["chow", "report"]);
}

#[test]
fn golden_points_enum() {
    golden("points_enum", &["points", "enum", "--surface", &data("diag_1_2_m3_5.json"), "--height", "6"]);
}

#[test]
fn golden_coray_certificate() {
    golden("certify_coray_10", &["descent", "certify", "--dS", "3", "--suite", "coray", "--degree", "10"]);
}

#[test]
fn third_point_is_the_collinear_point() {
    let (_, out, _) = cubecycles(&["geom", "third-point", "--surface", &data("fermat.json"), "--x", "1,-1,0,0", "--y", "0,1,-1,0"]);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c: Vec<&str> = v.as_array().unwrap().iter().map(|c| c.as_str().unwrap()).collect();
    // (1,0,-1,0) up to scaling
    assert_eq!(c, ["-1", "0", "1", "0"]);
}

#[test]
fn chow_report_numbers() {
    let (code, out, _) = cubecycles(&["chow", "report"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["deg_D2"], 216);
    assert_eq!(v["deg_D2_prime"], 72);
    assert_eq!(v["strict_inequality"], true);
}

#[test]
fn cubic_suite_rows_bounded() {
    let (code, out, _) = cubecycles(&["descent", "suite", "--dS", "3", "--ceiling", "200"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 200);
    assert!(rows.iter().all(|r| r["verified"] == true && r["final_degree"].as_u64().unwrap() <= 18));
}

#[test]
fn certify_then_verify_roundtrip() {
    let dir = tempfile::tempdir().unwrap();
    let cert = dir.path().join("cert.json");
    let cert_s = cert.to_str().unwrap();
    let (code, out, _) = cubecycles(&["descent", "certify", "--dS", "2", "--degree", "57", "--out", cert_s]);
    assert_eq!((code, out.as_str()), (0, ""));
    let (code, out, _) = cubecycles(&["descent", "verify", "--cert", cert_s]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], true);

    let mut tampered: Value = serde_json::from_str(&fs::read_to_string(&cert).unwrap()).unwrap();
    tampered["final"]["unknown_degree"] = Value::from(1);
    fs::write(&cert, tampered.to_string()).unwrap();
    let (code, out, _) = cubecycles(&["descent", "verify", "--cert", cert_s]);
    assert_eq!(code, 1);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["error"]["kind"], "InvalidCertificate");
}

#[test]
fn domain_errors_are_structured() {
    let s = data("fermat.json");
    let cases: [(&[&str], &str); 4] = [
        (&["geom", "third-point", "--surface", &s, "--x", "1,0,0,0", "--y", "0,1,-1,0"], "NotOnSurface"),
        (&["geom", "third-point", "--surface", &s, "--x", "1,-1,0,0", "--y", "0,0,1,-1"], "LineInSurface"),
        (&["geom", "delta", "--surface", &s, "--line", "1,-1,0,0;0,0,1,-1"], "LineInSurface"),
        (&["descent", "suite", "--dS", "2", "--with-x4"], "UnsupportedSuite"),
    ];
    for (args, kind) in cases {
        let (code, out, _) = cubecycles(args);
        assert_eq!(code, 1, "{args:?}");
        let v: Value = serde_json::from_str(&out).expect("complete JSON on error");
        assert_eq!(v["error"]["kind"], kind, "{args:?}");
        assert!(v["error"]["message"].is_string());
    }
    let (code, out, _) = cubecycles(&["points", "enum", "--surface", "/nonexistent.json", "--height", "3"]);
    assert_eq!(code, 1);
    assert_eq!(serde_json::from_str::<Value>(&out).unwrap()["error"]["kind"], "IoError");
}

#[test]
fn usage_errors_exit_two_and_name_the_flag() {
    let (code, out, err) = cubecycles(&["points", "enum", "--surface", "x.json", "--height", "0"]);
    assert_eq!(code, 2);
    assert!(out.is_empty());
    assert!(err.contains("--height"), "{err}");

    let (code, _, err) = cubecycles(&["descent", "suite", "--dS", "4"]);
    assert_eq!(code, 2);
    assert!(err.contains("--dS"), "{err}");

    let (code, _, _) = cubecycles(&["geom", "bogus"]);
    assert_eq!(code, 2);
}

#[test]
fn identical_inputs_give_identical_bytes() {
    let s = data("diag_1_2_m3_5.json");
    let runs: [Vec<&str>; 3] = [
        vec!["points", "saturate", "--surface", &s, "--height", "4", "--rounds", "2", "--cap", "120"],
        vec!["descent", "suite", "--dS", "1", "--ceiling", "60"],
        vec!["chow", "pencil", "--samples", "15", "--seed", "3"],
    ];
    for args in &runs {
        let a = cubecycles(args);
        let b = cubecycles(args);
        assert_eq!(a.0, 0);
        assert_eq!(a, b, "{args:?}");
    }
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["cubecycles", "chow", "report"];
    let lib = cubic_cycles::cli::run(args);
    let (code, out, _) = cubecycles(&args[1..]);
    assert_eq!((lib.code, lib.stdout), (code, out));
}
