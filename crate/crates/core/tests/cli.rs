use std::process::{Command, Output};

use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_siegel-theta"))
        .args(args)
        .output()
        .expect("run cli")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!(
            "{e}: {}\n{}",
            String::from_utf8_lossy(&out.stdout),
            String::from_utf8_lossy(&out.stderr)
        )
    })
}

#[test]
fn verify_primgen_writes_report() {
    let dir = std::env::temp_dir().join(format!("siegel-theta-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = cli(&[
        "verify",
        "--suite",
        "primgen",
        "--seed",
        "3",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let records = report["records"].as_array().unwrap();
    assert!(!records.is_empty());
    assert!(records
        .iter()
        .all(|r| r["status"] == "pass" && r["suite"] == "primgen"));
    assert!(String::from_utf8_lossy(&out.stderr).contains("PASS"));
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn verify_rejects_bad_config() {
    assert_eq!(cli(&["verify", "--p", "9"]).status.code(), Some(2));
    assert_eq!(cli(&["verify", "--tol", "-1"]).status.code(), Some(2));
    assert_ne!(cli(&["verify", "--suite", "nope"]).status.code(), Some(0));
}

#[test]
fn theta_genus_one() {
    // theta_3(0 | i) = pi^(1/4) / Gamma(3/4)
    let out = cli(&["theta", "--chi", "[0;0]", "--z", "1i"]);
    assert!(out.status.success());
    let v = json(&out);
    assert!((v["theta"][0].as_f64().unwrap() - 1.086_434_811_213_308).abs() < 1e-12);
    assert!(v["tail_bound"].as_f64().unwrap() < 1e-12);
}

#[test]
fn theta_odd_characteristic_vanishes_at_z0() {
    let out = cli(&["theta", "--chi", "[1/2,0;1/2,0]", "--phi"]);
    assert!(out.status.success());
    let v = json(&out);
    let re = v["phi"][0].as_f64().unwrap();
    let im = v["phi"][1].as_f64().unwrap();
    assert!(re.hypot(im) < 1e-12);
}

#[test]
fn theta_rejects_bad_input() {
    let out = cli(&["theta", "--chi", "[1/2;"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = cli(&["theta", "--chi", "[0;0]", "--z", "-1i"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn modularity_file() {
    let dir = std::env::temp_dir().join(format!("siegel-theta-mod-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let good = dir.join("lambda.txt");
    std::fs::write(&good, "# lambda on Gamma(2)\n1 2\n4 1/2 0\n").unwrap();
    let out = cli(&["modularity", good.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["modular"], true);

    let bad = dir.join("root.txt");
    std::fs::write(&bad, "1 2\n2 1/2 0\n").unwrap();
    let out = cli(&["modularity", bad.to_str().unwrap(), "--witness"]);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["modular"], false);
    assert!(!v["witness"].is_null());

    std::fs::write(&bad, "1\n").unwrap();
    assert_eq!(
        cli(&["modularity", bad.to_str().unwrap()]).status.code(),
        Some(2)
    );
    std::fs::remove_dir_all(dir).unwrap();
}

#[test]
fn action_example() {
    let out = cli(&["action", "--x", "1,2,2", "--p", "7", "--chi", "[1/7,0;0,0]"]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v = json(&out);
    assert_eq!(v["chi_out"], "[6/7,0;0,5/7]");
    assert_eq!(v["belong"]["value"], "-6");
    // denominator must divide p
    let out = cli(&["action", "--x", "1,2,2", "--p", "7", "--chi", "[1/3,0;0,0]"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn primgen_demo() {
    let out = cli(&["primgen"]);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["trace_combination"]["primitive"], true);
    assert_eq!(v["norm_combination"]["primitive"], true);
}
