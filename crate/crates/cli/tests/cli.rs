use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn aarhus() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_aarhus"));
    c.env_remove("AARHUS_CONFIG");
    c
}

fn run(args: &[&str]) -> Output {
    aarhus().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).trim().to_string()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("aarhus-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

const SMALL: &str = r#"
algebras = ["sl2", "sl3"]
root_systems = ["A1", "A2", "B2"]
max_degree = 4
series_order = 4
framings = [1, -2]
mc_samples = 10000
suites = ["hcrf", "dhd", "reduce", "wu", "theta", "disc", "i2"]
"#;

fn read_report(path: &PathBuf) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tau_lens_trivial_cases() {
    for p in ["1", "-1"] {
        let o = run(&["tau-lens", "-p", p, "--algebra", "A1", "--order", "10"]);
        assert!(o.status.success());
        assert_eq!(stdout(&o), "1");
    }
    let o = run(&["tau-lens", "-p", "-1", "--algebra", "sl3", "--order", "10"]);
    assert_eq!(stdout(&o), "1");
}

#[test]
fn tau_lens_p2_regression() {
    let o = run(&["tau-lens", "-p", "2", "--algebra", "A1", "--order", "10"]);
    assert!(o.status.success());
    assert_eq!(
        stdout(&o),
        "1 - 1/32*h^2 + 5/6144*h^4 - 61/2949120*h^6 + 277/528482304*h^8 - 50521/3805072588800*h^10"
    );
    let raw = run(&["tau-lens", "-p", "2", "--algebra", "sl2", "--order", "2", "--raw"]);
    assert_eq!(stdout(&raw), "1/2 - 1/64*h^2");
}

#[test]
fn tau_lens_rejects_zero() {
    let o = run(&["tau-lens", "-p", "0", "--algebra", "A1"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["tau-lens", "-p", "1", "--algebra", "E8"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn theta_values() {
    let o = run(&["theta", "--algebra", "sl2"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "12 12");
    let o = run(&["theta", "--algebra", "sl3"]);
    assert_eq!(stdout(&o), "48 48");
    let o = run(&["theta", "--algebra", "sl2", "--flip"]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(stdout(&o), "-12 12");
    assert!(String::from_utf8_lossy(&o.stderr).contains("mismatch"));
    assert_eq!(run(&["theta", "--algebra", "so5"]).status.code(), Some(2));
}

#[test]
fn verify_from_env_config() {
    let cfg = scratch("env.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = scratch("env.json");
    let o = aarhus()
        .env("AARHUS_CONFIG", &cfg)
        .args(["verify", "--output", out.to_str().unwrap()])
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = read_report(&out);
    assert_eq!(r["overall_pass"], true);
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["config"]["max_degree"], 4);
    assert!(r["records"].as_array().unwrap().iter().all(|x| x["pass"] == true));
}

#[test]
fn flags_override_file() {
    let cfg = scratch("override.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let o = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--suite",
        "theta",
        "--algebra",
        "sl2",
        "--framing",
        "-1",
    ]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(r["config"]["algebras"], serde_json::json!(["sl2"]));
    assert_eq!(r["config"]["framings"], serde_json::json!([-1]));
    assert_eq!(r["config"]["suites"], serde_json::json!(["theta"]));
    assert_eq!(r["config"]["series_order"], 4);
}

#[test]
fn tamper_fails_and_writes_report() {
    let cfg = scratch("tamper.toml");
    std::fs::write(&cfg, SMALL).unwrap();
    let out = scratch("tamper.json");
    let o = run(&[
        "verify",
        "--config",
        cfg.to_str().unwrap(),
        "--output",
        out.to_str().unwrap(),
        "--debug-tamper-constant",
    ]);
    assert_eq!(o.status.code(), Some(1));
    let r = read_report(&out);
    assert_eq!(r["overall_pass"], false);
    let first = r["records"].as_array().unwrap().iter().find(|x| x["pass"] == false).unwrap();
    assert_eq!(first["identity"], "reduce_identity");
}

#[test]
fn config_errors_exit_2() {
    let bad = scratch("bad.toml");
    std::fs::write(&bad, "max_degree = 3\n").unwrap();
    assert_eq!(run(&["verify", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "framings = [0]\n").unwrap();
    assert_eq!(run(&["verify", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    std::fs::write(&bad, "unknown_key = 1\n").unwrap();
    assert_eq!(run(&["verify", "--config", bad.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--config", "/nonexistent/x.toml"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--suite", "bogus"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--series-order", "-1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn grid_enumeration_sl3_degree_6() {
    let o = run(&["verify", "--suite", "dhd", "--algebra", "sl3", "--max-degree", "6"]);
    assert!(o.status.success());
    let r: Value = serde_json::from_slice(&o.stdout).unwrap();
    let inputs: Vec<&str> = r["records"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x["inputs"]["p"].as_str().unwrap())
        .collect();
    // odd-degree invariants have no dhd instance
    assert_eq!(inputs, ["1", "C", "C^2", "C3^2", "C^3"]);
}

#[test]
fn reports_are_deterministic() {
    let strip = |o: &Output| {
        let mut v: Value = serde_json::from_slice(&o.stdout).unwrap();
        for r in v["records"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("timing_ms");
        }
        v.to_string()
    };
    let args = ["verify", "--suite", "mc", "--suite", "theta", "--algebra", "sl2", "--mc-samples", "20000", "--mc-seed", "7"];
    let a = run(&args);
    let b = run(&args);
    assert!(a.status.success() && b.status.success());
    assert_eq!(strip(&a), strip(&b));
}
