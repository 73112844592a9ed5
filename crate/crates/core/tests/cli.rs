use std::path::PathBuf;
use std::process::{Command, Output};

fn chanlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chanlab"))
        .args(args)
        .env_remove("CHANLAB_SEED")
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .display()
        .to_string()
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

#[test]
fn entropy_audit_passes_and_rejects_zero_trials() {
    let ok = chanlab(&["entropy-audit", "--trials", "1000", "--dims", "2,2,2", "--seed", "1"]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));
    assert_eq!(code(&chanlab(&["entropy-audit", "--trials", "0", "--seed", "1"])), 1);
}

#[test]
fn randomized_commands_require_a_seed() {
    let out = chanlab(&["entropy-audit", "--trials", "5"]);
    assert_eq!(code(&out), 1);
    assert!(String::from_utf8_lossy(&out.stderr).contains("--seed"));
}

#[test]
fn seed_falls_back_to_environment() {
    let run = |env: Option<&str>, extra: &[&str]| {
        let mut cmd = Command::new(env!("CARGO_BIN_EXE_chanlab"));
        cmd.args(["entropy-audit", "--trials", "10", "--format", "json"]).args(extra).env_remove("CHANLAB_SEED");
        if let Some(s) = env {
            cmd.env("CHANLAB_SEED", s);
        }
        cmd.output().unwrap()
    };
    let from_env = run(Some("5"), &[]);
    let from_flag = run(None, &["--seed", "5"]);
    assert_eq!(code(&from_env), 0);
    assert_eq!(from_env.stdout, from_flag.stdout);
}

#[test]
fn ghz_fixture_reports_ln2() {
    let out = chanlab(&["entropy-audit", "--trials", "1", "--fixture", "ghz", "--format", "json"]);
    assert_eq!(code(&out), 0);
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let ssa = v["reports"]
        .as_array()
        .unwrap()
        .iter()
        .find(|r| r["name"] == "strong_subadditivity")
        .unwrap();
    approx::assert_abs_diff_eq!(ssa["slack"].as_f64().unwrap(), std::f64::consts::LN_2, epsilon = 1e-9);
}

#[test]
fn channel_verify_exit_codes() {
    assert_eq!(code(&chanlab(&["channel-verify", &fixture("identity_channel.json")])), 0);
    assert_eq!(code(&chanlab(&["channel-verify", &fixture("leaky_channel.json")])), 2);
    assert_eq!(code(&chanlab(&["channel-verify", &fixture("missing.json")])), 1);
}

#[test]
fn shor_demo_single_error_and_sweep() {
    let out = chanlab(&["shor-demo", "--error", "Z5", "--logical", "0.6,0.8"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("Z4"), "{text}");

    let sweep = chanlab(&["shor-demo", "--sweep", "--format", "json"]);
    assert_eq!(code(&sweep), 0);
    let v: serde_json::Value = serde_json::from_slice(&sweep.stdout).unwrap();
    assert_eq!(v["corrected"], 27);
    assert_eq!(v["rows"].as_array().unwrap().len(), 27);

    assert_eq!(code(&chanlab(&["shor-demo", "--error", "X1X4"])), 2);
    assert_eq!(code(&chanlab(&["shor-demo", "--error", "Q1"])), 1);
}

#[test]
fn petz_recovery_and_wedge_demos_pass() {
    for args in [
        vec!["petz-demo", "--example", "erasure", "--seed", "3"],
        vec!["recovery-sweep", "--trials", "20", "--seed", "3"],
        vec!["wedge-demo", "--kind", "random", "--dims", "2,2,4,4", "--seed", "37", "--probes", "10"],
        vec!["ampss-demo", "--seed", "3"],
    ] {
        let out = chanlab(&args);
        assert_eq!(code(&out), 0, "{args:?}: {}", String::from_utf8_lossy(&out.stdout));
    }
}

#[test]
fn json_reports_are_byte_identical_and_written_to_out() {
    let dir = tempfile::tempdir().unwrap();
    let paths: Vec<PathBuf> = (0..2).map(|k| dir.path().join(format!("wedge{k}.json"))).collect();
    for p in &paths {
        let out = chanlab(&[
            "wedge-demo",
            "--seed",
            "37",
            "--probes",
            "4",
            "--format",
            "json",
            "--out",
            p.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0);
        assert!(out.stdout.is_empty());
    }
    let a = std::fs::read(&paths[0]).unwrap();
    let b = std::fs::read(&paths[1]).unwrap();
    assert_eq!(a, b);
    let v: serde_json::Value = serde_json::from_slice(&a).unwrap();
    assert_eq!(v["schema"], 1);
    assert!(v["reconstruction"]["epsilon_measured"].as_f64().unwrap() >= 0.0);

    let bad = chanlab(&["entropy-audit", "--seed", "1", "--out", "/nonexistent/dir/x.json"]);
    assert_eq!(code(&bad), 1);
}
