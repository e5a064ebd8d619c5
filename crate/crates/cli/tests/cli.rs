use std::path::Path;
use std::process::{Command, Output};

use anyhow::{Context, Result};

fn membrane(args: &[&str]) -> Result<Output> {
    Command::new(env!("CARGO_BIN_EXE_membrane")).args(args).output().context("spawn membrane")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn small_config(model: &str, amplitude: f64, dir: &Path) -> String {
    format!(
        r#"
model = "{model}"

[profile]
center = 1.0
half_width = 1.0
amplitude = 1.0

[data]
amplitude = {amplitude}
radius = 1.0

[grid]
half_width = 10.0
n = 61
cfl = 0.5
dissipation = 0.01

[run]
tau_max = 3.0
tau_samples = 5

[diagnostics]
k_max = 2
gamma = 0.25

[output]
directory = "{}"
"#,
        dir.join("run").display()
    )
}

#[test]
fn verify_algebra_passes_and_catches_mutation() -> Result<()> {
    let ok = membrane(&["verify-algebra"])?;
    assert_eq!(ok.status.code(), Some(0));
    let text = stdout(&ok);
    let count: usize = text.lines().last().unwrap().split_whitespace().next().unwrap().parse()?;
    assert!(count >= 30);
    assert!(!text.contains("FAIL"));
    let bad = membrane(&["verify-algebra", "--mutated"])?;
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("FAIL"));
    Ok(())
}

#[test]
fn ledger_verdicts_and_gamma_range() -> Result<()> {
    let o = membrane(&["ledger", "--dim", "3", "--gamma", "1/4", "--close"])?;
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().last(), Some("closes"));
    let o = membrane(&["ledger", "--dim", "3", "--gamma", "1/2"])?;
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("1/3"));
    let o = membrane(&["ledger", "--dim", "3", "--gamma", "0.25", "--close", "--json"])?;
    let v: serde_json::Value = serde_json::from_slice(&o.stdout)?;
    assert_eq!(v["verdict"], "closes");
    assert_eq!(v["closure"]["gamma"], "1/4");
    let o = membrane(&["ledger", "--scheme", "semilinear", "--dim", "4", "--close"])?;
    assert_eq!(stdout(&o).lines().last(), Some("closes"));
    let o = membrane(&["ledger", "--scheme", "quasilinear"])?;
    assert_eq!(stdout(&o).lines().last(), Some("closes"));
    let o = membrane(&["ledger", "--scheme", "quasilinear", "--gamma", "1/4"])?;
    assert_eq!(o.status.code(), Some(2));
    Ok(())
}

#[test]
fn emit_table_golden_comparison() -> Result<()> {
    for d in ["3", "4"] {
        let o = membrane(&["emit-table", "--dim", d, "--check"])?;
        assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
        assert!(stdout(&o).contains("mismatches: 0, uncovered triples: 0"));
    }
    let o = membrane(&["emit-table", "--dim", "6", "--check"])?;
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("mismatches: 6"));
    let o = membrane(&["emit-table", "--dim", "6"])?;
    assert_eq!(o.status.code(), Some(0));
    let o = membrane(&["emit-table", "--dim", "2"])?;
    assert_eq!(o.status.code(), Some(2));
    Ok(())
}

#[test]
fn simulate_writes_hashed_outputs_and_fits() -> Result<()> {
    let tmp = tempfile::tempdir()?;
    let cfg = tmp.path().join("zero.toml");
    std::fs::write(&cfg, small_config("semilinear", 0.0, tmp.path()))?;
    let o = membrane(&["simulate", cfg.to_str().unwrap(), "--json"])?;
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value = serde_json::from_slice(&o.stdout)?;
    assert_eq!(summary["exit_code"], 0);
    let hash = summary["config_hash"].as_str().unwrap().to_string();
    let run = tmp.path().join("run");
    let csv = std::fs::read_to_string(run.join("energies.csv"))?;
    assert_eq!(csv.lines().next(), Some(format!("# config_sha256={hash}").as_str()));
    let on_disk: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(run.join("summary.json"))?)?;
    assert_eq!(on_disk["config_hash"], hash.as_str());
    assert!(run.join("checkpoints").read_dir()?.next().is_some());
    for line in csv.lines().skip(2) {
        let cells: Vec<&str> = line.split(',').collect();
        assert!(cells[1..4].iter().all(|c| c.parse::<f64>().unwrap() == 0.0));
    }
    Ok(())
}

#[test]
fn exit_codes_for_config_and_guard_failures() -> Result<()> {
    let tmp = tempfile::tempdir()?;
    let missing = membrane(&["simulate", tmp.path().join("nope.toml").to_str().unwrap()])?;
    assert_eq!(missing.status.code(), Some(2));
    let bad = tmp.path().join("bad.toml");
    std::fs::write(&bad, small_config("semilinear", 1e-3, tmp.path()).replace("radius = 1.0", "radius = 1.5"))?;
    let o = membrane(&["simulate", bad.to_str().unwrap()])?;
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("data"));
    let big = tmp.path().join("big.toml");
    std::fs::write(&big, small_config("quasilinear", 0.8, tmp.path()))?;
    let o = membrane(&["simulate", big.to_str().unwrap()])?;
    assert_eq!(o.status.code(), Some(3), "{}", String::from_utf8_lossy(&o.stderr));
    let summary: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(tmp.path().join("run").join("summary.json"))?)?;
    assert_eq!(summary["exit_code"], 3);
    Ok(())
}

#[test]
fn fit_rates_on_synthetic_series() -> Result<()> {
    let tmp = tempfile::tempdir()?;
    let mut csv = String::from("# synthetic\ntau,E0,E1,E2,E3,E4,F0\n");
    for i in 0..=30 {
        let t = 2.0 + 6.0 * i as f64 / 30.0;
        csv.push_str(&format!("{t},{},{},{},{},{},\n", 1.0, 1.0, t.powf(0.2), t.powf(1.2), t.powf(2.25)));
    }
    std::fs::write(tmp.path().join("energies.csv"), csv)?;
    let o = membrane(&["fit-rates", tmp.path().to_str().unwrap(), "--json"])?;
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let r: serde_json::Value = serde_json::from_slice(&o.stdout)?;
    let levels = r["levels"].as_array().unwrap();
    let e4 = levels.iter().find(|l| l["level"] == "E4").unwrap();
    assert!((e4["fit"]["p"].as_f64().unwrap() - 2.25).abs() < 1e-9);
    assert!(levels.iter().all(|l| l["pass"] == true));
    assert!(levels.iter().all(|l| l["level"] != "F0"));
    let o = membrane(&["fit-rates", tmp.path().to_str().unwrap(), "--gamma", "0.1"])?;
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("FAIL E4"));
    let empty = tempfile::tempdir()?;
    assert_eq!(membrane(&["fit-rates", empty.path().to_str().unwrap()])?.status.code(), Some(4));
    Ok(())
}

#[test]
fn check_inequalities_small() -> Result<()> {
    let o = membrane(&["check-inequalities", "--fields", "10", "--taus", "2,4", "--n", "33"])?;
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS Hardy")).count(), 2);
    assert!(!text.contains("FAIL"));
    Ok(())
}
