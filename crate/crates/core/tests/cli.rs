use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use genericase::runner::config_digest;
use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_genericase"));
    c.env_remove("GENERICASE_OUT");
    c
}

fn config(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("configs").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

fn json(path: &Path) -> Value {
    serde_json::from_slice(&std::fs::read(path).unwrap()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn list_is_stable_and_names_processes_with_schedules() {
    let a = run(&["list"]);
    let b = run(&["list"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    for name in ["uniform-word", "nonbacktracking-walk", "graph-growth", "exponent-sum", "has-edge", "AllValid", "Deterministic"] {
        assert!(text.contains(name), "missing {name}");
    }
}

#[test]
fn unknown_process_exits_2_and_lists_processes() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "bad.toml",
        "kind = \"property-curve\"\nseed = 1\ngrid = [1, 2]\nsamples = 10\n\n[process]\nname = \"brownian-motion\"\n\n[subset]\nname = \"all\"\n",
    );
    let o = run(&["run", cfg.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    let err = stderr(&o);
    assert!(err.contains("brownian-motion"), "{err}");
    assert!(err.contains("uniform-word") && err.contains("graph-growth"), "{err}");
    assert!(err.contains("line"), "{err}");
}

#[test]
fn missing_seed_and_bad_grid_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let no_seed = write(dir.path(), "a.toml", "kind = \"density\"\nn_max = 3\n[domain]\nname = \"graphs\"\n[subset]\nname = \"all\"\n");
    assert_eq!(run(&["run", no_seed.to_str().unwrap()]).status.code(), Some(2));
    let bad_grid = write(
        dir.path(),
        "b.toml",
        "kind = \"property-curve\"\nseed = 1\ngrid = [3, 2]\nsamples = 10\n[process]\nname = \"graph-growth\"\n[subset]\nname = \"all\"\n",
    );
    let o = run(&["run", bad_grid.to_str().unwrap(), "--out", dir.path().join("o").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("increasing"));
}

#[test]
fn oversized_enumeration_exits_3() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("o");
    let o = run(&["run", config("density-starts-with.toml").to_str().unwrap(), "--cap", "100", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3), "{}", stderr(&o));
    assert!(!out.join("density.csv").exists());
}

#[test]
fn calibrate_refuses_other_kinds() {
    let o = run(&["calibrate", config("two-element.toml").to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("calibrate"));
}

#[test]
fn reruns_are_byte_identical_and_digest_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("hnn-uniform.toml");
    let mut csvs = Vec::new();
    for (i, threads) in ["1", "8", "1"].iter().enumerate() {
        let out = dir.path().join(format!("r{i}"));
        let o = run(&["run", cfg.to_str().unwrap(), "--threads", threads, "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}", stderr(&o));
        csvs.push((std::fs::read(out.join("curve.csv")).unwrap(), std::fs::read(out.join("verdict.json")).unwrap()));
    }
    assert_eq!(csvs[0], csvs[1]);
    assert_eq!(csvs[0], csvs[2]);

    let out = dir.path().join("r0");
    let csv = String::from_utf8(csvs[0].0.clone()).unwrap();
    assert_eq!(csv.lines().next(), Some("n,N,k,pHat,ciLow,ciHigh,mode"));
    assert_eq!(csv.lines().count(), 6);
    let verdict = json(&out.join("verdict.json"));
    assert_eq!(verdict["classification"], "EvidenceGeneric");
    let digest = config_digest(&std::fs::read_to_string(&cfg).unwrap());
    assert_eq!(verdict["config_digest"], digest.as_str());
    let manifest = json(&out.join("manifest.json"));
    assert_eq!(manifest["config_digest"], digest.as_str());
    assert_eq!(manifest["resolved"]["seed"], 20240502);
    assert_eq!(manifest["files"].as_array().unwrap().len(), 2);
}

#[test]
fn seed_override_is_recorded_and_changes_samples() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = config("two-element.toml");
    let a = dir.path().join("a");
    let b = dir.path().join("b");
    assert!(run(&["run", cfg.to_str().unwrap(), "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["run", cfg.to_str().unwrap(), "--seed", "99", "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(json(&b.join("verdict.json"))["seed"], 99);
    assert_eq!(json(&b.join("manifest.json"))["overrides"]["seed"], 99);
    assert_ne!(std::fs::read(a.join("curve.csv")).unwrap(), std::fs::read(b.join("curve.csv")).unwrap());
}

#[test]
fn output_directory_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("env-out");
    let o = bin()
        .args(["run", config("density-starts-with.toml").to_str().unwrap()])
        .env("GENERICASE_OUT", &out)
        .output()
        .unwrap();
    assert!(o.status.success());
    let csv = std::fs::read_to_string(out.join("density.csv")).unwrap();
    assert!(csv.lines().any(|l| l.starts_with("12,4096,2048,1/2,")));
}

#[test]
fn json_and_toml_configs_agree() {
    let dir = tempfile::tempdir().unwrap();
    let toml_text = std::fs::read_to_string(config("graph-growth-edges.toml")).unwrap();
    let value: toml::Value = toml::from_str(&toml_text).unwrap();
    let json_cfg = write(dir.path(), "g.json", &serde_json::to_string(&value).unwrap());
    let (a, b) = (dir.path().join("t"), dir.path().join("j"));
    assert!(run(&["run", config("graph-growth-edges.toml").to_str().unwrap(), "--out", a.to_str().unwrap()]).status.success());
    assert!(run(&["run", json_cfg.to_str().unwrap(), "--out", b.to_str().unwrap()]).status.success());
    assert_eq!(std::fs::read(a.join("curve.csv")).unwrap(), std::fs::read(b.join("curve.csv")).unwrap());
}

#[test]
fn every_bundled_config_finishes_within_a_minute() {
    let dir = tempfile::tempdir().unwrap();
    let mut configs: Vec<PathBuf> = std::fs::read_dir(config("")).unwrap().map(|e| e.unwrap().path()).collect();
    configs.sort();
    assert!(configs.len() >= 6);
    for cfg in configs {
        let start = Instant::now();
        let out = dir.path().join(cfg.file_name().unwrap());
        let o = run(&["run", cfg.to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{}: {}", cfg.display(), stderr(&o));
        assert!(start.elapsed() < Duration::from_secs(60), "{}", cfg.display());
        assert!(out.join("verdict.json").exists() && out.join("manifest.json").exists());
    }
}

#[test]
fn calibration_configs_pass_their_tests() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["permutation-uniformity.toml", "ball-uniform.toml", "graph-uniformity.toml", "free-group-walk.toml"] {
        let out = dir.path().join(name);
        let o = run(&["calibrate", config(name).to_str().unwrap(), "--out", out.to_str().unwrap()]);
        assert!(o.status.success(), "{name}: {}", stderr(&o));
        assert_eq!(json(&out.join("verdict.json"))["results"]["pass"], true, "{name}");
    }
}
