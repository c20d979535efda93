use std::path::Path;
use std::process::Command;

use serde_json::Value;
use tracelens::report::{AnalysisReport, Config};
use tracelens_cli::{resolve_config, run};

fn cli(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["tracelens"];
    argv.extend_from_slice(args);
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn generate(dir: &Path, scenario: &str, seed: u64) -> std::path::PathBuf {
    let file = dir.join(format!("{scenario}-{seed}.ndjson"));
    let (code, _, err) = cli(&["generate", "--scenario", scenario, "--seed", &seed.to_string(), "--out", p(&file)]);
    assert_eq!(code, 0, "{err}");
    file
}

#[test]
fn generate_then_analyze_finds_oscillation() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "oscillate", 1);
    assert!(dir.path().join("oscillate-1.truth.json").exists());
    let (code, _, err) = cli(&["analyze", p(&file)]);
    assert_eq!(code, 0, "{err}");
    let text = std::fs::read_to_string(dir.path().join("oscillate-1.report.json")).unwrap();
    let report = AnalysisReport::from_json(&text).unwrap();
    assert!(report.summary.pattern_counts["Oscillate"] >= 1);
}

#[test]
fn analysis_is_byte_identical_and_cached() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "poor-mans-debugger", 4);
    let report = dir.path().join("poor-mans-debugger-4.report.json");
    assert_eq!(cli(&["analyze", p(&file)]).0, 0);
    let first = std::fs::read(&report).unwrap();
    let (code, out, _) = cli(&["analyze", p(&file)]);
    assert_eq!(code, 0);
    assert!(out.contains("up to date"), "{out}");
    assert_eq!(cli(&["analyze", "--force", p(&file)]).0, 0);
    assert_eq!(first, std::fs::read(&report).unwrap());
}

#[test]
fn render_writes_both_svgs() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "restart", 2);
    let out = dir.path().join("svg");
    let (code, _, err) = cli(&["render", p(&file), "--lod", "2", "--filter", "Navigation,Edit,noedges=Edit", "--out", p(&out)]);
    assert_eq!(code, 0, "{err}");
    for name in ["restart-2.track.svg", "restart-2.score.svg"] {
        let svg = std::fs::read_to_string(out.join(name)).unwrap();
        assert!(svg.starts_with("<?xml") && svg.trim_end().ends_with("</svg>"));
    }
    let (code, _, err) = cli(&["render", p(&file), "--filter", "Bogus"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn compare_prints_rankings() {
    let dir = tempfile::tempdir().unwrap();
    let a = generate(dir.path(), "investigate-edit-validate", 1);
    let b = generate(dir.path(), "restart", 1);
    let (code, out, err) = cli(&["compare", p(&a), p(&b)]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["recording_ids"].as_array().unwrap().len(), 2);
    assert!(v["rankings"]["final_score"].is_array());
    let target = dir.path().join("cmp.json");
    assert_eq!(cli(&["compare", p(&a), p(&b), "--out", p(&target)]).0, 0);
    assert_eq!(std::fs::read_to_string(target).unwrap(), out);
    assert_eq!(cli(&["compare", p(&a)]).0, 1);
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    assert_eq!(cli(&["frobnicate"]).0, 1);
    assert_eq!(cli(&["--help"]).0, 0);
    assert_eq!(cli(&["generate", "--scenario", "nope", "--seed", "1", "--out", p(&dir.path().join("x.ndjson"))]).0, 1);
    assert_eq!(cli(&["ingest", p(&dir.path().join("missing.ndjson"))]).0, 3);

    let file = generate(dir.path(), "read-through", 1);
    let (code, out, _) = cli(&["ingest", p(&file)]);
    assert_eq!(code, 0);
    assert!(out.starts_with("read-through-1: "), "{out}");

    let text = std::fs::read_to_string(&file).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    let broken = dir.path().join("broken.ndjson");
    std::fs::write(&broken, format!("{}\n{}\n{{\"id\": 3,", lines[0], lines[1])).unwrap();
    let (code, _, err) = cli(&["ingest", p(&broken)]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");

    let bad_config = dir.path().join("bad.toml");
    std::fs::write(&bad_config, "[nonsense]\nx = 1\n").unwrap();
    assert_eq!(cli(&["--config", p(&bad_config), "analyze", p(&file)]).0, 2);
    assert_eq!(cli(&["--config", p(&dir.path().join("none.toml")), "analyze", p(&file)]).0, 3);
}

#[test]
fn config_flag_wins_over_environment() {
    let dir = tempfile::tempdir().unwrap();
    let flag = dir.path().join("flag.toml");
    let env = dir.path().join("env.json");
    std::fs::write(&flag, "[scoring]\nsurviving_edit = 5\n").unwrap();
    std::fs::write(&env, r#"{"scoring": {"surviving_edit": 7}}"#).unwrap();
    let from_flag = resolve_config(Some(&flag), Some(env.clone().into_os_string())).unwrap();
    assert_eq!(from_flag.scoring.surviving_edit, 5);
    let from_env = resolve_config(None, Some(env.into_os_string())).unwrap();
    assert_eq!(from_env.scoring.surviving_edit, 7);
    assert_eq!(resolve_config(None, Some("".into())).unwrap(), Config::default());
    assert_eq!(resolve_config(None, None).unwrap(), Config::default());
}

#[test]
fn binary_reads_config_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let file = generate(dir.path(), "investigate-edit-validate", 2);
    let config = dir.path().join("scoring.toml");
    std::fs::write(&config, "[scoring]\nvalidation_launch = 10\n").unwrap();
    let status = Command::new(env!("CARGO_BIN_EXE_tracelens"))
        .args(["analyze", p(&file)])
        .env("TRACELENS_CONFIG", &config)
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("investigate-edit-validate-2.report.json")).unwrap();
    let with_env = AnalysisReport::from_json(&text).unwrap();
    assert_eq!(with_env.config_hash, Config::load(&config).unwrap().hash());
    let status = Command::new(env!("CARGO_BIN_EXE_tracelens"))
        .args(["ingest", p(&dir.path().join("absent.ndjson"))])
        .env_remove("TRACELENS_CONFIG")
        .output()
        .unwrap();
    assert_eq!(status.status.code(), Some(3));
}
