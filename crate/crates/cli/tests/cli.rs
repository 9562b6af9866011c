use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

use refinery_cli::gamefile::{parse_game_file, GameFile};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_refinery"))
}

fn games() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../games")
}

fn game(name: &str) -> String {
    games().join(name).display().to_string()
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout_json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&o.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.display().to_string()
}

#[test]
fn bundled_games_round_trip() {
    let mut n = 0;
    for entry in std::fs::read_dir(games()).unwrap() {
        let path = entry.unwrap().path();
        let text = std::fs::read_to_string(&path).unwrap();
        let (file, _) = parse_game_file(&path).unwrap_or_else(|e| panic!("{}: {e:#}", path.display()));
        assert_eq!(file.to_json(), text, "{}", path.display());
        let again: GameFile = serde_json::from_str(&file.to_json()).unwrap();
        assert_eq!(again, file);
        n += 1;
    }
    assert!(n >= 10);
}

#[test]
fn empty_file_is_a_schema_error() {
    let dir = tempfile::tempdir().unwrap();
    let p = write(dir.path(), "empty.json", "");
    let o = run(&["solve", "--game", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("schema error"));
}

#[test]
fn inflated_basis_count_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "version": 1,
  "kind": "matroid_congestion",
  "players": 2,
  "matroid": { "type": "uniform", "rank": 1, "size": 2 },
  "delays": [["1", "2"], ["1", "3"]],
  "basis_counts": { "total": "2", "per_resource": ["5", "1"] }
}"#;
    let p = write(dir.path(), "m.json", text);
    let o = run(&["solve", "--game", &p]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("validation error"));
}

#[test]
fn matroid_game_solves_and_verifies() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{
  "version": 1,
  "kind": "matroid_congestion",
  "players": 2,
  "matroid": { "type": "uniform", "rank": 1, "size": 2 },
  "delays": [["1", "2"], ["1", "3"]],
  "basis_counts": { "total": "2", "per_resource": ["1", "1"] }
}"#;
    let p = write(dir.path(), "m.json", text);
    let o = run(&["solve", "--game", &p]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let r = stdout_json(&o);
    let bases = r["result"]["bases"].clone();
    let prof = write(dir.path(), "p.json", &serde_json::json!({ "sets": bases }).to_string());
    let o = run(&["verify", "--refinement", "no-deviation", "--game", &p, "--profile", &prof]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["pass"], Value::Bool(true));
}

#[test]
fn proper_solve_on_fig2() {
    let o = run(&["solve", "--refinement", "proper", "--game", &game("fig2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["result"]["favored"], serde_json::json!([0, 0]));
    assert_eq!(r["termination"], "Converged");
    assert_eq!(r["kind"], "table");
}

#[test]
fn reports_are_deterministic() {
    let strip = |o: &Output| {
        let mut v = stdout_json(o);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        v
    };
    let args = ["solve", "--refinement", "perfect", "--game", &game("double-exp-2.json")];
    assert_eq!(strip(&run(&args)), strip(&run(&args)));
}

#[test]
fn generated_double_exp_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("de.json");
    let o = run(&["gen", "--kind", "double-exp", "--n", "2", "--out", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = std::fs::read_to_string(&out).unwrap();
    let (file, _) = parse_game_file(&out).unwrap();
    assert_eq!(file.to_json(), text);
    assert_eq!(text, std::fs::read_to_string(games().join("double-exp-2.json")).unwrap());
}

#[test]
fn verify_reports_pass_and_fail() {
    let dir = tempfile::tempdir().unwrap();
    let good = write(dir.path(), "good.json", r#"{"strategies": [["99/100", "1/100"], ["99/100", "1/100"]]}"#);
    let bad = write(dir.path(), "bad.json", r#"{"strategies": [["1/100", "99/100"], ["1/100", "99/100"]]}"#);
    let o = run(&["verify", "--refinement", "eps-perfect", "--eps", "1/100", "--game", &game("fig1.json"), "--profile", &good]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout_json(&o)["pass"], Value::Bool(true));
    let o = run(&["verify", "--refinement", "eps-perfect", "--eps", "1/100", "--game", &game("fig1.json"), "--profile", &bad]);
    assert_eq!(o.status.code(), Some(1));
    let v = stdout_json(&o);
    assert_eq!(v["pass"], Value::Bool(false));
    assert_eq!(v["eps"], "1/100");
    assert!(v["witness"].is_object());
}

#[test]
fn solve_output_passes_verify() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["solve", "--refinement", "proper", "--game", &game("fig2.json")]);
    let r = stdout_json(&o);
    let prof = write(dir.path(), "p.json", &serde_json::json!({ "eps": r["result"]["numeric"]["eps"], "strategies": r["result"]["numeric"]["strategies"] }).to_string());
    let o = run(&["verify", "--refinement", "eps-proper", "--game", &game("fig2.json"), "--profile", &prof]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
}

#[test]
fn step_cap_exits_three() {
    let o = run(&["solve", "--game", &game("fig4.json"), "--eps", "1/100", "--max-steps", "3"]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(stdout_json(&o)["termination"], "StepCapHit");
}

#[test]
fn trace_emits_json_lines() {
    let o = run(&["trace", "--refinement", "proper", "--game", &game("fig2.json")]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    // the default start is already a fixed point on this game
    assert!(text.lines().all(|l| serde_json::from_str::<Value>(l).is_ok()));
    let o = run(&["trace", "--game", &game("max-cut-escape.json")]);
    let text = String::from_utf8(o.stdout).unwrap();
    let lines: Vec<Value> = text.lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert_eq!(lines[0]["step"], 1);
}

#[test]
fn trace_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let t = dir.path().join("t.jsonl");
    let o = run(&["solve", "--game", &game("max-cut-escape.json"), "--trace-out", t.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    let lines = std::fs::read_to_string(&t).unwrap().lines().count();
    assert_eq!(lines as u64, r["steps"].as_u64().unwrap());
}

#[test]
fn sweep_writes_one_row_per_start() {
    let o = run(&["sweep", "--game", &game("fig4.json"), "--eps", "1/100", "--grid", "3"]);
    assert_eq!(o.status.code(), Some(0));
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().count(), 1 + 9);
    assert!(text.starts_with("start,iters,fixed_point"));
    let o = run(&["sweep", "--game", &game("fig4.json"), "--eps", "1/100", "--random", "4", "--seed", "7"]);
    let again = run(&["sweep", "--game", &game("fig4.json"), "--eps", "1/100", "--random", "4", "--seed", "7"]);
    assert_eq!(o.stdout, again.stdout);
}

#[test]
fn incompatible_requests_exit_two() {
    for args in [
        vec!["solve", "--game", &game("mp-christmas.json")],
        vec!["solve", "--refinement", "efpe", "--game", &game("fig1.json")],
        vec!["solve", "--refinement", "perfect", "--game", &game("fig2-efg.json")],
        vec!["solve", "--refinement", "bogus", "--game", &game("fig1.json")],
        vec!["frobnicate"],
    ] {
        assert_eq!(run(&args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn efg_solve_reports_limits() {
    let o = run(&["solve", "--refinement", "efpe", "--game", &game("fig2-efg.json")]);
    assert_eq!(o.status.code(), Some(0));
    let r = stdout_json(&o);
    assert_eq!(r["result"]["limit"].as_array().unwrap().len(), 2);
}

#[test]
fn enumeration_cap_from_environment() {
    let perfect = ["solve", "--exhaustive", "--refinement", "perfect", "--game", &game("fig2.json")];
    let o = bin().args(perfect).env("REFINERY_ENUM_CAP", "1").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    // the ranked scheme falls back to dynamics above the cap
    let proper = ["solve", "--exhaustive", "--refinement", "proper", "--game", &game("fig2.json")];
    for cap in ["1", "1000000"] {
        let o = bin().args(proper).env("REFINERY_ENUM_CAP", cap).output().unwrap();
        assert_eq!(o.status.code(), Some(0));
        assert_eq!(stdout_json(&o)["result"]["favored"], serde_json::json!([0, 0]));
    }
}

#[test]
fn gen_kinds_validate() {
    let dir = tempfile::tempdir().unwrap();
    let team = dir.path().join("team.json");
    let t = refinery_cli::table_file(&[2, 2, 2], &[3, 0, 0, 1, 0, 2, 1, 0]).unwrap();
    std::fs::write(&team, t.to_json()).unwrap();
    let cases: Vec<Vec<&str>> = vec![
        vec!["--kind", "fig3"],
        vec!["--kind", "double-exp3", "--n", "2"],
        vec!["--kind", "max-cut-triplet", "--edges", "0-1:2,1-2:1"],
        vec!["--kind", "knapsack", "--weights", "2,3", "--capacity", "3"],
        vec!["--kind", "team-bot", "--team-game", team.to_str().unwrap(), "--r", "1/2", "--delta", "1/4"],
    ];
    for c in cases {
        let o = bin().arg("gen").args(&c).output().unwrap();
        assert_eq!(o.status.code(), Some(0), "{c:?}: {}", String::from_utf8_lossy(&o.stderr));
        let f: GameFile = serde_json::from_slice(&o.stdout).unwrap();
        f.validate().unwrap();
    }
}
