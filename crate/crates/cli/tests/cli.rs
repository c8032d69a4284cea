use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use nspmr::{builtin_scenario, parse_scenario, path_length, run, BuiltinId, PlannerKind};
use nspmr_cli::trajectory_csv::{read_trajectory, trajectory_to_string, HEADER};

fn nspmr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nspmr"))
        .args(args)
        .env_remove("NSPMR_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path_str(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn run_reports_outcome_and_exit_code() {
    let o = nspmr(&["run", "--scenario", "builtin:scenario1"]);
    assert_eq!(code(&o), 0);
    let line = stdout(&o);
    let fields: Vec<&str> = line.split_whitespace().collect();
    assert_eq!(fields[0], "goal_reached");
    assert_eq!(fields.len(), 4);
    assert_eq!(code(&nspmr(&["run", "--scenario", "builtin:scenario1", "--planner", "bug2"])), 0);
}

#[test]
fn unfinished_runs_exit_2() {
    let o = nspmr(&["run", "--scenario", "builtin:scenario1", "--planner", "bug2", "--max-iters", "5"]);
    assert_eq!(code(&o), 2);
    assert!(stdout(&o).starts_with("iteration_limit 1.250 "));
}

#[test]
fn errors_exit_1() {
    for args in [
        &["run", "--scenario", "/no/such/file.json"][..],
        &["run", "--scenario", "builtin:nope"],
        &["run", "--scenario", "builtin:scenario1", "--planner", "astar"],
        &["run", "--scenario", "builtin:scenario1", "--sensor-range", "0.1"],
        &["bench", "--suite", "random", "--seeds", "0"],
        &["frobnicate"],
    ] {
        let o = nspmr(args);
        assert_eq!(code(&o), 1, "{args:?}");
        assert!(!o.stderr.is_empty(), "{args:?}");
    }
    assert_eq!(code(&nspmr(&["--help"])), 0);
    assert_eq!(code(&nspmr(&["--version"])), 0);
}

#[test]
fn gen_is_deterministic_and_loadable() {
    let a = stdout(&nspmr(&["gen", "--seed", "11", "--count", "6"]));
    let b = stdout(&nspmr(&["gen", "--seed", "11", "--count", "6"]));
    assert_eq!(a, b);
    let s = parse_scenario(&a).unwrap();
    assert_eq!(s.obstacles.len(), 6);
    assert_ne!(a, stdout(&nspmr(&["gen", "--seed", "12", "--count", "6"])));

    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("world.json");
    assert_eq!(code(&nspmr(&["gen", "--seed", "11", "--count", "6", "--out", path_str(&file)])), 0);
    assert_eq!(fs::read_to_string(&file).unwrap(), a);
    assert_eq!(code(&nspmr(&["run", "--scenario", path_str(&file)])), 0);
}

#[test]
fn csv_and_svg_outputs() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("t.csv");
    let svg = dir.path().join("t.svg");
    let args = [
        "run",
        "--scenario",
        "builtin:scenario1",
        "--out-csv",
        path_str(&csv),
        "--out-svg",
        path_str(&svg),
    ];
    assert_eq!(code(&nspmr(&args)), 0);
    let text = fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next().unwrap(), HEADER.join(","));

    let s = builtin_scenario(BuiltinId::Scenario1);
    let (expected, r) = run(&s, PlannerKind::Nspmr, 10_000).unwrap();
    let parsed = read_trajectory(text.as_bytes()).unwrap();
    assert_eq!(parsed.len(), expected.len());
    assert!((path_length(&parsed) - r.length).abs() < 1e-6);
    assert_eq!(trajectory_to_string(&parsed), text);

    let image = fs::read_to_string(&svg).unwrap();
    assert!(image.starts_with("<svg"));
    assert_eq!(image.matches("<polygon").count(), 3);
    assert_eq!(image.matches("<polyline").count(), 1);

    // a second run writes the same bytes
    assert_eq!(code(&nspmr(&args)), 0);
    assert_eq!(fs::read_to_string(&csv).unwrap(), text);
}

#[test]
fn bench_writes_sorted_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("bench.csv");
    let o = nspmr(&["bench", "--suite", "random", "--seeds", "3", "--planners", "nspmr,bug2", "--out", path_str(&out)]);
    assert_eq!(code(&o), 0);
    let text = fs::read_to_string(&out).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "scenario,planner,outcome,length_m,time_s,iters,oracle_m,ratio");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 6);
    assert_eq!((rows[0][0], rows[0][1]), ("random_0", "bug2"));
    assert_eq!((rows[1][0], rows[1][1]), ("random_0", "nspmr"));
    assert!(rows.iter().all(|r| r[2] == "goal_reached" && !r[6].is_empty()));
    assert_eq!(stdout(&o).lines().count(), 7);
}

#[test]
fn bench_skips_bug_on_moving_obstacles() {
    let o = nspmr(&["bench", "--suite", "paper", "--planners", "bug2"]);
    assert_eq!(code(&o), 0);
    assert!(!stdout(&o).contains("dynamic_crossing"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dynamic_crossing"));
}

#[test]
fn range_sweep_labels_rows() {
    let o = nspmr(&["bench", "--suite", "paper", "--planners", "nspmr", "--ranges", "2,20"]);
    let table = stdout(&o);
    assert!(table.contains("office_like@d=2 "));
    assert!(table.contains("office_like@d=20 "));
}
