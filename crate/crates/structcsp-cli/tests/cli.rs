//! End-to-end tests against the compiled binary: command surface, output
//! formats, and the exit-code contract (0 success, 1 unsatisfiable,
//! 2 input error, 3 budget exceeded).

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use structcsp::fixtures;
use structcsp::model::serialize_instance;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_structcsp"))
}

fn run(args: &[&str], dir: &Path) -> Output {
    bin()
        .args(args)
        .current_dir(dir)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tempdir(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("structcsp-cli-{name}-{}", std::process::id()));
    let _ = std::fs::remove_dir_all(&dir);
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

fn write_chain(dir: &Path) -> PathBuf {
    let path = dir.join("chain.csp.json");
    let text = serialize_instance(&fixtures::p_chain(), Some(&fixtures::p_chain_weights()));
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn check_reports_acyclicity() {
    let dir = tempdir("check");
    let chain = write_chain(&dir);
    let out = run(&["check", chain.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("acyclic: yes"), "{text}");
    assert!(text.contains("ghw <= 1"), "{text}");

    let tri = dir.join("tri.csp.json");
    std::fs::write(
        &tri,
        serialize_instance(&fixtures::triangle_equality(), None),
    )
    .unwrap();
    let out = run(&["check", tri.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("acyclic: no"));
}

#[cfg(feature = "paper-fixtures")]
#[test]
fn check_crossword_is_cyclic_with_width_bound() {
    let dir = tempdir("crossword");
    let path = dir.join("crossword.csp.json");
    std::fs::write(&path, fixtures::crossword_json()).unwrap();
    let out = run(&["check", path.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.contains("acyclic: no"), "{text}");
    let bound: usize = text
        .lines()
        .find(|l| l.starts_with("ghw <= "))
        .and_then(|l| l.trim_start_matches("ghw <= ").split(' ').next())
        .and_then(|n| n.parse().ok())
        .expect("ghw bound line");
    assert!(bound >= 2, "a cyclic hypergraph cannot have width 1");
}

#[test]
fn solve_chain_reports_cost_one() {
    let dir = tempdir("solve");
    let chain = write_chain(&dir);
    let out = run(&["solve", chain.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value =
        serde_json::from_str(stdout(&out).lines().next().unwrap()).expect("result JSON");
    assert_eq!(result["status"], "optimal");
    assert_eq!(result["cost"], "1");
    assert_eq!(result["assignment"]["X"], "0");
    // The report goes to stderr as JSON.
    let report: serde_json::Value =
        serde_json::from_str(String::from_utf8_lossy(&out.stderr).lines().next().unwrap())
            .expect("report JSON");
    assert!(report["timings_ms"]["solve"].is_number());
}

#[test]
fn solve_maxcsp_on_big_constraint_fixture_costs_one() {
    let dir = tempdir("maxcsp");
    let path = dir.join("big.csp.json");
    std::fs::write(
        &path,
        serialize_instance(&fixtures::unsat_big_constraint(), None),
    )
    .unwrap();
    let out = run(&["solve", path.to_str().unwrap(), "--mode", "maxcsp"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value =
        serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(result["cost"], "1");
}

#[test]
fn solve_wcsp_picks_cheapest_tuple() {
    let dir = tempdir("wcsp");
    let path = dir.join("one.csp.json");
    std::fs::write(
        &path,
        r#"{"variables":["X"],"domain":["a","b"],
            "constraints":[{"name":"C","scope":["X"],"tuples":[["a"],["b"]],"tuple_weights":[3,5]}]}"#,
    )
    .unwrap();
    let out = run(&["solve", path.to_str().unwrap(), "--mode", "wcsp"], &dir);
    assert_eq!(out.status.code(), Some(0));
    let result: serde_json::Value =
        serde_json::from_str(stdout(&out).lines().next().unwrap()).unwrap();
    assert_eq!(result["cost"], "3");
    assert_eq!(result["assignment"]["X"], "a");
}

#[test]
fn exit_codes_follow_the_contract() {
    let dir = tempdir("exitcodes");
    // 1: unsatisfiable.
    let unsat = dir.join("unsat.csp.json");
    std::fs::write(
        &unsat,
        r#"{"variables":["X"],"domain":["a"],
            "constraints":[{"name":"C","scope":["X"],"tuples":[]}]}"#,
    )
    .unwrap();
    let out = run(&["solve", unsat.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(1));

    // 2: malformed input.
    let bad = dir.join("bad.csp.json");
    std::fs::write(&bad, "{ not json").unwrap();
    let out = run(&["check", bad.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(2));

    // 3: budget exceeded.
    let tri = dir.join("tri.csp.json");
    std::fs::write(
        &tri,
        serialize_instance(&fixtures::triangle_equality(), None),
    )
    .unwrap();
    let out = run(
        &[
            "solve",
            tri.to_str().unwrap(),
            "--no-cache",
            "--budget",
            "2",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(3));

    // Budget override through the environment.
    let out = bin()
        .args(["solve", tri.to_str().unwrap(), "--no-cache"])
        .env("STRUCTCSP_BUDGET", "2")
        .current_dir(&dir)
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn enumerate_streams_solutions_one_per_line() {
    let dir = tempdir("enumerate");
    let chain = write_chain(&dir);
    let out = run(&["solve", chain.to_str().unwrap(), "--enumerate"], &dir);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4); // result + 3 solutions
    for line in &lines[1..] {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        assert!(v["X"].is_string());
    }
    let limited = run(
        &[
            "solve",
            chain.to_str().unwrap(),
            "--enumerate",
            "--limit",
            "1",
        ],
        &dir,
    );
    assert_eq!(stdout(&limited).lines().count(), 2);
}

#[test]
fn convert_writes_instance_and_back_map() {
    let dir = tempdir("convert");
    let path = dir.join("w.csp.json");
    std::fs::write(
        &path,
        r#"{"variables":["X","Y"],"domain":["0","1"],
            "constraints":[
              {"name":"C1","scope":["X","Y"],"tuples":[["0","0"],["1","1"]],"tuple_weights":[1,2]}
            ]}"#,
    )
    .unwrap();
    let out = run(&["convert", path.to_str().unwrap(), "--mode", "wcsp"], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert!(dir.join("w.wcsp.csp.json").exists());
    assert!(dir.join("w.wcsp.map.json").exists());

    // The converted instance re-parses with --allow-reserved and solves to
    // the same optimum as the weighted mode on the original.
    let converted = dir.join("w.wcsp.csp.json");
    let solved = run(
        &["solve", converted.to_str().unwrap(), "--allow-reserved"],
        &dir,
    );
    assert_eq!(solved.status.code(), Some(0));
    let result: serde_json::Value =
        serde_json::from_str(stdout(&solved).lines().next().unwrap()).unwrap();
    assert_eq!(result["cost"], "1");
}

#[test]
fn oracle_matches_solver_on_chain() {
    let dir = tempdir("oracle");
    let chain = write_chain(&dir);
    let solver = run(&["solve", chain.to_str().unwrap()], &dir);
    let oracle = run(
        &["oracle", chain.to_str().unwrap(), "--op", "optimal"],
        &dir,
    );
    let a: serde_json::Value =
        serde_json::from_str(stdout(&solver).lines().next().unwrap()).unwrap();
    let b: serde_json::Value =
        serde_json::from_str(stdout(&oracle).lines().next().unwrap()).unwrap();
    assert_eq!(a["cost"], b["cost"]);

    let solutions = run(
        &["oracle", chain.to_str().unwrap(), "--op", "solutions"],
        &dir,
    );
    assert_eq!(stdout(&solutions).lines().count(), 3);
}

#[test]
fn generate_is_deterministic_per_seed() {
    let dir = tempdir("generate");
    let a = run(&["generate", "--family", "acyclic", "--seed", "9"], &dir);
    let b = run(&["generate", "--family", "acyclic", "--seed", "9"], &dir);
    let c = run(&["generate", "--family", "acyclic", "--seed", "10"], &dir);
    assert_eq!(stdout(&a), stdout(&b));
    assert_ne!(stdout(&a), stdout(&c));
}

#[test]
fn decompose_writes_cache_solve_reuses_it() {
    let dir = tempdir("cache");
    let tri = dir.join("tri.csp.json");
    std::fs::write(
        &tri,
        serialize_instance(&fixtures::triangle_equality(), None),
    )
    .unwrap();
    let out = run(&["decompose", tri.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    let cache = dir.join("tri.ghd.json");
    assert!(cache.exists());
    let before = std::fs::read_to_string(&cache).unwrap();
    let out = run(&["solve", tri.to_str().unwrap()], &dir);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(std::fs::read_to_string(&cache).unwrap(), before);
}

#[test]
fn bench_emits_csv() {
    let dir = tempdir("bench");
    let out = run(
        &[
            "bench",
            "--sizes",
            "50,100",
            "--repeat",
            "2",
            "--domain-size",
            "3",
        ],
        &dir,
    );
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "size,median_ms,runs_ms");
    assert_eq!(lines.len(), 3);
    assert!(lines[1].starts_with("50,"));
    assert!(lines[2].starts_with("100,"));
}
