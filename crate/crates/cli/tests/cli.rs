use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn nimgen(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_nimgen")).args(args).env_remove("NIMGEN_CACHE").output().expect("run nimgen")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("utf-8 output")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn golden_path(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Set `UPDATE_GOLDEN=1` to rewrite the files after an intended change.
fn assert_golden(name: &str, actual: &str) {
    let path = golden_path(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let expected = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert_eq!(actual, expected, "golden file {name} differs");
}

/// JSON output with the wall-time field removed.
fn without_wall_time(text: &str) -> Value {
    let mut v: Value = serde_json::from_str(text).expect("valid JSON");
    if let Value::Array(items) = &mut v {
        for item in items {
            item.as_object_mut().unwrap().remove("wallMs");
        }
    }
    v
}

/// CSV output with the millis column blanked.
fn without_millis(text: &str) -> String {
    text.lines()
        .map(|l| {
            let mut cells: Vec<&str> = l.splitn(8, ',').collect();
            if cells.len() == 8 && cells[0] != "spec" {
                cells[6] = "";
            }
            cells.join(",")
        })
        .collect::<Vec<_>>()
        .join("\n")
}

fn solve_json(args: &[&str]) -> (i32, Value) {
    let mut full = vec!["solve", "--format", "json"];
    full.extend_from_slice(args);
    let out = nimgen(&full);
    (code(&out), without_wall_time(&stdout(&out)))
}

#[test]
fn solve_examples() {
    let (c, v) = solve_json(&["--game", "gen", "Dih(Z5)", "Z2"]);
    assert_eq!(c, 0);
    assert_eq!(v[0]["nim"], 3);
    assert_eq!(v[1]["nim"], 2);
    let (c, v) = solve_json(&["--game", "dng", "Dih(Z6)"]);
    assert_eq!(c, 0);
    assert_eq!(v[0]["nim"], 0);
    assert_eq!(v[0]["variant"], "DNG");
}

#[test]
fn solve_json_matches_golden() {
    let (c, v) = solve_json(&["Dih(Z4)", "Z3xZ2", "Dih(Z9)", "Z1"]);
    assert_eq!(c, 2, "Z1 is an error record");
    let text = serde_json::to_string_pretty(&v).unwrap() + "\n";
    // The version is part of every record; keep the golden file stable across bumps.
    let text = text.replace(&format!("\"{}\"", env!("CARGO_PKG_VERSION")), "\"VERSION\"");
    assert_golden("solve.json", &text);
}

#[test]
fn modes_agree_and_are_reported() {
    let (_, brute) = solve_json(&["--mode", "brute", "Dih(Z6)"]);
    let (_, structure) = solve_json(&["--mode", "structure", "Dih(Z6)"]);
    assert_eq!(brute[0]["mode"], "brute");
    assert_eq!(structure[0]["mode"], "structure");
    assert_eq!(brute[0]["nim"], structure[0]["nim"]);
    let (c, _) = solve_json(&["--cross-check", "Dih(Z6)", "Z2xZ4"]);
    assert_eq!(c, 0);
}

#[test]
fn per_spec_errors_exit_two() {
    let (c, v) = solve_json(&["Z2", "Z(", "--game", "dng", "Dih(Z9)"]);
    assert_eq!(c, 2);
    assert_eq!(v[0]["error"], Value::Null);
    assert!(v[1]["error"].as_str().unwrap().contains("position"));
    assert!(v[2]["error"].as_str().unwrap().contains("brute-force cap"));
}

#[test]
fn dot_is_only_for_diagrams() {
    assert_eq!(code(&nimgen(&["solve", "--format", "dot", "Z2"])), 2);
    assert_eq!(code(&nimgen(&["table", "Zn", "--n", "2..3", "--format", "dot"])), 2);
}

#[test]
fn diagrams_match_golden() {
    let full = nimgen(&["diagram", "Dih(Z4)"]);
    assert_eq!(code(&full), 0);
    assert_golden("dih4.dot", &stdout(&full));
    assert_eq!(stdout(&full).matches("[label=").count(), 5);

    let simple = nimgen(&["diagram", "--simplified", "Dih(Z4)"]);
    assert_golden("dih4_simplified.dot", &stdout(&simple));
    assert_eq!(stdout(&simple).matches("[label=").count(), 3);

    let z7 = nimgen(&["diagram", "Z7"]);
    assert_eq!(stdout(&z7).matches("[label=").count(), 2);

    let json = nimgen(&["diagram", "--format", "json", "Dih(Z3)"]);
    assert_golden("dih3.json", &stdout(&json));
}

#[test]
fn diagram_rejects_dng() {
    let out = nimgen(&["diagram", "--game", "dng", "Dih(Z4)"]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("GEN"));
}

#[test]
fn dihedral_table_csv() {
    let out = nimgen(&["table", "Dih(Zn)", "--n", "2..12", "--game", "gen"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("spec,order,variant,nim,mode,d(G),millis,note"));
    let nims: Vec<&str> = lines.map(|l| l.split(',').nth(3).unwrap()).collect();
    assert_eq!(nims, ["1", "3", "0", "3", "1", "3", "0", "3", "1", "3", "0"]);
}

#[test]
fn brute_table_computes_every_row() {
    let out = nimgen(&["table", "Zn", "--n", "2..8", "--game", "gen", "--mode", "brute"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 7);
    for r in rows {
        assert!(!r[3].is_empty() && r[4] == "brute" && r[7].is_empty(), "{r:?}");
    }
}

#[test]
fn empty_range_is_header_only() {
    let out = nimgen(&["table", "Dih(Zn)", "--n", "5..2"]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), "spec,order,variant,nim,mode,d(G),millis,note\n");
}

#[test]
fn table_rows_with_errors_leave_nim_blank() {
    let out = nimgen(&["table", "Zn", "--n", "1..2"]);
    assert_eq!(code(&out), 2);
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines[1].starts_with("Z1,1,GEN,,,,"), "{}", lines[1]);
    assert!(lines[2].starts_with("Z2,2,GEN,2,brute,1,"), "{}", lines[2]);
}

#[test]
fn verify_suites() {
    for suite in ["theorem", "even-types", "all"] {
        let out = nimgen(&["verify", "--suite", suite]);
        assert_eq!(code(&out), 0, "{suite}: {}", stdout(&out));
        assert!(!stdout(&out).contains("[FAIL]"));
    }
    let all = stdout(&nimgen(&["verify", "--suite", "all"]));
    assert_eq!(all.lines().filter(|l| l.starts_with("[PASS]")).count(), 12);
    assert_eq!(code(&nimgen(&["verify", "--suite", "nope"])), 2);
}

#[test]
fn verify_user_specs() {
    let out = nimgen(&["verify", "Z1"]);
    assert_eq!(code(&out), 2);
    assert!(stdout(&out).contains("nontrivial"));

    let out = nimgen(&["verify", "--format", "json", "Z3xZ3", "Dih(Z2xZ4)", "Z6"]);
    assert_eq!(code(&out), 0);
    let v: Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(v.as_array().unwrap().len(), 3);
    assert!(v.as_array().unwrap().iter().all(|r| r["agree"] == true));
    assert_eq!(v[0]["computed"], 3);

    let out = nimgen(&["verify", "--game", "dng", "Z3", "Z2xZ2"]);
    assert_eq!(code(&out), 0, "{}", stdout(&out));
}

#[test]
fn cache_hits_equal_fresh_results() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    let cache_arg = cache.to_str().unwrap();
    let specs = ["Z2", "Z12", "Dih(Z5)", "Dih(Z2xZ2)", "Z2xZ2xZ2", "Dih(Z3xZ3)", "Z3xZ2"];
    let run = |extra: &[&str]| {
        let mut args = vec!["solve", "--format", "json"];
        args.extend_from_slice(extra);
        args.extend_from_slice(&specs);
        without_wall_time(&stdout(&nimgen(&args)))
    };
    let fresh = run(&[]);
    let first = run(&["--cache", cache_arg]);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    // Z2xZ3 and Z6 are different groups; Z3xZ2 shares the canonical key Z2xZ3.
    assert_eq!(stored["entries"].as_object().unwrap().len(), specs.len());
    let key = format!("Z2xZ3|GEN|{}", env!("CARGO_PKG_VERSION"));
    assert!(stored["entries"].get(&key).is_some(), "{stored}");
    let second = run(&["--cache", cache_arg]);
    assert_eq!(fresh, first);
    assert_eq!(first, second);

    // Equivalent spellings hit the same entry.
    let respelled = without_wall_time(&stdout(&nimgen(&["solve", "--format", "json", "--cache", cache_arg, "Z2xZ3"])));
    assert_eq!(respelled[0], fresh[6]);
}

#[test]
fn environment_overrides_cache_flag() {
    let dir = tempfile::tempdir().unwrap();
    let from_env = dir.path().join("env.json");
    let from_flag = dir.path().join("flag.json");
    let out = Command::new(env!("CARGO_BIN_EXE_nimgen"))
        .args(["solve", "--cache", from_flag.to_str().unwrap(), "Z4"])
        .env("NIMGEN_CACHE", &from_env)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0);
    assert!(from_env.exists());
    assert!(!from_flag.exists());
}

#[test]
fn corrupt_cache_is_replaced() {
    let dir = tempfile::tempdir().unwrap();
    let cache = dir.path().join("cache.json");
    std::fs::write(&cache, "not json").unwrap();
    let out = nimgen(&["solve", "--cache", cache.to_str().unwrap(), "Z4"]);
    assert_eq!(code(&out), 0);
    let stored: Value = serde_json::from_str(&std::fs::read_to_string(&cache).unwrap()).unwrap();
    assert_eq!(stored["entries"].as_object().unwrap().len(), 1);
}

#[test]
fn outputs_are_deterministic() {
    let runs = [
        vec!["diagram", "Dih(Z6)"],
        vec!["diagram", "--simplified", "--format", "json", "Dih(Z3xZ3)"],
        vec!["verify", "Z3xZ3", "Z2xZ6"],
    ];
    for args in &runs {
        assert_eq!(stdout(&nimgen(args)), stdout(&nimgen(args)), "{args:?}");
    }
    let table = ["table", "Dih(Zn)", "--n", "2..14"];
    assert_eq!(without_millis(&stdout(&nimgen(&table))), without_millis(&stdout(&nimgen(&table))));
    let (_, a) = solve_json(&["Dih(Z2xZ4)", "Z16", "Dih(Z7)"]);
    let (_, b) = solve_json(&["Dih(Z2xZ4)", "Z16", "Dih(Z7)"]);
    assert_eq!(a, b);
}

#[test]
fn cayley_table_input() {
    let q8 = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data/q8.txt");
    let spec = format!("table:{}", q8.display());
    let (c, v) = solve_json(&["--cross-check", &spec, &format!("Z2x{spec}")]);
    assert_eq!(c, 0);
    assert_eq!((v[0]["order"].as_u64(), v[0]["dG"].as_u64()), (Some(8), Some(2)));
    // Φ(Q8) = {±1} is even with δ = 2, so the game is *0.
    assert_eq!(v[0]["nim"], 0);
    assert_eq!(v[1]["order"], 16);

    let (c, v) = solve_json(&[&format!("Dih({spec})")]);
    assert_eq!(c, 2);
    assert!(v[0]["error"].as_str().unwrap().contains("abelian"));
}
