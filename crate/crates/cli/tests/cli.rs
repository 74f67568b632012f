//! End-to-end tests against the compiled binary: exit codes, output
//! formats, and seed determinism.

use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture() -> &'static str {
    concat!(
        env!("CARGO_MANIFEST_DIR"),
        "/../core/tests/fixtures/example.txt"
    )
}

fn secs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_secs"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

#[test]
fn stats_reports_table_one_counts() {
    let out = secs(&["stats", "--input", fixture()]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("vertices        7"));
    assert!(text.contains("temporal edges  27"));
    assert!(text.contains("timestamps      5"));
}

#[test]
fn stats_jsonl_is_valid_json() {
    let out = secs(&["stats", "--input", fixture(), "--format", "jsonl"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["vertices"], 7);
    assert_eq!(v["temporal_edges"], 27);
    assert_eq!(v["static_edges"], 11);
}

#[test]
fn query_tdgp_meets_feasible_engagement() {
    let out = secs(&[
        "query", "--input", fixture(), "--query", "0", "--k", "2", "--algo", "tdgp",
        "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    assert_eq!(v["found"], true);
    assert!(v["engagement"].as_f64().unwrap() >= 1.0 / 3.0 - 1e-12);
    let members: Vec<u64> = v["vertices"]
        .as_array()
        .unwrap()
        .iter()
        .map(|x| x.as_u64().unwrap())
        .collect();
    assert!(members.contains(&0));
}

#[test]
fn infeasible_k_exits_two() {
    let out = secs(&[
        "query", "--input", fixture(), "--query", "0", "--k", "999",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("no community"));
}

#[test]
fn unknown_vertex_exits_one() {
    let out = secs(&["query", "--input", fixture(), "--query", "12345"]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("unknown vertex id 12345"));
}

#[test]
fn missing_file_exits_one() {
    let out = secs(&["query", "--input", "/nonexistent/g.txt", "--query", "0"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn malformed_input_exits_one_with_line() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.txt");
    std::fs::write(&path, "0 1 0\nnot an edge\n").unwrap();
    let out = secs(&["stats", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 2"), "stderr was: {err}");
}

#[test]
fn query_repeats_identically_modulo_elapsed() {
    let args = [
        "query", "--input", fixture(), "--query", "0", "--k", "2", "--algo", "buls*",
        "--format", "jsonl",
    ];
    let mut records = Vec::new();
    for _ in 0..2 {
        let out = secs(&args);
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        v["elapsed_us"] = 0.into();
        records.push(v.to_string());
    }
    assert_eq!(records[0], records[1]);
}

#[test]
fn exact_algorithm_dominates_heuristic() {
    let run = |algo: &str| -> f64 {
        let out = secs(&[
            "query", "--input", fixture(), "--query", "0", "--k", "2", "--algo", algo,
            "--format", "jsonl",
        ]);
        assert!(out.status.success());
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        v["engagement"].as_f64().unwrap()
    };
    assert!(run("exact") >= run("buls+") - 1e-12);
}

#[test]
fn guard_variants_both_produce_valid_output() {
    for guard in ["revalidate", "halt"] {
        let out = secs(&[
            "query", "--input", fixture(), "--query", "0", "--k", "2", "--algo", "buls",
            "--guard", guard, "--format", "jsonl",
        ]);
        assert!(out.status.success(), "guard {guard} failed");
        let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        assert_eq!(v["found"], true);
    }
}

#[test]
fn bench_emits_detail_and_summary_rows() {
    let out = secs(&[
        "bench", "--input", fixture(), "--queries", "5", "--seed", "7",
        "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    // 5 queries x 4 algorithms + 4 summary rows
    assert_eq!(lines.len(), 24);
    for line in &lines {
        let _: serde_json::Value = serde_json::from_str(line).expect("valid json per line");
    }
}

#[test]
fn bench_is_deterministic_under_seed() {
    let run = || {
        let out = secs(&[
            "bench", "--input", fixture(), "--queries", "4", "--seed", "11",
            "--vns", "0.9", "--format", "jsonl",
        ]);
        assert!(out.status.success());
        stdout(&out)
            .lines()
            .map(|line| {
                let mut v: serde_json::Value = serde_json::from_str(line).unwrap();
                v["elapsed_us"] = 0.into();
                v["mean_elapsed_us"] = 0.into();
                v.to_string()
            })
            .collect::<Vec<_>>()
    };
    assert_eq!(run(), run());
}

#[test]
fn bench_with_oracle_reports_dominance() {
    let out = secs(&[
        "bench", "--input", fixture(), "--queries", "3", "--oracle", "--algo", "buls*",
        "--algo", "exact", "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    let mut saw_dominance = false;
    for line in text.lines() {
        let v: serde_json::Value = serde_json::from_str(line).unwrap();
        if v["algorithm"] == "buls*" && v["dominance_ok"].is_boolean() {
            assert_eq!(v["dominance_ok"], true);
            saw_dominance = true;
        }
    }
    assert!(saw_dominance);
}

#[test]
fn bench_records_file_matches_stdout_rows() {
    let dir = tempfile::tempdir().unwrap();
    let records: PathBuf = dir.path().join("records.jsonl");
    let out = secs(&[
        "bench", "--input", fixture(), "--queries", "3",
        "--records", records.to_str().unwrap(), "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let file_lines = std::fs::read_to_string(&records).unwrap();
    // the records file carries exactly the per-query rows
    assert_eq!(file_lines.lines().count(), 3 * 4);
    for line in file_lines.lines() {
        assert!(stdout(&out).contains(line));
    }
}

#[test]
fn oracle_check_passes_on_fixture() {
    let out = secs(&[
        "oracle-check", "--input", fixture(), "--trials", "200", "--seed", "3",
        "--query", "0",
    ]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("PASS (200 trials)"));
    assert!(text.contains("exact optimum for 0"));
}

#[test]
fn stats_on_filtered_out_input_exits_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("empty.txt");
    std::fs::write(&path, "# only comments\n5 5 7\n").unwrap();
    let out = secs(&["stats", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("no edges"), "stderr was: {err}");
}

#[test]
fn time_scale_rebuckets_timestamps() {
    let out = secs(&[
        "stats", "--input", fixture(), "--time-scale", "2", "--format", "jsonl",
    ]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
    // buckets {0,1,2} from timestamps 0..4 at width 2
    assert_eq!(v["timestamps"], 3);
}

#[test]
fn threads_flag_does_not_change_results() {
    let run = |threads: &str| {
        let out = secs(&[
            "query", "--input", fixture(), "--query", "3", "--k", "2", "--algo", "buls+",
            "--threads", threads, "--format", "jsonl",
        ]);
        assert!(out.status.success());
        let mut v: serde_json::Value = serde_json::from_str(stdout(&out).trim()).unwrap();
        v["elapsed_us"] = 0.into();
        v.to_string()
    };
    assert_eq!(run("1"), run("2"));
}
