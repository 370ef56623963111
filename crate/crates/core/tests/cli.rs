use std::path::PathBuf;
use std::process::Command;

use gl2_restrict::cli::{self, from_text, main_with};
use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gl2-restrict"))
}

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("gl2-restrict").chain(args.iter().copied());
    let code = main_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn golden(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name)
}

/// Compares against the pinned file; `UPDATE_GOLDEN=1` rewrites it.
fn assert_golden(name: &str, actual: &str) {
    let path = golden(name);
    if std::env::var_os("UPDATE_GOLDEN").is_some() {
        std::fs::write(&path, actual).unwrap();
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    assert!(want == actual, "output differs from {}", path.display());
}

#[test]
fn full_suite_at_3_2_passes_and_matches_golden() {
    let (code, out, err) = run(&["verify", "--p", "3", "--f", "2", "--checks", "all", "--r-policy", "all", "--deterministic-order"]);
    assert_eq!(code, 0, "{err}");
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["schema"], 1);
    assert_eq!(v["p"], 3);
    assert_eq!(v["f"], 2);
    assert_eq!(v["summary"]["fail"], 0);
    assert_eq!(v["summary"]["skipped"], 0);
    // 12 single checks, 8 values of r for each of E1/T1.1/T1.2/SPLIT and 80 for E5/T2.1/T2.2.
    assert_eq!(v["checks"].as_array().unwrap().len(), 12 + 4 * 8 + 3 * 80);
    assert_eq!(v["tower"]["polys"]["2"].as_array().unwrap().len(), 3);
    assert_golden("verify_3_2_all.json", &out);
}

#[test]
fn text_report_is_lossless() {
    let args = ["verify", "--p", "3", "--f", "2", "--checks", "L1,P1,MACKEY.B,T1.1", "--r", "1,4", "--deterministic-order"];
    let (_, json_out, _) = run(&args);
    let mut text_args = args.to_vec();
    text_args.extend(["--format", "text"]);
    let (code, text_out, _) = run(&text_args);
    assert_eq!(code, 0);
    let from_json: Value = serde_json::from_str(&json_out).unwrap();
    assert_eq!(from_text(&text_out).unwrap(), from_json);
    assert_golden("verify_3_2_sample.txt", &text_out);
}

#[test]
fn orbits_outputs_match_golden() {
    let (code, out, _) = run(&["orbits", "--p", "3", "--f", "2", "--space", "P1(q)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let sizes: Vec<u64> = v["orbits"].as_array().unwrap().iter().map(|o| o["size"].as_u64().unwrap()).collect();
    assert_eq!(sizes, vec![4, 6]);
    assert_eq!(v["orbits"][0]["stab"], "B_p");
    assert_eq!(v["orbits"][1]["stab"], "T_p");
    assert_golden("orbits_3_2_q.json", &out);

    let (code, out, _) = run(&["orbits", "--p", "3", "--f", "2", "--space", "P1(q2)", "--acting", "G_q"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["orbits"][0]["stab"], "B_q");
    assert_eq!(v["orbits"][1]["stab"], "T_q");
    assert_golden("orbits_3_2_q2_gq.json", &out);
}

#[test]
fn orbits_of_the_big_line_at_3_3() {
    let (code, out, _) = run(&["orbits", "--p", "3", "--f", "3", "--space", "P1(q2)"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let orbits = v["orbits"].as_array().unwrap();
    let count = |n: u64| orbits.iter().filter(|o| o["size"] == n).count();
    assert_eq!(orbits.len(), 32);
    assert_eq!((count(4), count(6), count(24)), (1, 1, 30));
    assert_eq!(v["total"], 730);
}

#[test]
fn exit_codes() {
    let (code, _, err) = run(&["verify", "--p", "2", "--f", "2"]);
    assert_eq!(code, cli::EXIT_USAGE);
    assert!(err.contains("odd prime"), "{err}");
    assert_eq!(run(&["verify", "--p", "3", "--f", "9"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["verify", "--p", "3", "--f", "2", "--checks", "Q7"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["verify", "--p", "3", "--f", "2", "--budget-hom", "0"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["verify", "--p", "3"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["orbits", "--p", "3", "--f", "2", "--space", "P2(q)"]).0, cli::EXIT_USAGE);
    assert_eq!(run(&["--help"]).0, 0);
}

#[test]
fn over_budget_checks_skip_without_failing() {
    let (code, out, _) = run(&["verify", "--p", "3", "--f", "2", "--checks", "E1", "--r", "1", "--budget-hom", "10"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    let c = &v["checks"][0];
    assert_eq!(c["status"], "PASS");
    assert!(c["details"]["iso"].as_str().unwrap().starts_with("SKIPPED"));

    let (code, out, _) = run(&["verify", "--p", "3", "--f", "2", "--checks", "L1", "--budget-enum", "10"]);
    assert_eq!(code, 0);
    let v: Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["checks"][0]["status"], "SKIPPED");
    assert_eq!(v["summary"]["skipped"], 1);
}

#[test]
fn binary_writes_report_file_and_cache() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let cache = dir.path().join("cache");
    let status = bin()
        .args(["verify", "--p", "3", "--f", "1", "--checks", "P1,SPLIT", "--jobs", "2", "--seed", "5"])
        .arg("--out")
        .arg(&out)
        .arg("--cache-dir")
        .arg(&cache)
        .status()
        .unwrap();
    assert_eq!(status.code(), Some(0));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["summary"]["fail"], 0);
    let cached = std::fs::read_to_string(cache.join("tower-p3-f1.json")).unwrap();
    let desc: Value = serde_json::from_str(&cached).unwrap();
    assert_eq!(desc, v["tower"]);

    let o = bin().args(["verify", "--p", "2", "--f", "1"]).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn parallel_and_sequential_runs_agree() {
    let base = ["verify", "--p", "3", "--f", "2", "--checks", "E5,T2.1", "--r-policy", "sample"];
    let (_, seq, _) = run(&[&base[..], &["--deterministic-order"]].concat());
    let (_, par, _) = run(&[&base[..], &["--jobs", "3"]].concat());
    let strip = |s: &str| {
        let mut v: Value = serde_json::from_str(s).unwrap();
        for c in v["checks"].as_array_mut().unwrap() {
            c["elapsed_ms"] = 0.into();
        }
        v
    };
    assert_eq!(strip(&seq), strip(&par));
}
