use std::fs;
use std::path::Path;

use psghost::cli::{run_with, EXIT_INCONSISTENT, EXIT_INPUT, EXIT_OK};

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let code = run_with(std::iter::once("psghost").chain(args.iter().copied()), &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, body).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn psp_of_single_point() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s1.txt", "# mset q=2\n0 0 1\n");
    let (code, out, _) = run(&["psp", "--in", &input]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out, "# psp q=2\n1 0 1\n");
    let (_, json, _) = run(&["psp", "--in", &input, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["polynomial"], "Z");
}

#[test]
fn psp_empty_and_five_points() {
    let dir = tempfile::tempdir().unwrap();
    let empty = write(dir.path(), "e.txt", "# mset q=3\n");
    assert_eq!(run(&["psp", "--in", &empty]).1, "# psp q=3\n");
    let five = write(dir.path(), "f.txt", "# mset q=2\n0 1 0\n0 0 1\n0 1 1\n1 0 0\n1 1 0\n");
    let (_, json, _) = run(&["psp", "--in", &five, "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(v["polynomial"], "Y");
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.txt", "# mset q=2\n0 0 1\n0 0 0\n");
    let (code, _, err) = run(&["psp", "--in", &bad]);
    assert_eq!(code, EXIT_INPUT);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = run(&["psp", "--in", "/nonexistent/file"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn ghost_report_formats() {
    let (_, out, _) = run(&["ghost-report", "--field", "7", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!((v["rank"].as_u64(), v["exponent"].as_u64()), (Some(28), Some(29)));
    let (_, out, _) = run(&["ghost-report", "--field", "3^2", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["experimental"], true);
    let (_, text, _) = run(&["ghost-report", "--field", "3^2", "--modulus", "1,0,1"]);
    assert!(text.contains("no literature value"));
}

#[test]
fn solve_lists_fano_sets() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "z.txt", "# psp q=2\n1 0 1\n");
    let (code, out, _) = run(&["solve", "--in", &g, "--sets", "--format", "json"]);
    assert_eq!(code, EXIT_OK);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    let sets: Vec<String> = v["sets"].as_array().unwrap().iter().map(|s| s.as_str().unwrap().to_string()).collect();
    for want in [
        "# mset q=2\n0 0 1 : 1\n",
        "# mset q=2\n1 0 0 : 1\n1 0 1 : 1\n",
        "# mset q=2\n0 1 0 : 1\n1 0 0 : 1\n1 1 1 : 1\n",
    ] {
        assert!(sets.iter().any(|s| s == want), "{want} missing from {sets:?}");
    }
    assert_eq!(v["sets_exhaustive"], true);
    assert_eq!(v["exponent"], 4);
}

#[test]
fn solve_zero_lists_kernel() {
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "zero.txt", "# psp q=3\n");
    let (code, out, _) = run(&["solve", "--in", &g]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(out.matches("# ghost").count(), 7);
}

#[test]
fn unreachable_target_exits_two() {
    // 3!/(1!1!1!) is even, so XYZ never occurs in a power sum over GF(4).
    let dir = tempfile::tempdir().unwrap();
    let g = write(dir.path(), "x.txt", "# psp q=4\n1 1 1\n");
    let (code, out, _) = run(&["solve", "--in", &g]);
    assert_eq!(code, EXIT_INCONSISTENT, "{out}");
    assert!(out.contains("inconsistent"));
}

#[test]
fn verify_suites() {
    let (code, out, _) = run(&["verify", "--field", "7", "--suite", "elim"]);
    assert_eq!(code, EXIT_OK, "{out}");
    assert!(out.contains("5 steps"));
    let (code, out, _) = run(&["verify", "--field", "9", "--suite", "pencils"]);
    assert_eq!(code, EXIT_OK);
    for l in 0..=3 {
        assert!(out.contains(&format!("PASS partial pencils lambda={l}")));
    }
    let (code, out, _) = run(&["verify", "--field", "2", "--suite", "all", "--samples", "50"]);
    assert_eq!(code, EXIT_OK);
    assert!(out.contains("union gives Y"));
    let (code, _, _) = run(&["verify", "--field", "4", "--suite", "elim"]);
    assert_eq!(code, EXIT_INPUT);
}

#[test]
fn seeded_output_is_reproducible() {
    let a = run(&["verify", "--field", "5", "--suite", "vandermonde", "--seed", "11", "--format", "json"]);
    let b = run(&["verify", "--field", "5", "--suite", "vandermonde", "--seed", "11", "--format", "json"]);
    assert_eq!(a, b);
}

#[test]
fn elim_trace_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("trace.csv");
    let (code, out, _) = run(&["elim-trace", "--field", "7", "--trace", path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    let written = fs::read_to_string(&path).unwrap();
    assert_eq!(written, out);
    assert_eq!(out.matches("# step").count(), 6);
    assert!(out.contains("\"(1,1,2)^(1)\",0,0,0,0,0,1,1,1,1,3,3,3,7,7,15"));
}

#[test]
fn field_inferred_from_header_and_out_flag() {
    let dir = tempfile::tempdir().unwrap();
    let input = write(dir.path(), "s.txt", "# mset q=5\n1 2 3 : 2\n");
    let out_path = dir.path().join("g.txt");
    let (code, out, _) = run(&["psp", "--in", &input, "--out", out_path.to_str().unwrap()]);
    assert_eq!(code, EXIT_OK);
    assert!(out.is_empty());
    let g = fs::read_to_string(&out_path).unwrap();
    assert!(g.starts_with("# psp q=5\n"));
    let (code, evals, _) = run(&["eval", "--in", out_path.to_str().unwrap(), "--line", "1 0 0"]);
    assert_eq!(code, EXIT_OK);
    assert_eq!(evals.lines().count(), 1);
}
