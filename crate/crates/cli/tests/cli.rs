use std::path::Path;
use std::process::{Command, Output};

use multiplier_crit::io::{read_document, write_document};

fn multcrit(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_multcrit")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn search_to(dir: &Path, n: &str, extra: &[&str]) -> (Output, std::path::PathBuf) {
    let path = dir.join(format!("p{n}.json"));
    let mut args = vec!["search", n, "--out", path.to_str().unwrap()];
    args.extend_from_slice(extra);
    (multcrit(&args), path)
}

#[test]
fn bound_table() {
    let o = multcrit(&["bound", "3", "10"]);
    assert_eq!(code(&o), 0);
    let bounds: Vec<String> =
        stdout(&o).lines().skip(1).map(|l| l.split_whitespace().last().unwrap().to_string()).collect();
    assert_eq!(bounds, ["2", "6", "20", "38", "102", "198", "436", "868"]);
}

#[test]
fn bad_range_is_usage_error() {
    assert_eq!(code(&multcrit(&["bound", "5", "3"])), 1);
    assert_eq!(code(&multcrit(&["bound", "0", "3"])), 1);
    assert_eq!(code(&multcrit(&["bound", "1", "31"])), 1);
    assert_eq!(code(&multcrit(&["bound"])), 1);
    assert_eq!(code(&multcrit(&["search", "2", "--out", "/dev/null"])), 1);
}

#[test]
fn search_period_three() {
    let dir = tempfile::tempdir().unwrap();
    let (o, path) = search_to(dir.path(), "3", &["--seed", "1"]);
    assert_eq!(code(&o), 0, "{}", String::from_utf8_lossy(&o.stderr));
    let doc = read_document(&path).unwrap();
    assert_eq!(doc.records.len(), 2);
    assert!(doc.complete);
    assert_eq!(doc.seed, 1);
    assert!(stdout(&o).contains("n=3"));
}

#[test]
fn search_period_six_has_center() {
    let dir = tempfile::tempdir().unwrap();
    let (o, path) = search_to(dir.path(), "6", &[]);
    assert_eq!(code(&o), 0);
    let doc = read_document(&path).unwrap();
    assert_eq!(doc.records.len(), 38);
    assert_eq!(doc.records.iter().filter(|r| r.c.norm() < 1e-9).count(), 1);

    let svg = dir.path().join("p6.svg");
    let o = multcrit(&["plot", path.to_str().unwrap(), "--out", svg.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    let inside = text.matches("class=\"inside\"").count();
    let outside = text.matches("class=\"outside\"").count();
    assert_eq!(inside + outside, 38);
    assert_eq!(inside, doc.records.iter().filter(|r| r.inside_mandelbrot).count());
    assert_eq!(inside, 4);

    let again = dir.path().join("again.svg");
    multcrit(&["plot", path.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(std::fs::read(&svg).unwrap(), std::fs::read(&again).unwrap());

    let o = multcrit(&["stats", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert!(stdout(&o).contains("n=6"));
}

#[test]
fn small_budget_is_incomplete() {
    let dir = tempfile::tempdir().unwrap();
    let (o, path) = search_to(dir.path(), "9", &["--budget", "2"]);
    assert_eq!(code(&o), 2);
    let doc = read_document(&path).unwrap();
    assert!(!doc.complete);
    assert!(doc.records.len() <= 436);
}

#[test]
fn merge_resumes_search() {
    let dir = tempfile::tempdir().unwrap();
    let (o, first) = search_to(dir.path(), "5", &["--budget", "1"]);
    let partial = read_document(&first).unwrap();
    assert_eq!(code(&o), if partial.complete { 0 } else { 2 });
    let out = dir.path().join("merged.json");
    let o =
        multcrit(&["search", "5", "--seed", "9", "--merge", first.to_str().unwrap(), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let merged = read_document(&out).unwrap();
    assert_eq!(merged.records.len(), 20);
    for r in &partial.records {
        assert!(merged.records.iter().any(|q| (q.c - r.c).norm() < 1e-9));
    }
}

#[test]
fn csv_export() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("p4.csv");
    let o = multcrit(&["search", "4", "--format", "csv", "--out", path.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "period,c_re,c_im,z_re,z_im,zp_re,zp_im,lambda_re,lambda_im,lambda_abs,residual,inside_mandelbrot"
    );
    assert_eq!(lines.count(), 6);
    assert!(!text.contains('\r'));
}

#[test]
fn verify_detects_tampering() {
    let dir = tempfile::tempdir().unwrap();
    let (_, path) = search_to(dir.path(), "4", &[]);
    let p = path.to_str().unwrap();
    let o = multcrit(&["verify", p]);
    assert_eq!(code(&o), 0, "{}", stdout(&o));
    assert!(stdout(&o).trim_end().ends_with("PASS"));

    let doc = read_document(&path).unwrap();
    let mut moved = doc.clone();
    moved.records[0].z.re += 1e-3;
    let bad = dir.path().join("moved.json");
    write_document(&bad, &moved).unwrap();
    let o = multcrit(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).trim_end().ends_with("FAIL"));

    let mut dropped = doc.clone();
    let victim = dropped.records.iter().position(|r| !r.is_real).unwrap();
    dropped.records.remove(victim);
    let bad = dir.path().join("dropped.json");
    write_document(&bad, &dropped).unwrap();
    let o = multcrit(&["verify", bad.to_str().unwrap()]);
    assert_eq!(code(&o), 3);
    assert!(stdout(&o).contains("closure"));
}

#[test]
fn malformed_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("broken.json");
    std::fs::write(&path, "{\n  \"schema_version\": \"1\",\n  \"period\": \"three\"\n}\n").unwrap();
    let o = multcrit(&["verify", path.to_str().unwrap()]);
    assert_eq!(code(&o), 1);
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("period") && err.contains("line 3"), "{err}");
}

#[test]
fn czero_table() {
    let o = multcrit(&["czero", "30"]);
    assert_eq!(code(&o), 0);
    let text = stdout(&o);
    let rows: Vec<&str> = text.lines().skip(1).collect();
    let periods: Vec<&str> = rows.iter().map(|l| l.split_whitespace().next().unwrap()).collect();
    assert_eq!(periods, ["6", "12", "18", "20", "21", "24", "30"]);
    assert!(rows[0].ends_with("1/9"));
    assert!(rows[3].split_whitespace().any(|a| a == "1/25"));
    assert_eq!(code(&multcrit(&["czero", "31"])), 1);
}

#[test]
fn plot_edge_cases() {
    let dir = tempfile::tempdir().unwrap();
    let (_, path) = search_to(dir.path(), "3", &[]);
    let svg = dir.path().join("p3.svg");
    assert_eq!(code(&multcrit(&["plot", path.to_str().unwrap(), "--out", svg.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&svg).unwrap();
    assert_eq!(text.matches("class=\"outside\"").count(), 2);

    let mut empty = read_document(&path).unwrap();
    empty.records.clear();
    let ep = dir.path().join("empty.json");
    write_document(&ep, &empty).unwrap();
    let esvg = dir.path().join("empty.svg");
    assert_eq!(code(&multcrit(&["plot", ep.to_str().unwrap(), "--out", esvg.to_str().unwrap()])), 0);
    let text = std::fs::read_to_string(&esvg).unwrap();
    assert!(text.contains("<rect"));
    assert!(!text.contains("class=\"inside\"") && !text.contains("class=\"outside\""));
}

#[test]
fn unwritable_output() {
    let o = multcrit(&["search", "3", "--out", "/nonexistent/dir/p3.json"]);
    assert_eq!(code(&o), 1);
    assert!(!o.stderr.is_empty());
}
