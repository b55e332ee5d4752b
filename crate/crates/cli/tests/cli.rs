//! End-to-end tests of the `chie` binary: exit codes, deterministic output,
//! file formats and SVG well-formedness.

use std::path::Path;
use std::process::{Command, Output};

fn chie(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_chie"))
        .args(args)
        .env("CHIE_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).expect("stdout is UTF-8")
}

/// A tiny well-formedness check: every opened tag is closed in order and
/// attribute quoting balances.
fn assert_well_formed_xml(text: &str) {
    let mut stack: Vec<String> = Vec::new();
    let mut rest = text;
    while let Some(idx) = rest.find('<') {
        rest = &rest[idx + 1..];
        let end = rest.find('>').expect("tag closes");
        let tag = &rest[..end];
        rest = &rest[end + 1..];
        assert_eq!(tag.matches('"').count() % 2, 0, "balanced quotes in {tag}");
        if let Some(name) = tag.strip_prefix('/') {
            assert_eq!(stack.pop().as_deref(), Some(name), "tag nesting");
        } else if !tag.ends_with('/') && !tag.starts_with('?') && !tag.starts_with('!') {
            let name: String = tag
                .chars()
                .take_while(|c| !c.is_whitespace() && *c != '>')
                .collect();
            stack.push(name);
        }
    }
    assert!(stack.is_empty(), "unclosed tags: {stack:?}");
}

#[test]
fn targets_small_catalog() {
    let out = chie(&["targets", "--n", "1"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("f(1) = 1\n"));
    assert!(text.contains("n1-t00"));

    let out = chie(&["targets", "--n", "16"]);
    assert!(stdout(&out).starts_with("f(16) = 20\n"));
    assert_eq!(stdout(&out).lines().count(), 21);
}

#[test]
fn identical_invocations_are_byte_identical() {
    for args in [
        vec!["targets", "--n", "16"],
        vec!["coverage", "--pieces", "TANGRAM"],
        vec!["ftable", "--max", "10"],
        vec!["solve", "--pieces", "ELEVEN", "--target", "n16-t13"],
        vec!["targets", "--n", "8", "--format", "json"],
    ] {
        let a = chie(&args);
        let b = chie(&args);
        assert_eq!(a.stdout, b.stdout, "stdout differs for {args:?}");
        assert_eq!(a.status.code(), b.status.code());
    }
}

#[test]
fn solve_exit_codes() {
    let sat = chie(&["solve", "--pieces", "ELEVEN", "--target", "n16-t00"]);
    assert_eq!(sat.status.code(), Some(0));
    assert!(stdout(&sat).starts_with("SAT\n"));

    let unsat = chie(&["solve", "--pieces", "TANGRAM", "--target", "n16-t00"]);
    assert_eq!(unsat.status.code(), Some(1));
    assert_eq!(stdout(&unsat), "UNSAT\n");

    let bad_target = chie(&["solve", "--pieces", "ELEVEN", "--target", "n16-t99"]);
    assert_eq!(bad_target.status.code(), Some(2));

    let bad_pieces = chie(&["solve", "--pieces", "/nonexistent.pieces", "--target", "n16-t00"]);
    assert_eq!(bad_pieces.status.code(), Some(2));

    let usage = chie(&["solve", "--pieces", "ELEVEN"]);
    assert_eq!(usage.status.code(), Some(2));
}

#[test]
fn solve_count_and_enumerate() {
    let count = chie(&[
        "solve",
        "--pieces",
        "TANGRAM",
        "--target",
        "n16-t13",
        "--count",
    ]);
    assert_eq!(stdout(&count), "solutions 8\n");

    let orbits = chie(&[
        "solve",
        "--pieces",
        "TANGRAM",
        "--target",
        "n16-t13",
        "--count",
        "--modulo-symmetry",
    ]);
    assert_eq!(stdout(&orbits), "solutions 1\n");

    let all = chie(&["solve", "--pieces", "TANGRAM", "--target", "n16-t13", "--all"]);
    let text = stdout(&all);
    assert!(text.ends_with("solutions 8\n"));
    assert_eq!(text.matches("solution ").count(), 8);
}

#[test]
fn solve_from_files() {
    let dir = tempfile::tempdir().unwrap();
    let pieces_path = dir.path().join("two.pieces");
    std::fs::write(
        &pieces_path,
        "pieceset two\n\npiece tri x2\nT 0 0 SE\n",
    )
    .unwrap();
    let target_path = dir.path().join("square.region");
    std::fs::write(&target_path, "# unit square\nT 0 0 NE\nT 0 0 SW\n").unwrap();
    let out = chie(&[
        "solve",
        "--pieces",
        pieces_path.to_str().unwrap(),
        "--target",
        target_path.to_str().unwrap(),
        "--count",
    ]);
    assert_eq!(stdout(&out), "solutions 2\n");
}

#[test]
fn coverage_reports_and_always_exits_zero() {
    let out = chie(&["coverage", "--pieces", "SEI_SHONAGON"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert!(text.ends_with("formable 16 of 20\n"));

    let json_out = chie(&["coverage", "--pieces", "NINETEEN", "--format", "json"]);
    let doc: serde_json::Value = serde_json::from_str(&stdout(&json_out)).unwrap();
    assert_eq!(doc["formable"], 19);
    assert_eq!(doc["results"].as_array().unwrap().len(), 20);
}

#[test]
fn ftable_rows_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let out = chie(&[
        "ftable",
        "--max",
        "8",
        "--plot",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    assert_eq!(text, "1 1\n2 3\n3 2\n4 6\n5 3\n6 7\n7 5\n8 11\n");
    let svg = std::fs::read_to_string(dir.path().join("ftable.svg")).unwrap();
    assert_well_formed_xml(&svg);
}

#[test]
fn svg_outputs_are_well_formed() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().to_str().unwrap();

    let sheet = chie(&["targets", "--n", "4", "--svg", "--out", out_dir]);
    assert!(sheet.status.success());
    let svg = std::fs::read_to_string(dir.path().join("targets-n4.svg")).unwrap();
    assert_well_formed_xml(&svg);

    let solved = chie(&[
        "solve",
        "--pieces",
        "SEI_SHONAGON",
        "--target",
        "n16-t13",
        "--svg",
        "--out",
        out_dir,
    ]);
    assert!(solved.status.success());
    let svg = std::fs::read_to_string(dir.path().join("solve-n16-t13.svg")).unwrap();
    assert_well_formed_xml(&svg);
    // Pieces are drawn with palette colors only.
    assert!(svg.contains("#4e79a7"));
}

#[test]
fn search_exit_codes_and_resume_file() {
    let found = chie(&[
        "search",
        "--pieces",
        "11",
        "--triangles",
        "16",
        "--min-coverage",
        "20",
        "--max-candidates",
        "500",
    ]);
    assert_eq!(found.status.code(), Some(0));
    assert!(stdout(&found).contains("coverage 20"));

    let exhausted = chie(&[
        "search",
        "--pieces",
        "7",
        "--triangles",
        "16",
        "--min-coverage",
        "19",
        "--max-candidates",
        "100",
    ]);
    assert_eq!(exhausted.status.code(), Some(1));

    // Resume: a short leg writes a checkpoint, the second leg finishes and
    // reports the first witness.
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("search.ckpt");
    let leg1 = chie(&[
        "search",
        "--pieces",
        "7",
        "--triangles",
        "16",
        "--min-coverage",
        "19",
        "--max-candidates",
        "800",
        "--resume",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(leg1.status.code(), Some(1));
    let saved = std::fs::read_to_string(&ckpt).unwrap();
    assert!(saved.contains("cursor 800"));

    let leg2 = chie(&[
        "search",
        "--pieces",
        "7",
        "--triangles",
        "16",
        "--min-coverage",
        "19",
        "--max-candidates",
        "2000",
        "--resume",
        ckpt.to_str().unwrap(),
    ]);
    assert_eq!(leg2.status.code(), Some(0));
    assert!(stdout(&leg2).contains("candidate 1339 coverage 19"));
}

#[test]
fn json_documents_are_valid() {
    for args in [
        vec!["targets", "--n", "4", "--format", "json"],
        vec![
            "solve", "--pieces", "ELEVEN", "--target", "n16-t13", "--format", "json",
        ],
        vec!["ftable", "--max", "6", "--format", "json"],
        vec![
            "search",
            "--pieces",
            "11",
            "--triangles",
            "16",
            "--min-coverage",
            "20",
            "--max-candidates",
            "200",
            "--format",
            "json",
        ],
    ] {
        let out = chie(&args);
        let doc: serde_json::Value = serde_json::from_str(&stdout(&out))
            .unwrap_or_else(|e| panic!("bad JSON for {args:?}: {e}"));
        assert!(doc.is_object());
    }
}

#[test]
fn region_files_reject_bad_lines() {
    let dir = tempfile::tempdir().unwrap();
    let target_path = dir.path().join("bad.region");
    std::fs::write(&target_path, "T 0 0 UP\n").unwrap();
    let out = chie(&[
        "solve",
        "--pieces",
        "ELEVEN",
        "--target",
        target_path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(Path::new(&target_path).exists());
}
