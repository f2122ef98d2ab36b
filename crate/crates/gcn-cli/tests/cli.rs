//! End-to-end tests of the command-line surface: exit codes, file formats,
//! and the generate -> analyze -> verify round trip.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> &'static str {
    env!("CARGO_BIN_EXE_gcn")
}

fn tmp(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join("gcn-cli-tests");
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(bin()).args(args).output().unwrap()
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap()
}

#[test]
fn generate_analyze_verify_round_trip() {
    for (family, degree, expect_m, expect_defect) in [
        ("chung-yao", "3", 5, 0),
        ("carnicer-gasca", "3", 4, 1),
        ("defect-2", "4", 4, 2),
        ("defect-3", "5", 4, 3),
        ("principal", "5", 3, 4),
    ] {
        let path = tmp(&format!("rt-{family}-{degree}.json"));
        let out = run(&[
            "generate",
            "--family",
            family,
            "--degree",
            degree,
            "--seed",
            "1",
            "--out",
            path.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{family}: {out:?}");
        let stdout = String::from_utf8(out.stdout).unwrap();
        assert!(
            stdout.contains(&format!("#M={expect_m} defect={expect_defect}")),
            "{family}: summary was {stdout}"
        );

        let report = tmp(&format!("rt-{family}-{degree}-report.json"));
        let out = run(&[
            "analyze",
            path.to_str().unwrap(),
            "--out",
            report.to_str().unwrap(),
        ]);
        assert_eq!(code(&out), 0, "{family} analyze");
        let doc: serde_json::Value =
            serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
        assert_eq!(doc["analysis"]["is_gc"], true);
        assert_eq!(
            doc["analysis"]["maximal_lines"].as_array().unwrap().len(),
            expect_m
        );

        let out = run(&["verify", path.to_str().unwrap()]);
        assert_eq!(code(&out), 0, "{family} verify: {out:?}");
    }
}

#[test]
fn generate_rejects_bad_arguments() {
    let out = run(&[
        "generate",
        "--family",
        "no-such-family",
        "--degree",
        "3",
        "--out",
        tmp("x.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);

    // defect-3 requires degree >= 4
    let out = run(&[
        "generate",
        "--family",
        "defect-3",
        "--degree",
        "3",
        "--out",
        tmp("x.json").to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 3);

    // missing required flag
    let out = run(&["generate", "--degree", "3"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn analyze_exit_codes() {
    let missing = run(&["analyze", "/nonexistent/no.json"]);
    assert_eq!(code(&missing), 2);

    let garbled = tmp("garbled.json");
    std::fs::write(&garbled, "{ not json").unwrap();
    let out = run(&["analyze", garbled.to_str().unwrap()]);
    assert_eq!(code(&out), 2);

    // a collinear degree-1 triple is loadable but not correct
    let collinear = tmp("collinear.json");
    std::fs::write(
        &collinear,
        r#"{"degree":1,"nodes":[["0","0"],["1","1"],["2","2"]]}"#,
    )
    .unwrap();
    let out = run(&["analyze", collinear.to_str().unwrap()]);
    assert_eq!(code(&out), 4);

    // a correct set without the geometric characterization analyzes fine
    // (exit 0) but reports is_gc = false and no catalog
    let not_gc = tmp("not-gc.json");
    std::fs::write(
        &not_gc,
        r#"{"degree":2,"nodes":[["0","0"],["1","0"],["0","1"],["2","3"],["5","1"],["3","7"]]}"#,
    )
    .unwrap();
    let report = tmp("not-gc-report.json");
    let out = run(&[
        "analyze",
        not_gc.to_str().unwrap(),
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["analysis"]["n_correct"], true);
    assert_eq!(doc["analysis"]["is_gc"], false);
    assert!(doc["used_lines"].is_null());
}

#[test]
fn usage_reports_and_exit_codes() {
    let path = tmp("usage-pl5.json");
    let out = run(&[
        "generate",
        "--family",
        "principal",
        "--degree",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    let report = tmp("usage-pl5-line.json");
    let out = run(&[
        "usage",
        path.to_str().unwrap(),
        "--line",
        "1,0,-1",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["class"], "proper");
    assert_eq!(doc["users"].as_array().unwrap().len(), 10);
    assert_eq!(doc["k"], 5);

    // the same line through two points
    let out = run(&[
        "usage",
        path.to_str().unwrap(),
        "--through",
        "1,0,1,4",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);

    // a line through at most one node exits 5
    let out = run(&[
        "usage",
        path.to_str().unwrap(),
        "--line",
        "7,9,-1",
        "--out",
        report.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 5);

    // selecting neither or both flags is an argument error
    let out = run(&["usage", path.to_str().unwrap()]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_detects_corruption_and_bad_ids() {
    let path = tmp("verify-cy3.json");
    run(&[
        "generate",
        "--family",
        "chung-yao",
        "--degree",
        "3",
        "--seed",
        "5",
        "--out",
        path.to_str().unwrap(),
    ]);

    let out = run(&[
        "verify",
        path.to_str().unwrap(),
        "--theorems",
        "census,maximal-trace",
    ]);
    assert_eq!(code(&out), 0);

    let out = run(&["verify", path.to_str().unwrap(), "--theorems", "thm-bogus"]);
    assert_eq!(code(&out), 3);

    // corrupt one node: verification must fail with witnesses
    let mut doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    doc["nodes"][0][0] = serde_json::Value::String("999999/1000".to_string());
    doc.as_object_mut().unwrap().remove("provenance");
    let corrupted = tmp("verify-cy3-corrupted.json");
    std::fs::write(&corrupted, serde_json::to_string(&doc).unwrap()).unwrap();
    let bundle_path = tmp("verify-cy3-corrupted-bundle.json");
    let out = run(&[
        "verify",
        corrupted.to_str().unwrap(),
        "--out",
        bundle_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 1);
    let bundle: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&bundle_path).unwrap()).unwrap();
    let reports = bundle["reports"].as_array().unwrap();
    let gc = reports
        .iter()
        .find(|r| r["theorem_id"] == "gc-property")
        .unwrap();
    assert_eq!(gc["status"], "fail");
    assert!(!gc["witnesses"].as_array().unwrap().is_empty());
}

#[test]
fn export_svg_structure() {
    let path = tmp("export-cy3.json");
    run(&[
        "generate",
        "--family",
        "chung-yao",
        "--degree",
        "3",
        "--seed",
        "7",
        "--out",
        path.to_str().unwrap(),
    ]);
    let svg_path = tmp("export-cy3.svg");
    let out = run(&[
        "export",
        path.to_str().unwrap(),
        "--svg",
        svg_path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(&svg_path).unwrap();
    assert_eq!(svg.matches("<circle").count(), 10 + 3); // 10 nodes + legend
                                                        // 5 maximal lines drawn solid, plus 3 legend strokes
    assert_eq!(svg.matches("<line").count(), 5 + 3);
    assert!(svg.starts_with("<svg xmlns"));

    let missing_dir = run(&[
        "export",
        path.to_str().unwrap(),
        "--svg",
        "/nonexistent-dir/out.svg",
    ]);
    assert_eq!(code(&missing_dir), 2);

    // a principal lattice has proper (dashed) and deeper used (dotted)
    // lines alongside the solid maximal ones
    let pl = tmp("export-pl5.json");
    run(&[
        "generate",
        "--family",
        "principal",
        "--degree",
        "5",
        "--out",
        pl.to_str().unwrap(),
    ]);
    let pl_svg = tmp("export-pl5.svg");
    let out = run(&[
        "export",
        pl.to_str().unwrap(),
        "--svg",
        pl_svg.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let svg = std::fs::read_to_string(&pl_svg).unwrap();
    assert_eq!(svg.matches("<circle").count(), 21 + 3);
    // the drawing has 3 maximal, 3 proper, and 9 deeper used lines; the
    // legend repeats the dashed and dotted styles once each
    assert_eq!(svg.matches("stroke-dasharray=\"none\"").count(), 3);
    assert_eq!(svg.matches("stroke-dasharray=\"9,5\"").count(), 3 + 1);
    assert_eq!(svg.matches("stroke-dasharray=\"2,4\"").count(), 9 + 1);
}

#[test]
fn principal_transform_flag() {
    let path = tmp("pl3-shear.json");
    let out = run(&[
        "generate",
        "--family",
        "principal",
        "--degree",
        "3",
        "--transform",
        "1,1,0,1,0,0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("#M=3 defect=2"));

    let singular = run(&[
        "generate",
        "--family",
        "principal",
        "--degree",
        "3",
        "--transform",
        "1,1,1,1,0,0",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&singular), 2);
}
