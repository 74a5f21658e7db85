//! End-to-end checks of the installed binary: output text, document
//! digests, CSV shapes, and the exit-code contract.

use std::process::{Command, Output};

use biuniv::report::verify_document;

fn biuniv(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_biuniv"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout_of(output: &Output) -> String {
    String::from_utf8(output.stdout.clone()).unwrap()
}

fn stderr_of(output: &Output) -> String {
    String::from_utf8(output.stderr.clone()).unwrap()
}

#[test]
fn cheby_prints_exact_low_degree_values() {
    let out = biuniv(&["cheby", "--kind", "U", "--n", "3", "--t", "0.6"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "-0.672\n");

    let out = biuniv(&["cheby", "--kind", "T", "--n", "5", "--t", "0.3"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "0.99888\n");
}

#[test]
fn invert_prints_the_inverse_tail() {
    let out = biuniv(&["invert", "--coeffs", "0.1,0.05,0.01", "--order", "4"]);
    assert!(out.status.success());
    assert_eq!(stdout_of(&out), "-0.1, -0.03, 0.01\n");
}

#[test]
fn exit_codes_follow_the_contract() {
    // 0: success, including help and version.
    assert_eq!(biuniv(&["--help"]).status.code(), Some(0));
    assert_eq!(biuniv(&["--version"]).status.code(), Some(0));

    // 1: usage errors.
    assert_eq!(biuniv(&[]).status.code(), Some(1));
    assert_eq!(biuniv(&["cheby", "--kind", "W", "--n", "1", "--t", "0"]).status.code(), Some(1));
    assert_eq!(biuniv(&["bounds", "--delta", "1"]).status.code(), Some(1));

    // 2: domain errors, reported on stderr.
    let out = biuniv(&["cheby", "--kind", "U", "--n", "3", "--t", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).starts_with("error: domain"));
    assert_eq!(biuniv(&["bounds", "--delta", "0.5", "--t", "0.75", "--m", "0"]).status.code(), Some(2));
    assert_eq!(biuniv(&["invert", "--coeffs", "0.1", "--order", "1"]).status.code(), Some(2));
}

#[test]
fn point_queries_refuse_the_degenerate_point() {
    // The derived sigma denominator vanishes at delta = 2, t = 0.75, m = 0.
    // A point query has nothing to report there, so it fails loudly; grid
    // commands instead record the point with empty derived fields.
    let out = biuniv(&["bounds", "--delta", "2", "--t", "0.75", "--m", "0", "--r", "1"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stderr_of(&out).contains("degenerate denominator"));

    // The printed family stays defined at the same point.
    let out = biuniv(&["bounds", "--delta", "2", "--t", "0.75", "--m", "0", "--r", "1",
                       "--formula", "printed"]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn bounds_documents_verify_and_csv_has_the_expected_header() {
    let out = biuniv(&["bounds", "--delta", "1", "--t", "0.75", "--m", "0", "--r", "-1,0:2:0.5"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(verify_document(&text, None), Ok(true));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    assert_eq!(
        doc.pointer("/manifest/grid").unwrap().as_str().unwrap(),
        "delta=1;t=0.75;m=0;r=-1,0,0.5,1,1.5,2"
    );
    let records = doc["records"].as_array().unwrap();
    assert_eq!(records.len(), 6);
    assert_eq!(records[0]["derived_a2"], 0.75);

    let out = biuniv(&["bounds", "--delta", "1", "--t", "0.75", "--m", "0", "--r", "0",
                       "--format", "csv"]);
    assert!(out.status.success());
    let csv = stdout_of(&out);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "delta,t,m,r,printed_a2,printed_a3,derived_a2,derived_a3,\
sigma_printed,sigma_derived,fs_printed,fs_derived,fs_case"
    );
    assert_eq!(csv.lines().count(), 2);
}

#[test]
fn audit_stdout_document_verifies() {
    let out = biuniv(&["audit", "--delta", "1,2", "--t", "0.6,0.75", "--m", "0", "--r", "0,1"]);
    assert!(out.status.success());
    let text = stdout_of(&out);
    assert_eq!(verify_document(&text, None), Ok(true));
    let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
    // No empirical pass was requested: no seed, no empirical columns.
    assert!(doc.pointer("/manifest/seed").unwrap().is_null());
    let first = &doc.pointer("/records/records").unwrap().as_array().unwrap()[0];
    assert!(first["empirical_a2"].is_null());
    assert!(first["fs"][0]["empirical_max"].is_null());
}

#[test]
fn audit_files_verify_against_their_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("audit");
    let out = biuniv(&["audit", "--delta", "1", "--t", "0.75", "--m", "0,1", "--r", "0,1",
                       "--samples", "800", "--refine-steps", "40", "--seed", "42",
                       "--out", stem.to_str().unwrap()]);
    assert!(out.status.success());
    let json = std::fs::read_to_string(stem.with_extension("json")).unwrap();
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(verify_document(&json, Some(&csv)), Ok(true));
    // Tampering with either side must show.
    assert_eq!(verify_document(&json, Some("delta,t\n")), Ok(false));

    let header = csv.lines().next().unwrap();
    assert!(header.starts_with("delta,t,m,printed_a2,derived_a2,ratio_a2"));
    assert!(header.ends_with("fs_empirical_max,fs_printed_violated,fs_derived_violated"));
    // Two points, two r values each.
    assert_eq!(csv.lines().count(), 1 + 4);

    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(doc.pointer("/manifest/seed").unwrap(), 42);
    let records = doc.pointer("/records/records").unwrap().as_array().unwrap();
    let reference = &records[0];
    assert!(reference["empirical_a2"].as_f64().unwrap() > 0.7);
    assert_eq!(reference["printed_a2_violated"], true);
    assert_eq!(reference["derived_a2_violated"], false);
}

#[test]
fn sweep_reports_the_degenerate_point_with_an_unbounded_margin() {
    let dir = tempfile::tempdir().unwrap();
    let stem = dir.path().join("sweep");
    let out = biuniv(&["sweep", "--delta", "2", "--t", "0.75", "--m", "0", "--r", "0",
                       "--samples", "300", "--refine-steps", "10", "--seed", "3",
                       "--mode", "paper", "--out", stem.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "an absent bound cannot be violated");
    assert!(stdout_of(&out).contains("derived-bound violations: 0 of 3 runs"));

    let json = std::fs::read_to_string(stem.with_extension("json")).unwrap();
    let csv = std::fs::read_to_string(stem.with_extension("csv")).unwrap();
    assert_eq!(verify_document(&json, Some(&csv)), Ok(true));

    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    let runs = doc["records"].as_array().unwrap();
    assert_eq!(runs.len(), 3);
    let fs_run = runs
        .iter()
        .find(|run| run["functional"].as_str().unwrap().starts_with("fs"))
        .unwrap();
    // The derived family is undefined here: JSON reports null, CSV inf.
    assert!(fs_run["bound_derived"].is_null());
    assert!(fs_run["margin_derived"].is_null());
    assert_eq!(fs_run["violation_derived"], false);
    assert!(fs_run["empirical_max"].as_f64().unwrap() > 0.0);
    let header = csv.lines().next().unwrap();
    assert_eq!(
        header,
        "delta,t,m,mode,functional,r,empirical_max,bound_printed,bound_derived,\
margin_derived,violation_printed,violation_derived,feasible_samples,no_feasible_sample"
    );
    let fs_row = csv.lines().find(|l| l.contains(",fs,")).unwrap();
    assert!(fs_row.contains(",inf,"));
}

#[test]
fn verify_exits_clean_on_the_reference_point() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let out = biuniv(&["verify", "--samples", "2000", "--refine-steps", "40",
                       "--seed", "42", "--out", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let json = std::fs::read_to_string(&path).unwrap();
    assert_eq!(verify_document(&json, None), Ok(true));
    let doc: serde_json::Value = serde_json::from_str(&json).unwrap();
    assert_eq!(
        doc.pointer("/manifest/grid").unwrap().as_str().unwrap(),
        "delta=1;t=0.75;m=0;r=-1,0,0.5,1,2"
    );
    // Both admissibility modes ran over the five r values plus the two
    // coefficient functionals.
    assert_eq!(doc["records"]["extremal"].as_array().unwrap().len(), 2 * 7);
}
