//! Run manifests, digest-checked JSON documents, and CSV rendering.
//!
//! A document is `{ "manifest": ..., "records": ... }`. The manifest stores
//! a SHA-256 digest of the records in canonical form (compact JSON with
//! sorted keys, the form a `serde_json::Value` round trip produces), so
//! [`verify_document`] can re-derive it from the document text alone.
//! That round trip needs serde_json's `float_roundtrip` feature: the
//! default parser recovers floats only to within an ulp, which is enough
//! to shift the canonical form and break the digest.
//! Timestamps live only in the manifest; rerunning a seeded command must
//! reproduce every byte outside that field.
//!
//! CSV views carry the scalar columns of their JSON counterparts in the
//! same order. The extremal CSV drops the argmax pair, which only the JSON
//! document keeps.

use serde::Serialize;

use crate::bounds::{AuditReport, BoundSet};
use crate::error::{Error, Result};
use crate::search::ExtremalReport;

#[derive(Clone, Debug, Serialize)]
pub struct RunManifest {
    pub command: String,
    pub version: String,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub timestamp: String,
    pub digest: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub csv_digest: Option<String>,
}

pub fn sha256_hex(data: &[u8]) -> String {
    use sha2::{Digest, Sha256};
    let mut hasher = Sha256::new();
    hasher.update(data);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

fn canonical_digest(records: &serde_json::Value) -> String {
    sha256_hex(records.to_string().as_bytes())
}

/// Stamps a manifest for `records`, hashing their canonical serialization.
/// Pass the CSV text when the run also writes one, so the manifest pins it.
pub fn build_manifest(
    command: String,
    seed: Option<u64>,
    grid: Option<String>,
    records: &impl Serialize,
    csv: Option<&str>,
) -> RunManifest {
    let value = serde_json::to_value(records).expect("records serialize to a value");
    RunManifest {
        command,
        version: env!("CARGO_PKG_VERSION").to_string(),
        seed,
        grid,
        timestamp: chrono::Utc::now().to_rfc3339(),
        digest: canonical_digest(&value),
        csv_digest: csv.map(|text| sha256_hex(text.as_bytes())),
    }
}

#[derive(Serialize)]
struct Document<'a, T> {
    manifest: &'a RunManifest,
    records: &'a T,
}

/// Pretty-printed document text, newline terminated.
pub fn render_document<T: Serialize>(manifest: &RunManifest, records: &T) -> String {
    let doc = Document { manifest, records };
    let mut text = serde_json::to_string_pretty(&doc).expect("document serializes");
    text.push('\n');
    text
}

/// Re-derives the digests of a rendered document. Returns true when the
/// records match their manifest digest and, if both sides are present, the
/// CSV bytes match `csv_digest`. A CSV argument without a stored digest is
/// an error, not a silent pass.
pub fn verify_document(text: &str, csv: Option<&str>) -> Result<bool> {
    let doc: serde_json::Value = serde_json::from_str(text)
        .map_err(|e| Error::Domain(format!("document does not parse: {e}")))?;
    let stored = doc
        .pointer("/manifest/digest")
        .and_then(|d| d.as_str())
        .ok_or_else(|| Error::Domain("document carries no manifest digest".into()))?;
    let records = doc
        .get("records")
        .ok_or_else(|| Error::Domain("document carries no records".into()))?;
    if canonical_digest(records) != stored {
        return Ok(false);
    }
    if let Some(csv) = csv {
        let Some(stored_csv) = doc.pointer("/manifest/csv_digest").and_then(|d| d.as_str())
        else {
            return Err(Error::Domain(
                "document carries no csv digest to check against".into(),
            ));
        };
        return Ok(sha256_hex(csv.as_bytes()) == stored_csv);
    }
    Ok(true)
}

fn num(x: f64) -> String {
    format!("{x}")
}

fn opt_num(x: Option<f64>) -> String {
    x.map(num).unwrap_or_default()
}

fn opt_bool(x: Option<bool>) -> String {
    x.map(|b| b.to_string()).unwrap_or_default()
}

fn finish(writer: csv::Writer<Vec<u8>>) -> String {
    String::from_utf8(writer.into_inner().expect("csv buffer")).expect("csv is utf-8")
}

pub fn bounds_csv(sets: &[BoundSet]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "delta",
        "t",
        "m",
        "r",
        "printed_a2",
        "printed_a3",
        "derived_a2",
        "derived_a3",
        "sigma_printed",
        "sigma_derived",
        "fs_printed",
        "fs_derived",
        "fs_case",
    ])
    .expect("csv header");
    for s in sets {
        w.write_record([
            num(s.delta),
            num(s.t),
            s.m.to_string(),
            opt_num(s.r),
            opt_num(s.printed_a2),
            opt_num(s.printed_a3),
            opt_num(s.derived_a2),
            opt_num(s.derived_a3),
            opt_num(s.sigma_printed),
            opt_num(s.sigma_derived),
            opt_num(s.fs_printed),
            opt_num(s.fs_derived),
            s.fs_case.map(|c| c.as_str().to_string()).unwrap_or_default(),
        ])
        .expect("csv row");
    }
    finish(w)
}

pub fn extremal_csv(runs: &[ExtremalReport]) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "delta",
        "t",
        "m",
        "mode",
        "functional",
        "r",
        "empirical_max",
        "bound_printed",
        "bound_derived",
        "margin_derived",
        "violation_printed",
        "violation_derived",
        "feasible_samples",
        "no_feasible_sample",
    ])
    .expect("csv header");
    for run in runs {
        w.write_record([
            num(run.delta),
            num(run.t),
            run.m.to_string(),
            run.mode.as_str().to_string(),
            run.functional.clone(),
            opt_num(run.r),
            num(run.empirical_max),
            num(run.bound_printed),
            num(run.bound_derived),
            num(run.margin_derived),
            run.violation_printed.to_string(),
            run.violation_derived.to_string(),
            run.feasible_samples.to_string(),
            run.no_feasible_sample.to_string(),
        ])
        .expect("csv row");
    }
    finish(w)
}

/// One row per (point, r); points audited without any r still get one row
/// with the Fekete-Szego columns left empty.
pub fn audit_csv(report: &AuditReport) -> String {
    let mut w = csv::Writer::from_writer(vec![]);
    w.write_record([
        "delta",
        "t",
        "m",
        "printed_a2",
        "derived_a2",
        "ratio_a2",
        "printed_a2_below_derived",
        "empirical_a2",
        "printed_a2_violated",
        "derived_a2_violated",
        "printed_a3",
        "derived_a3",
        "ratio_a3",
        "printed_a3_below_derived",
        "empirical_a3",
        "printed_a3_violated",
        "derived_a3_violated",
        "r",
        "sigma_printed",
        "sigma_derived",
        "fs_printed",
        "fs_printed_literal",
        "fs_derived",
        "fs_case_printed",
        "fs_case_derived",
        "fs_ratio",
        "fs_printed_below_derived",
        "fs_empirical_max",
        "fs_printed_violated",
        "fs_derived_violated",
    ])
    .expect("csv header");
    for rec in &report.records {
        let prefix = vec![
            num(rec.delta),
            num(rec.t),
            rec.m.to_string(),
            num(rec.printed_a2),
            num(rec.derived_a2),
            num(rec.ratio_a2),
            rec.printed_a2_below_derived.to_string(),
            opt_num(rec.empirical_a2),
            opt_bool(rec.printed_a2_violated),
            opt_bool(rec.derived_a2_violated),
            num(rec.printed_a3),
            num(rec.derived_a3),
            num(rec.ratio_a3),
            rec.printed_a3_below_derived.to_string(),
            opt_num(rec.empirical_a3),
            opt_bool(rec.printed_a3_violated),
            opt_bool(rec.derived_a3_violated),
        ];
        if rec.fs.is_empty() {
            let mut row = prefix.clone();
            row.extend(std::iter::repeat(String::new()).take(13));
            w.write_record(&row).expect("csv row");
            continue;
        }
        for entry in &rec.fs {
            let mut row = prefix.clone();
            row.extend([
                num(entry.r),
                num(entry.sigma_printed),
                opt_num(entry.sigma_derived),
                num(entry.fs_printed),
                num(entry.fs_printed_literal),
                opt_num(entry.fs_derived),
                entry.fs_case_printed.as_str().to_string(),
                entry
                    .fs_case_derived
                    .map(|case| case.as_str().to_string())
                    .unwrap_or_default(),
                opt_num(entry.ratio),
                opt_bool(entry.printed_below_derived),
                opt_num(entry.empirical_max),
                opt_bool(entry.printed_violated),
                opt_bool(entry.derived_violated),
            ]);
            w.write_record(&row).expect("csv row");
        }
    }
    finish(w)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bounds::{audit, bound_set, FormulaSelect, FsReading};
    use crate::class_gsigma::ClassParams;

    fn sample_sets() -> Vec<BoundSet> {
        let p = ClassParams::new(1.0, 0.75, 0).unwrap();
        vec![
            bound_set(&p, Some(0.0), FsReading::Continuous, FormulaSelect::Both).unwrap(),
            bound_set(&p, None, FsReading::Continuous, FormulaSelect::Derived).unwrap(),
        ]
    }

    #[test]
    fn documents_verify_and_tampering_shows() {
        let sets = sample_sets();
        let manifest = build_manifest("biuniv bounds".into(), Some(42), None, &sets, None);
        let text = render_document(&manifest, &sets);
        assert!(verify_document(&text, None).unwrap());
        assert!(text.ends_with('\n'));

        let tampered = text.replacen("0.75", "0.76", 1);
        assert!(!verify_document(&tampered, None).unwrap());
    }

    #[test]
    fn csv_digest_is_pinned_when_present() {
        let sets = sample_sets();
        let csv = bounds_csv(&sets);
        let manifest = build_manifest("biuniv bounds".into(), None, None, &sets, Some(&csv));
        let text = render_document(&manifest, &sets);
        assert!(verify_document(&text, Some(&csv)).unwrap());
        assert!(!verify_document(&text, Some("delta,t\n")).unwrap());

        let without = build_manifest("biuniv bounds".into(), None, None, &sets, None);
        let text = render_document(&without, &sets);
        assert!(verify_document(&text, Some(&csv)).is_err());
    }

    #[test]
    fn garbage_documents_are_rejected() {
        assert!(verify_document("not json", None).is_err());
        assert!(verify_document("{\"records\": []}", None).is_err());
    }

    #[test]
    fn bounds_csv_shape() {
        let sets = sample_sets();
        let csv = bounds_csv(&sets);
        let mut lines = csv.lines();
        let header = lines.next().unwrap();
        assert!(header.starts_with("delta,t,m,r,printed_a2"));
        assert!(header.ends_with("fs_case"));
        // First record carries both families and r = 0.
        let row = lines.next().unwrap();
        assert!(row.starts_with("1,0.75,0,0,"));
        assert!(row.ends_with("large-sigma"));
        // Second record has no r: sigma, fs, and case columns stay empty.
        let row = lines.next().unwrap();
        assert!(row.ends_with(",,,,"));
        assert_eq!(lines.next(), None);
    }

    #[test]
    fn audit_csv_repeats_the_point_prefix_per_r() {
        let points = [
            ClassParams::new(1.0, 0.75, 0).unwrap(),
            ClassParams::new(2.0, 0.6, 1).unwrap(),
        ];
        let report = audit(&points, &[0.0, 1.0]).unwrap();
        let csv = audit_csv(&report);
        assert_eq!(csv.lines().count(), 1 + 4);
        let no_r = audit(&points, &[]).unwrap();
        let csv = audit_csv(&no_r);
        assert_eq!(csv.lines().count(), 1 + 2);
        let row = csv.lines().nth(1).unwrap();
        assert!(row.ends_with(",,,,,,,,,,,,,"));
    }

    #[test]
    fn manifest_round_trips_the_command_line() {
        let sets = sample_sets();
        let manifest = build_manifest(
            "biuniv bounds --delta 1 --t 0.75 --m 0".into(),
            None,
            Some("delta=1;t=0.75;m=0".into()),
            &sets,
            None,
        );
        let text = render_document(&manifest, &sets);
        let doc: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(
            doc.pointer("/manifest/command").unwrap().as_str().unwrap(),
            "biuniv bounds --delta 1 --t 0.75 --m 0"
        );
        assert_eq!(
            doc.pointer("/manifest/grid").unwrap().as_str().unwrap(),
            "delta=1;t=0.75;m=0"
        );
        assert!(doc.pointer("/manifest/csv_digest").is_none());
    }
}
