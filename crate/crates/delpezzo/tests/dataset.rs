// SPDX-License-Identifier: Apache-2.0

use std::collections::BTreeMap;

use delpezzo::dataset::{
    document, document_source, load_dataset, load_document, run_verify, select, Category, DatasetDocument, DatasetError,
    LoadedRecord, SurfaceRecord, VerifyOptions,
};
use delpezzo::exec::Strategy;

fn records(p: u32) -> Vec<LoadedRecord> {
    load_document(&document(p).unwrap()).unwrap()
}

fn record(p: u32, id: &str) -> SurfaceRecord {
    document(p).unwrap().records.into_iter().find(|r| r.id == id).unwrap()
}

/// Loads and verifies a single record; `false` if either step rejects it.
fn accepted(r: &SurfaceRecord) -> bool {
    let doc = DatasetDocument { schema: delpezzo::dataset::SCHEMA.into(), characteristic: r.characteristic, records: vec![r.clone()] };
    match load_document(&doc) {
        Ok(loaded) => run_verify(&loaded, &VerifyOptions::default()).pass,
        Err(_) => false,
    }
}

#[test]
fn bundled_record_counts() {
    assert_eq!(records(7).len(), 2);
    assert_eq!(records(5).len(), 9);
    assert_eq!(records(3).len(), 56);
    assert!(matches!(document(11), Err(DatasetError::UnknownCharacteristic(11))));
}

#[test]
fn bundled_documents_round_trip_byte_identical() {
    for p in [3, 5, 7] {
        let (src, ctx) = document_source(p).unwrap();
        let doc = DatasetDocument::from_json(&src, &ctx).unwrap();
        assert_eq!(doc.to_json(), src, "char {p}");
    }
}

#[test]
fn provenance_rows_are_consecutive_per_table() {
    for p in [3, 5, 7] {
        let doc = document(p).unwrap();
        let mut rows: BTreeMap<String, Vec<u32>> = BTreeMap::new();
        for r in &doc.records {
            assert_eq!(r.characteristic, p);
            rows.entry(r.provenance.table.clone()).or_default().push(r.provenance.row);
        }
        for (table, rs) in rows {
            let want: Vec<u32> = (1..=rs.len() as u32).collect();
            assert_eq!(rs, want, "{table}");
        }
    }
}

#[test]
fn klein_record() {
    let r = record(7, "p7-d2-01");
    assert_eq!(r.degree, 2);
    assert_eq!(r.equations, vec!["w^2 - (x^3*y + y^3*z + z^3*x)".to_string()]);
    assert_eq!(r.singularities.len(), 1);
    assert_eq!(r.singularities[0].ty.to_string(), "A6");
    let loaded = load_document(&DatasetDocument { schema: delpezzo::dataset::SCHEMA.into(), characteristic: 7, records: vec![r] }).unwrap();
    // [1:2:-3:0] over F_7.
    let f = &loaded[0].field;
    let want: Vec<_> = ["1", "2", "-3", "0"].iter().map(|c| f.parse_element(c).unwrap()).collect();
    assert_eq!(loaded[0].points[0], want);
    let s = run_verify(&loaded, &VerifyOptions::default());
    assert!(s.pass, "{}", s.to_text());
}

#[test]
fn char7_and_char5_verify() {
    for p in [7, 5] {
        let s = run_verify(&records(p), &VerifyOptions::default());
        assert!(s.pass, "{}", s.to_text());
        for r in &s.records {
            for c in [Category::SingularSet, Category::Classification, Category::Invariance, Category::Motion, Category::TableRegeneration] {
                assert!(r.checks[&c].pass, "{} {}", r.id, c.name());
            }
        }
    }
}

#[test]
fn summary_is_independent_of_jobs() {
    let recs = records(5);
    let strip = |jobs: usize, strategy: Strategy| {
        let s = run_verify(&recs, &VerifyOptions { jobs, strategy });
        s.records.into_iter().map(|r| (r.id, r.checks)).collect::<Vec<_>>()
    };
    let base = strip(1, Strategy::Sequential);
    assert_eq!(strip(1, Strategy::Parallel), base);
    assert_eq!(strip(4, Strategy::Parallel), base);
}

#[test]
fn select_by_id() {
    let recs = records(5);
    assert_eq!(select(&recs, Some("p5-d3-02")).unwrap().len(), 1);
    assert_eq!(select(&recs, None).unwrap().len(), 9);
    assert!(matches!(select(&recs, Some("nope")), Err(DatasetError::UnknownId(_))));
}

#[test]
fn corrupted_singular_point_is_a_singular_set_failure() {
    let mut r = record(7, "p7-d2-01");
    // A smooth point of the Klein cover.
    r.singularities[0].point = vec!["0".into(), "0".into(), "1".into(), "0".into()];
    let loaded = load_document(&DatasetDocument { schema: delpezzo::dataset::SCHEMA.into(), characteristic: 7, records: vec![r] }).unwrap();
    let s = run_verify(&loaded, &VerifyOptions::default());
    assert!(!s.pass);
    assert!(!s.records[0].checks[&Category::SingularSet].pass);
}

fn substitution_mut<'a>(r: &'a mut SurfaceRecord, label: &str) -> &'a mut BTreeMap<String, String> {
    let g = r.aut0.iter_mut().find(|g| g.label == label).unwrap();
    match &mut g.action {
        delpezzo::action::ActionMap::Substitution { substitution } => substitution,
        _ => panic!("{label} is not a substitution"),
    }
}

#[test]
fn negative_controls_coefficient_and_weight_mutations() {
    let mut mutated = Vec::new();

    let mut r = record(7, "p7-d2-01");
    r.equations[0] = "w^2 - (x^3*y + y^3*z + 2*z^3*x)".into();
    mutated.push(("klein coefficient", r));

    let mut r = record(7, "p7-d2-01");
    substitution_mut(&mut r, "mu_7").insert("x".into(), "lambda^2*x".into());
    mutated.push(("klein weight", r));

    let mut r = record(3, "p3-d3-08");
    substitution_mut(&mut r, "G_m").insert("x3".into(), "lambda^3*x3".into());
    mutated.push(("E6^0 cubic weight", r));

    let mut r = record(3, "p3-d3-08");
    r.equations[0] = "x0^3 + x1^2*x2 + 2*x2^2*x3".into();
    mutated.push(("E6^0 cubic coefficient", r));

    let mut r = record(3, "p3-d1-22");
    substitution_mut(&mut r, "mu_3").insert("t".into(), "lambda^2*t".into());
    substitution_mut(&mut r, "mu_3").insert("s".into(), "lambda*s".into());
    mutated.push(("E8^1 weight", r));

    let mut r = record(3, "p3-d1-22");
    r.equations[0] = "y^2 - (x^3 + 2*s^4*x + s^3*t^3)".into();
    mutated.push(("E8^1 coefficient", r));

    let mut r = record(5, "p5-d1-01");
    let eq = r.equations[0].clone();
    r.equations[0] = eq.replacen("x^3", "2*x^3", 1);
    assert_ne!(r.equations[0], eq);
    mutated.push(("char 5 coefficient", r));

    for (name, r) in &mutated {
        assert!(!accepted(r), "mutation {name} was accepted");
    }
    // The unmutated originals pass.
    for (p, id) in [(7, "p7-d2-01"), (3, "p3-d3-08"), (3, "p3-d1-22"), (5, "p5-d1-01")] {
        assert!(accepted(&record(p, id)), "{id}");
    }
}

#[test]
fn schema_and_path_errors() {
    let (src, _) = document_source(7).unwrap();
    let bad = src.replacen("delpezzo-dataset/1", "delpezzo-dataset/0", 1);
    assert!(matches!(DatasetDocument::from_json(&bad, "x"), Err(DatasetError::SchemaVersion { .. })));
    assert!(matches!(DatasetDocument::from_json("{", "x"), Err(DatasetError::Json { .. })));
    assert!(matches!(load_dataset(std::path::Path::new("/nonexistent/char7.json")), Err(DatasetError::Io { .. })));

    let dir = std::env::temp_dir().join(format!("dpk-dataset-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("char7.json");
    std::fs::write(&path, &src).unwrap();
    assert_eq!(load_dataset(&path).unwrap().len(), 2);
    let _ = std::fs::remove_dir_all(&dir);
}

#[test]
fn invalid_records_name_the_field() {
    let mut r = record(7, "p7-d2-01");
    r.equations[0] = "w^2 - (x^3*y +".into();
    let doc = DatasetDocument { schema: delpezzo::dataset::SCHEMA.into(), characteristic: 7, records: vec![r] };
    match load_document(&doc) {
        Err(DatasetError::Invalid { id, field, .. }) => {
            assert_eq!(id, "p7-d2-01");
            assert_eq!(field, "equations[0]");
        }
        other => panic!("{other:?}"),
    }

    let mut r = record(7, "p7-d2-01");
    r.singularities[0].ty = "A5".parse().unwrap();
    let doc = DatasetDocument { schema: delpezzo::dataset::SCHEMA.into(), characteristic: 7, records: vec![r] };
    assert!(matches!(load_document(&doc), Err(DatasetError::Invalid { field, .. }) if field == "singularities"));
}
