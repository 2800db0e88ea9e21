// SPDX-License-Identifier: Apache-2.0

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn dpk(args: &[&str]) -> Output {
    dpk_env(args, None)
}

fn dpk_env(args: &[&str], data_dir: Option<&Path>) -> Output {
    let mut c = Command::new(env!("CARGO_BIN_EXE_dpk"));
    c.args(args).env_remove("DPK_DATA_DIR");
    if let Some(d) = data_dir {
        c.env("DPK_DATA_DIR", d);
    }
    c.output().expect("dpk runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("valid JSON on stdout")
}

fn temp_dir(tag: &str) -> PathBuf {
    let d = std::env::temp_dir().join(format!("dpk-cli-{tag}-{}", std::process::id()));
    std::fs::create_dir_all(&d).unwrap();
    d
}

#[test]
fn exc_and_roots_counts() {
    let o = dpk(&["exc", "--degree", "3", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], 27);
    assert_eq!(v["vectors"].as_array().unwrap().len(), 27);

    let o = dpk(&["--format", "json", "roots", "--degree", "1"]);
    assert_eq!(json(&o)["count"], 240);

    let o = dpk(&["roots", "--degree", "4"]);
    assert!(stdout(&o).starts_with("degree 4: 40 roots\n"));
}

#[test]
fn reduce_reports() {
    let v = json(&dpk(&["reduce", "--type", "A6", "--degree", "1", "--format", "json"]));
    assert_eq!(v["classes"].as_array().unwrap().len(), 1);
    assert_eq!(v["classes"][0]["reducible"], true);
    assert_eq!(v["unique_class"], true);
    assert_eq!(v["verdict"], "reducible");

    let v = json(&dpk(&["reduce", "--type", "A3", "--degree", "4", "--format", "json"]));
    let verdicts: Vec<bool> = v["classes"].as_array().unwrap().iter().map(|c| c["reducible"].as_bool().unwrap()).collect();
    assert_eq!(verdicts.len(), 2);
    assert!(verdicts.contains(&true) && verdicts.contains(&false));
    assert_eq!(v["verdict"], "mixed");

    let o = dpk(&["reduce", "--type", "A2", "--degree", "7", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(json(&o)["verdict"], "no embedding");
}

#[test]
fn embed_omits_verdicts() {
    let v = json(&dpk(&["embed", "--type", "2A1", "--degree", "4", "--format", "json"]));
    let classes = v["classes"].as_array().unwrap();
    assert_eq!(classes.len(), 2);
    assert!(classes.iter().all(|c| c.get("reducible").is_none()));
}

#[test]
fn tables_char7_and_char5() {
    let v = json(&dpk(&["tables", "--char", "7", "--format", "json"]));
    let rows = v["rows"].as_array().unwrap();
    assert_eq!(rows.iter().map(|r| r["d"].as_u64().unwrap()).collect::<Vec<_>>(), vec![2, 1]);

    let o = dpk(&["tables", "--char", "5", "--diff", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let counts: Vec<(u64, usize)> = v["rows"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| (r["d"].as_u64().unwrap(), r["configurations"].as_array().unwrap().len()))
        .collect();
    assert_eq!(counts, vec![(5, 1), (4, 1), (3, 2), (2, 3), (1, 8)]);
}

#[test]
fn verify_exit_codes() {
    let o = dpk(&["verify", "--char", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    assert!(stdout(&o).ends_with("2 records, 2 passed, 0 failed\n"));

    let o = dpk(&["verify", "--char", "5", "--id", "p5-d3-02", "--jobs", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["pass"], true);
    assert_eq!(v["records"].as_array().unwrap().len(), 1);

    assert_eq!(dpk(&["verify", "--char", "7", "--id", "missing"]).status.code(), Some(2));
    assert_eq!(dpk(&["verify", "--char", "11"]).status.code(), Some(2));
    assert_eq!(dpk(&["bogus"]).status.code(), Some(2));
    assert_eq!(dpk(&["exc"]).status.code(), Some(2));
    assert_eq!(dpk(&["exc", "--degree", "9"]).status.code(), Some(2));
    assert_eq!(dpk(&["tables", "--char", "2"]).status.code(), Some(2));
    assert_eq!(dpk(&["--help"]).status.code(), Some(0));
}

#[test]
fn data_dir_override() {
    let src = std::fs::read_to_string(concat!(env!("CARGO_MANIFEST_DIR"), "/data/dataset/char7.json")).unwrap();

    let good = temp_dir("good");
    std::fs::write(good.join("char7.json"), &src).unwrap();
    assert_eq!(dpk_env(&["verify", "--char", "7"], Some(&good)).status.code(), Some(0));

    // A weight mutation loads but fails invariance.
    let bad = temp_dir("bad");
    let mutated = src.replacen("\"x\": \"lambda*x\"", "\"x\": \"lambda^2*x\"", 1);
    assert_ne!(mutated, src);
    std::fs::write(bad.join("char7.json"), mutated).unwrap();
    let o = dpk_env(&["verify", "--char", "7", "--format", "json"], Some(&bad));
    assert_eq!(o.status.code(), Some(1));
    let v = json(&o);
    assert_eq!(v["pass"], false);
    assert_eq!(v["records"][0]["checks"]["invariance"]["pass"], false);

    // Unparseable file and missing directory are IO/usage errors.
    let broken = temp_dir("broken");
    std::fs::write(broken.join("char7.json"), "{").unwrap();
    assert_eq!(dpk_env(&["verify", "--char", "7"], Some(&broken)).status.code(), Some(2));
    assert_eq!(dpk_env(&["verify", "--char", "7"], Some(Path::new("/nonexistent/dpk"))).status.code(), Some(2));

    for d in [good, bad, broken] {
        let _ = std::fs::remove_dir_all(d);
    }
}

#[test]
fn jobs_do_not_change_the_summary() {
    let strip = |o: Output| {
        let mut v = json(&o);
        for r in v["records"].as_array_mut().unwrap() {
            r.as_object_mut().unwrap().remove("millis");
        }
        v
    };
    let one = strip(dpk(&["verify", "--char", "5", "--jobs", "1", "--format", "json"]));
    let four = strip(dpk(&["verify", "--char", "5", "--jobs", "4", "--format", "json"]));
    assert_eq!(one, four);
}
