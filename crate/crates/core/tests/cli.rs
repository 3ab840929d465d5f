mod common;

use std::path::Path;
use std::process::{Command, Output};

use drg_norton::families::FamilySpec;
use drg_norton::report::{analyze, AnalysisOptions};
use serde_json::Value;

use common::graph;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_drg-norton")).args(args).output().expect("spawn drg-norton")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad JSON ({e}): {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn all_numbers(v: &Value, out: &mut Vec<f64>) {
    match v {
        Value::Number(n) => out.push(n.as_f64().unwrap()),
        Value::Array(a) => a.iter().for_each(|x| all_numbers(x, out)),
        Value::Object(o) => o.values().for_each(|x| all_numbers(x, out)),
        _ => {}
    }
}

#[test]
fn petersen_report() {
    let out = run(&["analyze", "--family", "petersen"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    assert_eq!(r["schemaVersion"], 1);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["withinTolerance"], true);
    assert_eq!(r["graph"]["n"], 10);
    let orderings = r["qOrderings"].as_array().unwrap();
    assert!(!orderings.is_empty());
    for o in orderings {
        let mut values = Vec::new();
        all_numbers(&o["residuals"], &mut values);
        assert_eq!(values.len(), 11);
        assert!(values.iter().all(|v| v.abs() < 1e-8), "{values:?}");
        assert!(o.get("maxAssociatorNorm").is_none());
    }
    let with = json(&run(&["analyze", "--family", "petersen", "--associators"]));
    let norm = with["qOrderings"][0]["maxAssociatorNorm"].as_f64().unwrap();
    assert!((norm - 11.0 / 486.0).abs() < 1e-12);
}

#[test]
fn binary_hamming_has_zero_products() {
    let out = run(&["analyze", "--family", "hamming", "--params", "3,2", "--dump-products"]);
    assert_eq!(out.status.code(), Some(0));
    let r = json(&out);
    for o in r["qOrderings"].as_array().unwrap() {
        assert!(o["q111"]["tensor"].as_f64().unwrap().abs() < 1e-8);
        assert!(o["q111"]["formula"].as_f64().unwrap().abs() < 1e-8);
        let rows = o["products"].as_array().unwrap();
        assert_eq!(rows.len(), 8 * 9 / 2);
        for row in rows {
            let mut values = Vec::new();
            all_numbers(&row["vector"], &mut values);
            assert_eq!(values.len(), 8);
            assert!(values.iter().all(|v| v.abs() < 1e-10));
        }
    }
    let cube = json(&run(&["analyze", "--family", "hypercube", "--params", "4", "--dump-products"]));
    let orderings = cube["qOrderings"].as_array().unwrap();
    let mut values = Vec::new();
    for o in orderings {
        for row in o["products"].as_array().unwrap() {
            all_numbers(&row["vector"], &mut values);
        }
    }
    assert_eq!(values.len(), orderings.len() * 16 * 17 / 2 * 16);
    assert!(values.iter().all(|v| v.abs() < 1e-10));
}

#[test]
fn petersen_self_product_row_is_one_scalar() {
    let r = json(&run(&["analyze", "--family", "petersen", "--dump-products", "--compressed"]));
    for o in r["qOrderings"].as_array().unwrap() {
        let q111 = o["q111"]["tensor"].as_f64().unwrap();
        let row = o["products"].as_array().unwrap().iter().find(|row| row["distance"] == 0).unwrap();
        let coefficients = row["coefficients"].as_object().unwrap();
        assert_eq!(coefficients.keys().collect::<Vec<_>>(), vec!["onX"]);
        assert!((coefficients["onX"].as_f64().unwrap() - q111 / 10.0).abs() < 1e-10);
    }
}

#[test]
fn compressed_dump_on_c6() {
    let r = json(&run(&["analyze", "--family", "cycle", "--params", "6", "--dump-products", "--compressed"]));
    let rows = r["qOrderings"][0]["products"].as_array().unwrap();
    assert_eq!(rows.len(), 21);
    for row in rows {
        assert!(row.get("vector").is_none());
        let c = row["coefficients"].as_object().unwrap();
        let d = row["distance"].as_u64().unwrap();
        match d {
            0 => assert_eq!(c.len(), 1),
            3 => assert!(c.contains_key("minus") && !c.contains_key("plus")),
            _ => assert!(c.contains_key("minus") && c.contains_key("plus")),
        }
    }
}

#[test]
fn csv_product_dump() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("products.csv");
    let out = run(&[
        "analyze",
        "--family",
        "cycle",
        "--params",
        "5",
        "--dump-products",
        "--format",
        "csv",
        "--products-output",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "ordering,x,y,distance,v0,v1,v2,v3,v4");
    // two orderings, 15 unordered pairs each
    assert_eq!(lines.count(), 30);
    assert!(json(&out)["qOrderings"][0].get("products").is_none());

    let missing = run(&["analyze", "--family", "cycle", "--params", "5", "--dump-products", "--format", "csv"]);
    assert_eq!(missing.status.code(), Some(3));
}

#[test]
fn not_distance_regular_path() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "path3.edges", "# path on three vertices\n3 2\n0 1\n1 2\n");
    let out = run(&["analyze", "--graph", &path]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["status"], "notDistanceRegular");
    assert_eq!(r["failure"]["kind"], "notDistanceRegular");
    let w = &r["failure"]["witness"];
    for key in ["h", "i", "j", "x", "y", "expected", "found"] {
        assert!(w.get(key).is_some(), "witness lacks {key}");
    }
    assert_ne!(w["expected"], w["found"]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("notDistanceRegular"));
}

#[test]
fn complete_graph_has_diameter_one() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "k4.edges", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    let out = run(&["analyze", "--graph", &path]);
    assert_eq!(out.status.code(), Some(1));
    let r = json(&out);
    assert_eq!(r["failure"]["kind"], "diameterTooSmall");
    assert!(String::from_utf8_lossy(&out.stderr).contains("diameterTooSmall"));
}

#[test]
fn disconnected_graph_is_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "two.edges", "4 2\n0 1\n2 3\n");
    let out = run(&["analyze", "--graph", &path]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["failure"]["kind"], "disconnected");
}

#[test]
fn malformed_edge_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "bad.edges", "5 5\n0 1\n1 2\n2 x\n3 4\n4 0\n");
    let out = run(&["analyze", "--graph", &path]);
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert!(stderr.contains(&format!("{path}:4:")), "{stderr}");
    assert!(out.stdout.is_empty());

    let out = run(&["analyze", "--graph", &dir.path().join("absent.edges").to_string_lossy()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn usage_errors() {
    assert_eq!(run(&["analyze"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--family", "petersen", "--bogus"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--family", "cycle", "--params", "4"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--family", "dodecahedron"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--family", "petersen", "--tolerance", "-1"]).status.code(), Some(3));
    assert_eq!(run(&["analyze", "--family", "hamming", "--params", "14,2"]).status.code(), Some(3));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn repeated_runs_are_byte_identical() {
    let a = run(&["analyze", "--family", "johnson", "--params", "6,3"]);
    let b = run(&["analyze", "--family", "johnson", "--params", "6,3"]);
    assert_eq!(a.status.code(), Some(0));
    assert!(!a.stdout.is_empty());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_file_and_stdout_agree() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("report.json");
    let out = run(&["analyze", "--family", "cycle", "--params", "8", "--output", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let stdout = run(&["analyze", "--family", "cycle", "--params", "8"]).stdout;
    assert_eq!(std::fs::read(&file).unwrap(), stdout);
}

#[test]
fn keys_sorted_and_floats_fixed_width() {
    let text = String::from_utf8(run(&["analyze", "--family", "johnson", "--params", "5,2"]).stdout).unwrap();
    let mut last_key_by_indent: Vec<Option<String>> = Vec::new();
    let (mut keys, mut floats) = (0, 0);
    for line in text.lines() {
        let indent = line.len() - line.trim_start().len();
        let trimmed = line.trim_start();
        if last_key_by_indent.len() <= indent {
            last_key_by_indent.resize(indent + 1, None);
        }
        if trimmed.starts_with(['{', '[', '}', ']']) {
            last_key_by_indent.truncate(indent + 1);
            continue;
        }
        if let Some(rest) = trimmed.strip_prefix('"') {
            let key = rest.split('"').next().unwrap().to_owned();
            if let Some(prev) = &last_key_by_indent[indent] {
                assert!(prev < &key, "{prev} before {key}");
            }
            keys += 1;
            last_key_by_indent[indent] = Some(key);
            last_key_by_indent.truncate(indent + 1);
        }
        if trimmed.contains('.') {
            let value = trimmed.rsplit(": ").next().unwrap().trim_end_matches(',');
            if value.parse::<f64>().is_ok() && !value.starts_with('"') {
                let mantissa = value.trim_start_matches('-').split('e').next().unwrap();
                assert_eq!(mantissa.len(), 18, "{value} is not 17 significant digits");
                floats += 1;
            }
        }
    }
    assert!(keys > 100 && floats > 50, "{keys} keys, {floats} floats checked");
}

/// Every number in the CLI report equals the one computed by the library.
#[test]
fn report_matches_library() {
    for (args, spec) in [
        (vec!["analyze", "--family", "petersen"], FamilySpec::Petersen),
        (vec!["analyze", "--family", "hamming", "--params", "2,3"], FamilySpec::Hamming { d: 2, q: 3 }),
    ] {
        let cli = json(&run(&args));
        let lib = analyze(&graph(&spec), &format!("family:{spec}"), &AnalysisOptions::default()).unwrap();
        let lib: Value = serde_json::from_str(&lib.to_json()).unwrap();
        assert_eq!(cli, lib, "{spec}");
        let (mut a, mut b) = (Vec::new(), Vec::new());
        all_numbers(&cli["qOrderings"], &mut a);
        all_numbers(&lib["qOrderings"], &mut b);
        assert_eq!(a, b);
    }
}
