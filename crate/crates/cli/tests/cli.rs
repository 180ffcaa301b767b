//! End-to-end tests of the binary: exit codes, report shape and stability,
//! config handling, and agreement with the shipped JSON schema.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn quadsym(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quadsym"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_of(out: &Output) -> String {
    String::from_utf8_lossy(&out.stderr).into_owned()
}

#[test]
fn verify_passes_for_both_models() {
    let out = quadsym(&["verify", "--model", "kc", "--dim", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let report = json_of(&out);
    let checks = report["checks"].as_array().unwrap();
    assert!(checks.len() >= 6);
    assert!(checks.iter().all(|c| c["status"] == "pass"));
    // Sorted by name for byte-stable output.
    let names: Vec<&str> = checks.iter().map(|c| c["name"].as_str().unwrap()).collect();
    let mut sorted = names.clone();
    sorted.sort_unstable();
    assert_eq!(names, sorted);
    assert!(names.contains(&"casimir-collapse"));

    let out = quadsym(&["verify", "--model", "dso", "--dim", "4", "--split", "2"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let report = json_of(&out);
    assert!(report["checks"]
        .as_array()
        .unwrap()
        .iter()
        .all(|c| c["status"] == "pass"));
}

#[test]
fn unknown_model_is_a_usage_error() {
    let out = quadsym(&["verify", "--model", "kepler"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("possible values"));
}

#[test]
fn mode_mixing_is_a_config_error() {
    // Numeric value in the symbolic command...
    let out = quadsym(&["verify", "--model", "kc", "--c1", "1"]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("symbolic"));
    // ...and a symbolic marker in a numeric command.
    let out = quadsym(&["spectrum", "--model", "kc", "--c1", "symbolic"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn hydrogen_spectrum_has_the_textbook_levels() {
    let out = quadsym(&["spectrum", "--model", "kc", "--dim", "3", "--levels", "3"]);
    assert_eq!(code(&out), 0);
    let report = json_of(&out);
    let exacts: Vec<&str> = report["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["e_physical"]["exact"].as_str().unwrap())
        .collect();
    for want in ["-1/2", "-1/8", "-1/18"] {
        assert!(exacts.contains(&want), "{want} missing from {exacts:?}");
    }
    for row in report["spectrum"].as_array().unwrap() {
        assert_eq!(row["matched"], true);
        assert_eq!(row["positive"], true);
        assert_eq!(row["e_algebraic"]["exact"], row["e_physical"]["exact"]);
    }
}

#[test]
fn oscillator_spectrum_steps_by_two() {
    let out = quadsym(&[
        "spectrum", "--model", "dso", "--dim", "4", "--split", "2", "--p-max", "2",
    ]);
    assert_eq!(code(&out), 0);
    let report = json_of(&out);
    let exacts: Vec<&str> = report["spectrum"]
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["e_physical"]["exact"].as_str().unwrap())
        .collect();
    assert_eq!(exacts, ["2", "4", "6"]);
}

#[test]
fn oracle_agrees_and_flags_absurd_grids() {
    let out = quadsym(&["oracle", "--model", "kc", "--dim", "3"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let report = json_of(&out);
    for row in report["oracle"].as_array().unwrap() {
        assert_eq!(row["converged"], true);
        let rel: f64 = row["rel_err"].as_str().unwrap().parse().unwrap();
        assert!(rel <= 1e-6);
    }

    // Barriers push the outermost turning radius outward; the auto domain
    // has to follow it, or the top level misses tolerance.
    let out = quadsym(&["oracle", "--model", "kc", "--c1", "1", "--tol", "1e-6"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));

    // A 16-point grid cannot certify convergence: flagged, exit 1, but the
    // report is still emitted in full.
    let out = quadsym(&["oracle", "--model", "kc", "--grid", "16"]);
    assert_eq!(code(&out), 1);
    let report = json_of(&out);
    assert!(report["oracle"]
        .as_array()
        .unwrap()
        .iter()
        .any(|r| r["converged"] == false));

    // Too small to even pose the eigenproblem: config error.
    let out = quadsym(&["oracle", "--model", "kc", "--grid", "4"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn scan_is_empty_without_an_attractive_center() {
    let out = quadsym(&["scan", "--model", "kc", "--c0", "0"]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let report = json_of(&out);
    assert_eq!(report["scan"].as_array().unwrap().len(), 0);
    assert_eq!(report["survivors"].as_array().unwrap().len(), 0);
}

#[test]
fn scan_counts_surviving_zero_roots() {
    let out = quadsym(&["scan", "--model", "kc", "--p-max", "1"]);
    assert_eq!(code(&out), 0);
    let report = json_of(&out);
    for s in report["survivors"].as_array().unwrap() {
        assert_eq!(s["survivors"], 4);
    }
    assert!(report["scan"]
        .as_array()
        .unwrap()
        .iter()
        .all(|r| r["integer_positive"] == true));
}

#[test]
fn reports_are_byte_identical_across_runs() {
    for args in [
        vec!["spectrum", "--model", "kc", "--levels", "2"],
        vec!["oracle", "--model", "dso", "--dim", "4", "--split", "2", "--levels", "1"],
        vec!["scan", "--model", "dso", "--dim", "4", "--split", "2", "--p-max", "1"],
    ] {
        let a = quadsym(&args);
        let b = quadsym(&args);
        assert_eq!(code(&a), 0);
        assert_eq!(a.stdout, b.stdout, "nondeterministic output for {args:?}");
    }
}

#[test]
fn csv_output_round_trips() {
    let out = quadsym(&["spectrum", "--model", "kc", "--format", "csv"]);
    assert_eq!(code(&out), 0);
    let mut reader = csv::Reader::from_reader(out.stdout.as_slice());
    let headers = reader.headers().unwrap().clone();
    assert_eq!(
        headers.iter().collect::<Vec<_>>(),
        vec![
            "quantum_numbers",
            "e_physical",
            "e_physical_exact",
            "e_algebraic",
            "e_algebraic_exact",
            "branch",
            "matched",
            "positive"
        ]
    );
    let rows: Vec<csv::StringRecord> = reader.records().map(|r| r.unwrap()).collect();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r.len() == headers.len()));
}

#[test]
fn config_file_merges_under_flags() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("run.json");
    fs::write(
        &path,
        r#"{ "model": "kc", "dim": 4, "c1": 1, "c2": "1/2", "levels": 2 }"#,
    )
    .unwrap();
    let out = quadsym(&[
        "spectrum", "--config", path.to_str().unwrap(), "--dim", "3",
    ]);
    assert_eq!(code(&out), 0, "{}", stderr_of(&out));
    let cfg = &json_of(&out)["config"];
    assert_eq!(cfg["dim"], 3, "flag must override the file");
    assert_eq!(cfg["c1"], "1");
    assert_eq!(cfg["c2"], "1/2");
    assert_eq!(cfg["levels"], 2);
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    fs::write(&path, r#"{ "model": "kc", "lvls": 2 }"#).unwrap();
    let out = quadsym(&["spectrum", "--config", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(stderr_of(&out).contains("unknown field"));
}

#[test]
fn out_flag_writes_the_same_bytes_as_stdout() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let direct = quadsym(&["scan", "--model", "kc", "--p-max", "0"]);
    let filed = quadsym(&[
        "scan", "--model", "kc", "--p-max", "0", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(code(&filed), 0);
    assert!(filed.stdout.is_empty());
    assert_eq!(fs::read(&path).unwrap(), direct.stdout);
}

// --- schema agreement ------------------------------------------------------

fn deref<'a>(node: &'a Value, root: &'a Value) -> &'a Value {
    match node.get("$ref").and_then(Value::as_str) {
        Some(path) => {
            let mut cur = root;
            for seg in path.trim_start_matches("#/").split('/') {
                cur = &cur[seg];
            }
            cur
        }
        None => node,
    }
}

fn type_ok(v: &Value, t: &str) -> bool {
    match t {
        "object" => v.is_object(),
        "array" => v.is_array(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "boolean" => v.is_boolean(),
        "null" => v.is_null(),
        _ => false,
    }
}

/// Minimal structural validator: types, const/enum, required, closed
/// objects, array items, and local $ref — enough to keep the shipped
/// schema honest without an external validator.
fn validate(v: &Value, node: &Value, root: &Value, path: &str) {
    let node = deref(node, root);
    if let Some(c) = node.get("const") {
        assert_eq!(v, c, "{path}: expected const {c}");
    }
    if let Some(options) = node.get("enum").and_then(Value::as_array) {
        assert!(options.contains(v), "{path}: {v} not one of {options:?}");
    }
    match node.get("type") {
        Some(Value::String(t)) => assert!(type_ok(v, t), "{path}: expected {t}, got {v}"),
        Some(Value::Array(ts)) => assert!(
            ts.iter().any(|t| type_ok(v, t.as_str().unwrap())),
            "{path}: {v} matches none of {ts:?}"
        ),
        _ => {}
    }
    match v {
        Value::Object(map) => {
            if let Some(props) = node.get("properties").and_then(Value::as_object) {
                if node.get("additionalProperties") == Some(&Value::Bool(false)) {
                    for k in map.keys() {
                        assert!(props.contains_key(k), "{path}.{k}: not in schema");
                    }
                }
                if let Some(req) = node.get("required").and_then(Value::as_array) {
                    for r in req {
                        let key = r.as_str().unwrap();
                        assert!(map.contains_key(key), "{path}: missing required {key}");
                    }
                }
                for (k, val) in map {
                    if let Some(sub) = props.get(k) {
                        validate(val, sub, root, &format!("{path}.{k}"));
                    }
                }
            }
        }
        Value::Array(items) => {
            if let Some(item_schema) = node.get("items") {
                for (i, item) in items.iter().enumerate() {
                    validate(item, item_schema, root, &format!("{path}[{i}]"));
                }
            }
        }
        _ => {}
    }
}

#[test]
fn reports_validate_against_the_shipped_schema() {
    let schema_path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../schema/report.schema.json");
    let schema: Value =
        serde_json::from_str(&fs::read_to_string(schema_path).unwrap()).unwrap();
    for args in [
        vec!["verify", "--model", "dso", "--dim", "3", "--split", "1"],
        vec!["spectrum", "--model", "kc", "--levels", "2"],
        vec!["oracle", "--model", "kc", "--grid", "16"],
        vec!["scan", "--model", "dso", "--dim", "4", "--split", "2", "--p-max", "1"],
    ] {
        let out = quadsym(&args);
        let report = json_of(&out);
        validate(&report, &schema, &schema, "$");
    }
}
