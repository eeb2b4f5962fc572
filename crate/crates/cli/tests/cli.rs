use std::io::Write;
use std::path::Path;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const BEARINGS: &str = "# million revolutions to failure\n\
17.88,28.92,33.00,41.52,42.12,45.60,48.48,51.84,51.96,54.12,55.56,\n\
67.80,68.64,68.64,68.88,84.12,93.12,98.64,105.12,105.84,127.92,\n\
128.04,173.40\n";

fn hypoxg(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hypoxg"))
        .args(args)
        .output()
        .unwrap()
}

fn hypoxg_with_stdin(args: &[&str], input: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_hypoxg"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child
        .stdin
        .take()
        .unwrap()
        .write_all(input.as_bytes())
        .unwrap();
    child.wait_with_output().unwrap()
}

fn stdout(o: &Output) -> String {
    assert!(
        o.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&o.stderr)
    );
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn validate(schema_file: &str, doc: &Value) {
    let path = Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../../docs/schemas")
        .join(schema_file);
    let schema: Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let validator = jsonschema::validator_for(&schema).unwrap();
    let errors: Vec<String> = validator.iter_errors(doc).map(|e| e.to_string()).collect();
    assert!(errors.is_empty(), "{schema_file}: {errors:?}");
}

fn bearing_file() -> tempfile::NamedTempFile {
    let mut f = tempfile::NamedTempFile::new().unwrap();
    f.write_all(BEARINGS.as_bytes()).unwrap();
    f
}

#[test]
fn fit_ball_bearings() {
    let f = bearing_file();
    let out = stdout(&hypoxg(&[
        "fit",
        "--input",
        f.path().to_str().unwrap(),
        "--model",
        "hypoxg",
        "--n",
        "2",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    validate("fit.schema.json", &doc);
    let keys: Vec<&str> = doc
        .as_object()
        .unwrap()
        .keys()
        .map(String::as_str)
        .collect();
    let mut expected = [
        "model",
        "estimates",
        "log_likelihood",
        "aic",
        "converged",
        "n_evaluations",
        "seed",
    ];
    let mut sorted = keys.clone();
    sorted.sort();
    expected.sort();
    assert_eq!(sorted, expected);
    assert_eq!(doc["model"], "hypoxg:2");
    assert_eq!(doc["converged"], true);
    let l = doc["log_likelihood"].as_f64().unwrap();
    assert!((l - -113.085443963).abs() < 1e-6);
}

#[test]
fn compare_ball_bearings() {
    let f = bearing_file();
    let out = stdout(&hypoxg(&[
        "compare",
        "--input",
        f.path().to_str().unwrap(),
        "--models",
        "hypoxg:2,hypoexp2",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    validate("compare.schema.json", &doc);
    let rows = doc.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[0]["model"], "hypoxg:2");
    assert!(rows[0]["aic"].as_f64().unwrap() < rows[1]["aic"].as_f64().unwrap());
}

#[test]
fn compare_keeps_failed_rows() {
    let out = stdout(&hypoxg_with_stdin(
        &["compare", "--input", "-", "--models", "hypoxg:5,hypoxg:1"],
        "1 2 4\n",
    ));
    let doc: Value = serde_json::from_str(&out).unwrap();
    validate("compare.schema.json", &doc);
    assert!(doc[1]["error"].as_str().unwrap().starts_with("data:"));
    assert!(doc[1]["aic"].is_null());
}

#[test]
fn eval_json_and_csv() {
    let out = stdout(&hypoxg(&[
        "eval",
        "--params",
        "1,2",
        "--at",
        "0,1,1e4",
        "--moments",
        "3",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    validate("eval.schema.json", &doc);
    assert_eq!(doc["points"][2]["hazard"], Value::Null);
    assert_eq!(doc["moments"].as_array().unwrap().len(), 3);
    assert!((doc["moments"][0]["value"].as_f64().unwrap() - 17.0 / 6.0).abs() < 1e-12);

    let csv = stdout(&hypoxg(&[
        "--format", "csv", "eval", "--params", "1", "--at", "0",
    ]));
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("t,pdf,cdf,reliability,hazard"));
    let row: Vec<f64> = lines
        .next()
        .unwrap()
        .split(',')
        .map(|v| v.parse().unwrap())
        .collect();
    assert_eq!(row[1], 0.5);
}

#[test]
fn curves_table() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("curves.csv");
    stdout(&hypoxg(&[
        "curves",
        "--params",
        "1",
        "--grid",
        "0:10:101",
        "--out",
        path.to_str().unwrap(),
    ]));
    let text = std::fs::read_to_string(&path).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("t,pdf,cdf,reliability,hazard"));
    let rows: Vec<Vec<f64>> = lines
        .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
        .collect();
    assert_eq!(rows.len(), 101);
    assert_eq!(rows[0][0], 0.0);
    assert_eq!(rows[0][1], 0.5);
    for w in rows.windows(2) {
        assert!(w[1][0] > w[0][0]);
        assert!(w[1][2] >= w[0][2]);
    }
    for r in &rows {
        assert!((r[2] + r[3] - 1.0).abs() < 1e-9);
    }
    let digits = text.lines().nth(5).unwrap().split(',').nth(1).unwrap();
    let mantissa = digits.split('e').next().unwrap().replace(['.', '-'], "");
    assert!(mantissa.len() >= 12);
}

#[test]
fn curves_for_several_vectors() {
    for params in ["0.5,3", "0.2,1,4.5", "2,9"] {
        let csv = stdout(&hypoxg(&[
            "curves", "--params", params, "--grid", "0:40:200",
        ]));
        let rows: Vec<Vec<f64>> = csv
            .lines()
            .skip(1)
            .map(|l| l.split(',').map(|v| v.parse().unwrap()).collect())
            .collect();
        for w in rows.windows(2) {
            assert!(w[1][0] > w[0][0] && w[1][2] >= w[0][2]);
        }
        assert!(rows.iter().all(|r| (r[2] + r[3] - 1.0).abs() < 1e-9));
    }
}

#[test]
fn sample_is_deterministic() {
    let args = ["sample", "--params", "1,2", "--count", "5", "--seed", "7"];
    let a = hypoxg(&args);
    let b = hypoxg(&args);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(String::from_utf8(a.stdout).unwrap().lines().count(), 5);
    let c = hypoxg(&["sample", "--params", "1,2", "--count", "5", "--seed", "8"]);
    assert_ne!(c.stdout, b.stdout);
}

#[test]
fn sample_then_fit_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("draws.txt");
    let draws = stdout(&hypoxg(&[
        "sample", "--params", "1,3", "--count", "10000", "--seed", "3",
    ]));
    std::fs::write(&path, draws).unwrap();
    let out = stdout(&hypoxg(&[
        "fit",
        "--input",
        path.to_str().unwrap(),
        "--model",
        "hypoxg",
        "--n",
        "2",
    ]));
    let doc: Value = serde_json::from_str(&out).unwrap();
    let est: Vec<f64> = doc["estimates"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v.as_f64().unwrap())
        .collect();
    assert!(
        (est[0] - 1.0).abs() < 0.1 && (est[1] - 3.0).abs() < 0.3,
        "{est:?}"
    );
}

#[test]
fn exit_codes_and_diagnostics() {
    let o = hypoxg(&["eval", "--params", "1,1", "--at", "1"]);
    assert_eq!(o.status.code(), Some(2));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.starts_with("config: ") && err.lines().count() == 1);

    let o = hypoxg_with_stdin(&["fit", "--input", "-", "--model", "hypoexp2"], "1.0, -3\n");
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8(o.stderr).unwrap().contains("'-3'"));

    let o = hypoxg_with_stdin(&["fit", "--input", "-", "--model", "hypoxg:1"], "2 2 2\n");
    assert_eq!(o.status.code(), Some(3));

    let o = hypoxg(&["curves", "--params", "1", "--grid", "0:1:1"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hypoxg(&["fit", "--input", "/nonexistent/file", "--model", "hypoexp2"]);
    assert_eq!(o.status.code(), Some(2));

    let o = hypoxg(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(2));
}
