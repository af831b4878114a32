//! End-to-end runs of the `ecbound` binary.

use std::path::Path;
use std::process::{Command, Output};

use ecbound::curve::parse_rational;
use num_rational::BigRational;
use serde_json::Value;

fn ecbound(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ecbound"))
        .args(args)
        .env_remove("ECBOUND_REGISTRY")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn schema() -> Value {
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/bound_report.schema.json");
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

fn type_matches(ty: &str, v: &Value) -> bool {
    match ty {
        "null" => v.is_null(),
        "boolean" => v.is_boolean(),
        "string" => v.is_string(),
        "integer" => v.is_i64() || v.is_u64(),
        "number" => v.is_number(),
        "array" => v.is_array(),
        "object" => v.is_object(),
        other => panic!("schema type {other} not handled"),
    }
}

/// The subset of JSON Schema the report schema uses: `type`, `required`,
/// `properties`, `items`, `enum`, `minimum`.
fn validate(schema: &Value, v: &Value, path: &str, errors: &mut Vec<String>) {
    if let Some(ty) = schema.get("type") {
        let ok = match ty {
            Value::String(t) => type_matches(t, v),
            Value::Array(ts) => ts.iter().any(|t| type_matches(t.as_str().unwrap(), v)),
            _ => panic!("bad type keyword"),
        };
        if !ok {
            errors.push(format!("{path}: expected {ty}, got {v}"));
            return;
        }
    }
    if let Some(allowed) = schema.get("enum").and_then(Value::as_array) {
        if !allowed.contains(v) {
            errors.push(format!("{path}: {v} not in {allowed:?}"));
        }
    }
    if let (Some(min), Some(x)) = (schema.get("minimum").and_then(Value::as_f64), v.as_f64()) {
        if x < min {
            errors.push(format!("{path}: {x} < {min}"));
        }
    }
    if let Some(obj) = v.as_object() {
        for key in schema
            .get("required")
            .and_then(Value::as_array)
            .into_iter()
            .flatten()
        {
            if !obj.contains_key(key.as_str().unwrap()) {
                errors.push(format!("{path}: missing {key}"));
            }
        }
        if let Some(props) = schema.get("properties").and_then(Value::as_object) {
            for (k, sub) in props {
                if let Some(child) = obj.get(k) {
                    validate(sub, child, &format!("{path}.{k}"), errors);
                }
            }
        }
    }
    if let (Some(items), Some(arr)) = (schema.get("items"), v.as_array()) {
        for (i, child) in arr.iter().enumerate() {
            validate(items, child, &format!("{path}[{i}]"), errors);
        }
    }
}

fn assert_valid(report: &Value) {
    let mut errors = Vec::new();
    validate(&schema(), report, "$", &mut errors);
    assert!(errors.is_empty(), "schema violations: {errors:#?}");
}

#[test]
fn analyze_json_matches_schema() {
    for args in [
        &["analyze", "--curve", "-1,0", "--B", "1000"][..],
        &["analyze", "--curve", "-4,0", "--B", "1000"],
        &["analyze", "--curve", "-25,0", "--B", "1e6", "--empirical"],
        &[
            "analyze",
            "--curve",
            "0,-1,0",
            "--B",
            "1e8",
            "--mode",
            "simplified",
        ],
        &[
            "analyze",
            "--curve",
            "-17,16",
            "--B",
            "1e30",
            "--threshold-rank",
            "40",
        ],
    ] {
        let o = ecbound(args);
        assert_eq!(
            o.status.code(),
            Some(0),
            "{args:?}: {}",
            String::from_utf8_lossy(&o.stderr)
        );
        let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_valid(&v);
    }
}

#[test]
fn validator_rejects_broken_reports() {
    let o = ecbound(&["analyze", "--curve", "-1,0", "--B", "1000"]);
    let mut v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    v["branch"] = Value::from("medium-rank");
    v.as_object_mut().unwrap().remove("chain");
    let mut errors = Vec::new();
    validate(&schema(), &v, "$", &mut errors);
    assert_eq!(errors.len(), 2, "{errors:?}");
}

#[test]
fn exit_codes() {
    let cases: [(&[&str], i32); 8] = [
        (&["analyze", "--curve", "-1,0", "--B", "100"], 0),
        (&["analyze", "--curve", "0,0", "--B", "100"], 3),
        (&["analyze", "--curve", "1,1", "--B", "100"], 4),
        (&["analyze", "--curve", "-1,0", "--B", "10"], 5),
        (&["analyze", "--curve", "-100,0", "--B", "50"], 5),
        (&["analyze", "--curve", "x,y", "--B", "100"], 2),
        (&["enumerate", "--curve", "-1,0", "--B", "1e9"], 6),
        (&["frobnicate"], 2),
    ];
    for (args, code) in cases {
        assert_eq!(ecbound(args).status.code(), Some(code), "{args:?}");
    }
}

#[test]
fn verify_prints_verdict() {
    let o = ecbound(&["verify", "--curve", "-25,0", "--B", "1000"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).trim_end().ends_with("verdict: PASS"));
}

#[test]
fn bound_curve_csv_is_deterministic() {
    let a = ecbound(&["bound-curve", "--A", "1000", "--samples", "50"]);
    let b = ecbound(&["bound-curve", "--A", "1000", "--samples", "50"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let text = stdout(&a);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,logf"));
    let rows: Vec<&str> = text
        .lines()
        .skip(1)
        .filter(|l| !l.starts_with('#'))
        .collect();
    assert_eq!(rows.len(), 50);
    for row in rows {
        let (x, y) = row.split_once(',').unwrap();
        let x: f64 = x.parse().unwrap();
        let y: f64 = y.parse().unwrap();
        // log f(x) = x(log A − log(x log x))
        let want = x * (1000f64.ln() - (x * x.ln()).ln());
        assert!((y - want).abs() <= 1e-12 * want.abs().max(1.0));
    }
    assert!(text.contains("# cap_ok=true"));
}

#[test]
fn enumerate_csv_points_lie_on_curve() {
    let o = ecbound(&[
        "enumerate",
        "--curve",
        "0,17",
        "--B",
        "100",
        "--format",
        "csv",
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("x,y,h,hhat"));
    assert!(lines.next().unwrap().starts_with("inf,inf,"));
    let mut affine = 0;
    for line in lines {
        let f: Vec<&str> = line.split(',').collect();
        let x = parse_rational(f[0]).unwrap();
        let y = parse_rational(f[1]).unwrap();
        assert_eq!(
            &y * &y,
            &x * &x * &x + BigRational::from_integer(17.into()),
            "{line}"
        );
        let h: f64 = f[2].parse().unwrap();
        assert!(h <= 100f64.ln() + 1e-12);
        affine += 1;
    }
    assert_eq!(affine % 2, 0);
    assert!(affine >= 16);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let o = ecbound(&[
        "analyze",
        "--curve",
        "-1,0",
        "--B",
        "1000",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_valid(&v);

    let missing = dir.path().join("no/such/dir/out.json");
    let o = ecbound(&["constants", "--out", missing.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(7));
}

#[test]
fn registry_file_and_env() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("constants.txt");
    std::fs::write(&path, "c4 = 1e9\nc5 = 2e5  # user-supplied\n").unwrap();

    let o = ecbound(&["constants", "--registry", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(
        text.lines().any(|l| l.starts_with("c4 = 1000000000")),
        "{text}"
    );
    assert!(text.lines().any(|l| l.starts_with("c5 = 200000")), "{text}");

    let via_env = Command::new(env!("CARGO_BIN_EXE_ecbound"))
        .arg("constants")
        .env("ECBOUND_REGISTRY", &path)
        .output()
        .unwrap();
    assert_eq!(via_env.stdout, o.stdout);

    std::fs::write(&path, "a1 = 5\n").unwrap();
    assert_eq!(
        ecbound(&["constants", "--registry", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
    std::fs::write(&path, "c9 = 12.5\n").unwrap();
    assert_eq!(
        ecbound(&["constants", "--registry", path.to_str().unwrap()])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn constants_text_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("dump.txt");
    let o = ecbound(&["constants", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let again = ecbound(&["constants", "--registry", path.to_str().unwrap()]);
    assert_eq!(again.status.code(), Some(0));
    assert_eq!(std::fs::read(&path).unwrap(), again.stdout);
}
