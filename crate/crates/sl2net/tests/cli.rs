use std::process::Command;

fn sl2net(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_sl2net")).args(args).output().expect("binary runs");
    (
        out.status.code().unwrap_or(-1),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn tmp(name: &str) -> std::path::PathBuf {
    std::env::temp_dir().join(format!("sl2net-cli-{}-{name}", std::process::id()))
}

#[test]
fn verify_ybe_passes() {
    let (code, out, _) = sl2net(&["verify", "--suite", "ybe", "--points", "5", "--seed", "7"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["summary"]["total"], 45);
    assert_eq!(v["summary"]["pass"], 45);
    assert_eq!(v["config"]["seed"], 7);
}

#[test]
fn unattainable_tolerance_fails() {
    let (code, _, err) = sl2net(&["verify", "--suite", "ybe", "--points", "2", "--tol", "1e-30"]);
    assert_eq!(code, 1, "{err}");
}

#[test]
fn malformed_config_is_a_config_error() {
    let path = tmp("bad.json");
    std::fs::write(&path, "{\"suite\": \"ybe\", \"points\": \"many\"}").unwrap();
    let (code, _, err) = sl2net(&["verify", "--config", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("config"), "{err}");
    let (code, _, _) = sl2net(&["verify", "--config", "/nonexistent/sl2net.json"]);
    assert_eq!(code, 2);
}

#[test]
fn config_file_and_report_file() {
    let cfg = tmp("cfg.json");
    let rep = tmp("rep.md");
    std::fs::write(
        &cfg,
        r#"{"suite": "specfun", "specfun_points": 3, "seed": 5, "format": "markdown", "tolerances": {"q_binomial": 1e-11}}"#,
    )
    .unwrap();
    let (code, out, _) = sl2net(&["verify", "--config", cfg.to_str().unwrap(), "--report", rep.to_str().unwrap(), "--jobs", "2"]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&rep).unwrap();
    assert!(text.contains("| specfun | q_binomial | q_binomial | special_function |"));
    assert_eq!(text.matches("| specfun |").count(), 12);
}

#[test]
fn reports_are_deterministic() {
    let args = ["verify", "--suite", "dybe", "--points", "2", "--seed", "11"];
    let (_, a, _) = sl2net(&[&args[..], &["--jobs", "1"]].concat());
    let (_, b, _) = sl2net(&[&args[..], &["--jobs", "3"]].concat());
    assert!(!a.is_empty());
    assert_eq!(a, b);
}

#[test]
fn list_and_eval() {
    let (code, out, _) = sl2net(&["list", "algebras"]);
    assert_eq!(code, 0);
    assert_eq!(out.lines().count(), 19);
    let (_, out, _) = sl2net(&["list", "limits"]);
    assert!(out.lines().count() >= 18);
    let (_, out, _) = sl2net(&["list", "twists"]);
    assert!(out.lines().any(|l| l.starts_with("K [rigid]")));
    let (code, out, _) = sl2net(&["eval", "DYrs", "beta=0.4", "r=5", "s=2.3"]);
    assert_eq!(code, 0);
    assert!(out.contains("scalar_norm") && !out.contains("NaN"));
    let (code, _, err) = sl2net(&["eval", "Unknown"]);
    assert_eq!(code, 2);
    assert!(err.contains("unknown"));
    let (code, _, err) = sl2net(&["eval", "Aqp", "q=0.5", "p=1.5", "z=0.3"]);
    assert_eq!(code, 2);
    assert!(err.contains("domain"), "{err}");
}

#[test]
fn report_matches_shipped_schema() {
    let path = std::path::Path::new(env!("CARGO_MANIFEST_DIR")).join("../../docs/report-schema.json");
    let schema: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap();
    let (_, out, _) = sl2net(&["verify", "--suite", "limits", "--points", "1"]);
    let rep: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(schema["properties"]["schema_version"]["const"], rep["schema_version"]);
    for key in schema["required"].as_array().unwrap() {
        assert!(rep.get(key.as_str().unwrap()).is_some(), "missing {key}");
    }
    let kinds: Vec<&str> = schema["$defs"]["entry"]["properties"]["outcome"]["oneOf"]
        .as_array()
        .unwrap()
        .iter()
        .map(|v| v["properties"]["kind"]["const"].as_str().unwrap())
        .collect();
    for e in rep["entries"].as_array().unwrap() {
        let kind = e["outcome"]["kind"].as_str().unwrap();
        assert!(kinds.contains(&kind));
        let i = kinds.iter().position(|k| *k == kind).unwrap();
        for key in schema["$defs"]["entry"]["properties"]["outcome"]["oneOf"][i]["required"].as_array().unwrap() {
            assert!(e["outcome"].get(key.as_str().unwrap()).is_some(), "{kind} lacks {key}");
        }
    }
}
