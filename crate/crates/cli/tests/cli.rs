use std::process::{Command, Output};

fn mmtr(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mmtr"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = mmtr(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

#[test]
fn correlator_values() {
    assert_eq!(stdout(&["correlator", "-g", "0", "-a", "1,1,1"]), "4*t^2\n");
    assert_eq!(stdout(&["correlator", "-g", "1", "-a", "1"]), "-1/8\n");
    assert_eq!(stdout(&["correlator", "-g", "0", "-a", "2"]), "t^3\n");
    let js: serde_json::Value = serde_json::from_str(&stdout(&[
        "correlator",
        "-g",
        "0",
        "-a",
        "2,2",
        "--format",
        "json",
    ]))
    .unwrap();
    assert_eq!(js["value"], "18*t^4");
}

#[test]
fn usage_errors_exit_two() {
    for args in [
        &["correlator", "-g", "0", "-a", "0,1"][..],
        &["sequences", "nope", "3"],
        &["verify", "everything"],
        &["table", "-g", "0", "--bound", "0"],
        &["npoint", "-g", "0", "-n", "2"],
    ] {
        assert_eq!(mmtr(args).status.code(), Some(2), "{args:?}");
    }
}

#[test]
fn table_csv_rows_match_correlators() {
    let csv = stdout(&["table", "-g", "0", "--bound", "3", "--format", "csv"]);
    let mut r = csv::Reader::from_reader(csv.as_bytes());
    let rows: Vec<csv::StringRecord> = r.records().map(|x| x.unwrap()).collect();
    let keys: Vec<&str> = rows.iter().map(|row| row.get(1).unwrap()).collect();
    assert_eq!(keys, ["1", "2", "3", "1,1", "1,2", "1,1,1"]);
    for row in &rows {
        let single = stdout(&["correlator", "-g", "0", "-a", row.get(1).unwrap()]);
        assert_eq!(single.trim_end(), row.get(2).unwrap());
    }
    let js: serde_json::Value = serde_json::from_str(&stdout(&[
        "table", "-g", "1", "--bound", "2", "--format", "json",
    ]))
    .unwrap();
    let a: Vec<_> = js
        .as_array()
        .unwrap()
        .iter()
        .map(|r| r["a"].clone())
        .collect();
    assert_eq!(
        serde_json::Value::Array(a),
        serde_json::json!([[1], [2], [1, 1]])
    );
}

#[test]
fn table_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g0.csv");
    let p = path.to_str().unwrap();
    assert_eq!(
        stdout(&["table", "-g", "0", "--bound", "2", "--format", "csv", "-o", p]),
        ""
    );
    assert!(std::fs::read_to_string(&path)
        .unwrap()
        .starts_with("g,a,value\n"));
    let bad = dir.path().join("missing/dir/out.csv");
    let out = mmtr(&[
        "table",
        "-g",
        "0",
        "--bound",
        "2",
        "-o",
        bad.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn sequences() {
    assert_eq!(
        stdout(&["sequences", "A001791", "6"]),
        "1 4 15 56 210 792\n"
    );
    assert_eq!(
        stdout(&["sequences", "A007946", "6"]),
        "2 9 36 140 540 2079\n"
    );
    assert_eq!(
        stdout(&["sequences", "catalan", "7"]),
        "1 2 5 14 42 132 429\n"
    );
}

#[test]
fn verify_suites() {
    let js: serde_json::Value = serde_json::from_str(&stdout(&[
        "verify", "main1", "--max", "2", "--format", "json",
    ]))
    .unwrap();
    assert_eq!(js["suite"], "main1");
    let checks = js["checks"].as_array().unwrap();
    assert!(checks
        .iter()
        .all(|c| c["pass"] == true && c["millis"].is_u64()));
    let names: Vec<_> = checks
        .iter()
        .map(|c| c["name"].as_str().unwrap().to_string())
        .collect();
    assert!(names.contains(&"main1 (1,2)".to_string()));

    let text = stdout(&["verify", "bridge"]);
    for case in [
        "template (0,3)",
        "template (0,4)",
        "template (1,1)",
        "psi consistency",
    ] {
        assert!(text.contains(&format!("PASS {case}")), "{text}");
    }
    let text = stdout(&["verify", "closed-forms"]);
    assert!(text.contains("PASS sequence A007946"), "{text}");
}

#[test]
fn deterministic_output() {
    let args = ["npoint", "-g", "1", "-n", "2"];
    assert_eq!(stdout(&args), stdout(&args));
    assert_eq!(
        stdout(&["omega", "-g", "1", "-n", "1", "--curve", "airy"]),
        "-1/8*z1^-4\n"
    );
    let l = stdout(&["ladders", "--k-max", "2"]);
    assert!(l.contains("\"3\": \"1/8*s^-1\""), "{l}");
}
