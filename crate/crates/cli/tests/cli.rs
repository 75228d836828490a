use std::process::{Command, Output};

fn quartic(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_quartic")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn both_methods_agree() {
    let o = quartic(&["count", "--surface", "s2", "--field", "-1", "--bound", "4", "--method", "both"]);
    assert_eq!(o.status.code(), Some(0));
    let mut rdr = csv::Reader::from_reader(o.stdout.as_slice());
    let counts: Vec<(String, u64)> = rdr
        .records()
        .map(|r| {
            let r = r.unwrap();
            (r[3].to_string(), r[4].parse().unwrap())
        })
        .collect();
    assert_eq!(counts.len(), 2);
    assert_eq!(counts[0].0, "torsor");
    assert_eq!(counts[1].0, "direct");
    assert_eq!(counts[0].1, counts[1].1);
    assert!(counts[0].1 > 0);
}

#[test]
fn zero_and_fractional_bounds() {
    let o = quartic(&["count", "--surface", "s4", "--field", "-3", "--bound", "0", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v[0]["count"], 0);
    let o = quartic(&["count", "--surface", "s1", "--field", "-1", "--bound", "1/2"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).lines().nth(1).unwrap().contains(",0,"));
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["count", "--surface", "s9", "--field", "-1", "--bound", "4"][..],
        &["count", "--surface", "s0", "--field", "-1", "--bound", "4"],
        &["count", "--surface", "s1", "--field", "-4", "--bound", "4"],
        &["count", "--surface", "s1", "--field", "-1", "--bound", "-3"],
        &["count", "--surface", "s1", "--field", "-1", "--bound", "x"],
        &["compare", "--surface", "s4", "--field", "-1", "--bounds", "1,10"],
        &["lines", "--surface", "s1", "--height", "0"],
        &["constants", "--surface", "s1", "--field", "-1", "--samples", "10"],
        &["frobnicate"],
    ] {
        let o = quartic(args);
        assert_eq!(o.status.code(), Some(1), "{args:?}");
        assert!(!o.stderr.is_empty());
    }
    assert_eq!(quartic(&["--help"]).status.code(), Some(0));
}

#[test]
fn constants_are_deterministic() {
    let args = ["constants", "--surface", "s4", "--field", "-1", "--prime-bound", "1000", "--samples", "200000", "--seed", "5"];
    let a = quartic(&args);
    let b = quartic(&args);
    let c = quartic(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let text = stdout(&a);
    assert!(text.starts_with("surface,field_d,alpha,theta0,"));
    assert!(text.contains(",5\n"));
}

#[test]
fn writes_to_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("cmp.json");
    let o = quartic(&[
        "compare", "--surface", "s4", "--field", "-1", "--bounds", "10,30", "--samples", "100000",
        "--prime-bound", "500", "--format", "json", "--out", path.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    let v: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 2);
    assert!(rows[1]["count"].as_u64().unwrap() >= rows[0]["count"].as_u64().unwrap());
    assert!(rows[0]["ratio"].as_f64().unwrap() > 0.0);
}

#[test]
fn lines_as_json() {
    let o = quartic(&["lines", "--surface", "s3"]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["surface"], "s3");
    assert_eq!(v["lines"].as_array().unwrap().len(), 2);
}

#[test]
fn selftest_passes() {
    let o = quartic(&["selftest"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert_eq!(text.lines().count(), 36);
    assert!(text.lines().all(|l| l.starts_with("ok")));
}
