use std::fs;
use std::path::Path;
use std::process::Command;

use qcdp::linfeas::{depth, Constraint, ConstraintSet};
use qcdp::BoundedRational;

fn qcdp(args: &[&str]) -> (i32, String, String) {
    let out = Command::new(env!("CARGO_BIN_EXE_qcdp")).args(args).output().unwrap();
    (
        out.status.code().unwrap(),
        String::from_utf8_lossy(&out.stdout).into_owned(),
        String::from_utf8_lossy(&out.stderr).into_owned(),
    )
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

fn summary(dir: &Path) -> serde_json::Value {
    serde_json::from_str(&fs::read_to_string(dir.join("summary.json")).unwrap()).unwrap()
}

#[test]
fn tukey_smoke_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"task":"tukey","d":1,"X":8,"n":400,"epsilon":1.0,"alpha":0.2,"beta":0.1,"trials":20,"seed":5}"#);
    let out = dir.path().join("o");
    let (code, _, err) = qcdp(&["tukey", "--config", &cfg, "--out", out.to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    let csv = fs::read_to_string(out.join("results.csv")).unwrap();
    assert_eq!(csv.lines().count(), 21);
    assert!(summary(&out)["success_rate"].as_f64().unwrap() >= 0.9);
    assert!(csv.lines().skip(1).all(|l| l.contains(",true,1.0,")), "budget columns: {csv}");
}

#[test]
fn audit_acml_default_reports_violation() {
    let dir = tempfile::tempdir().unwrap();
    let (code, stdout, err) = qcdp(&["audit-acml", "--seed", "1", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 0, "{err}");
    assert!(stdout.contains("verdict: DP violated"));
    assert_eq!(summary(dir.path())["verdicts"][0], "DP violated");
    let report = fs::read_to_string(dir.path().join("audit_report.json")).unwrap();
    assert!(report.contains("\"verdict\": \"DP violated\""));
}

#[test]
fn malformed_csv_is_an_input_error() {
    let dir = tempfile::tempdir().unwrap();
    let data = write(dir.path(), "bad.csv", "x1,x2\n1,2\n3,abc\n");
    let cfg = write(dir.path(), "c.json", &format!(r#"{{"d":2,"input":{data:?},"seed":1}}"#));
    let (code, _, err) = qcdp(&["tukey", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(err.contains("line 3"), "{err}");
    let (code, _, _) = qcdp(&["tukey", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 2, "missing seed");
    let cfg = write(dir.path(), "u.json", r#"{"seed":1,"colour":"red"}"#);
    assert_eq!(qcdp(&["tukey", "--config", &cfg]).0, 2);
}

#[test]
fn too_few_samples_everywhere_exits_with_three() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"d":2,"X":4,"n":50,"trials":3,"seed":2}"#);
    let (code, _, _) = qcdp(&["tukey", "--config", &cfg, "--out", dir.path().to_str().unwrap()]);
    assert_eq!(code, 3);
    assert_eq!(summary(dir.path())["insufficient"], 3);
}

#[test]
fn generated_files_are_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let p = |n: &str| dir.path().join(n).to_str().unwrap().to_string();
    for kind in ["cluster-points", "planted-feasible", "threshold-labeled", "counterexample"] {
        let args = ["generate", "--kind", kind, "--n", "100", "--seed", "9"];
        assert_eq!(qcdp(&[&args[..], &["--out", &p("a.csv")]].concat()).0, 0);
        assert_eq!(qcdp(&[&args[..], &["--out", &p("b.csv")]].concat()).0, 0);
        assert_eq!(fs::read(p("a.csv")).unwrap(), fs::read(p("b.csv")).unwrap(), "{kind}");
    }
    qcdp(&["generate", "--kind", "counterexample", "--n", "4", "--seed", "0", "--out", &p("c.csv")]);
    let body = fs::read_to_string(p("c.csv")).unwrap();
    let rows: Vec<&str> = body.lines().filter(|l| !l.starts_with('#')).skip(1).collect();
    assert_eq!(rows, ["1,0,-1", "1,0,-1", "1,0,-1", "-1,0,-1"]);
    qcdp(&["generate", "--kind", "planted-feasible", "--n", "100", "--d", "2", "--planted", "2,-1", "--seed", "4", "--out", &p("f.csv")]);
    let body = fs::read_to_string(p("f.csv")).unwrap();
    let cs: Vec<Constraint> = body
        .lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| {
            let v: Vec<i64> = l.split(',').map(|c| c.parse().unwrap()).collect();
            Constraint { a: v[..2].to_vec(), w: v[2] }
        })
        .collect();
    let s = ConstraintSet::new(2, 4, cs).unwrap();
    assert_eq!(depth(&s, &[BoundedRational::from(2), BoundedRational::from(-1)]).unwrap(), 100);
}

#[test]
fn reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "c.json", r#"{"d":2,"X":2,"n":1500,"epsilon":4.0,"trials":3,"seed":77}"#);
    let (a, b) = (dir.path().join("a"), dir.path().join("b"));
    for o in [&a, &b] {
        assert_eq!(qcdp(&["linfeas", "--config", &cfg, "--out", o.to_str().unwrap(), "--emit-plot-data"]).0, 0);
    }
    for f in ["results.csv", "summary.json", "plot_data.csv"] {
        assert_eq!(fs::read(a.join(f)).unwrap(), fs::read(b.join(f)).unwrap(), "{f}");
    }
}
