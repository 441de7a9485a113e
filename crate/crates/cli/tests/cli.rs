use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use goldbach_cesaro_cli::report::{from_json, to_json, VerificationReport};
use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../data/zeros")
        .join(name)
}

fn golden(name: &str) -> String {
    std::fs::read_to_string(
        PathBuf::from(env!("CARGO_MANIFEST_DIR"))
            .join("tests/golden")
            .join(name),
    )
    .unwrap()
}

fn gcesaro(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gcesaro"))
        .args(args)
        .output()
        .unwrap()
}

fn stdout(out: &Output) -> String {
    assert!(
        out.status.success(),
        "failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

fn close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-12 * a.abs().max(b.abs())
}

// same keys in the same order; equal non-numbers; reals within 1e-12; elapsed_* ignored
fn assert_json_matches(got: &Value, want: &Value, at: &str) {
    match (got, want) {
        (Value::Object(g), Value::Object(w)) => {
            let gk: Vec<&String> = g.keys().collect();
            let wk: Vec<&String> = w.keys().collect();
            assert_eq!(gk, wk, "keys at {at}");
            for (k, wv) in w {
                if !k.starts_with("elapsed_") {
                    assert_json_matches(&g[k], wv, &format!("{at}.{k}"));
                }
            }
        }
        (Value::Array(g), Value::Array(w)) => {
            assert_eq!(g.len(), w.len(), "length at {at}");
            for (i, (gv, wv)) in g.iter().zip(w).enumerate() {
                assert_json_matches(gv, wv, &format!("{at}[{i}]"));
            }
        }
        (Value::Number(g), Value::Number(w)) => {
            assert!(
                close(g.as_f64().unwrap(), w.as_f64().unwrap()),
                "{at}: {g} vs {w}"
            );
        }
        _ => assert_eq!(got, want, "at {at}"),
    }
}

fn assert_csv_matches(got: &str, want: &str) {
    let g: Vec<&str> = got.lines().collect();
    let w: Vec<&str> = want.lines().collect();
    assert_eq!(g[0], w[0], "header");
    assert_eq!(g.len(), w.len(), "row count");
    let header: Vec<&str> = w[0].split(',').collect();
    let mut rg = csv::Reader::from_reader(got.as_bytes());
    let mut rw = csv::Reader::from_reader(want.as_bytes());
    for (a, b) in rg.records().zip(rw.records()) {
        let (a, b) = (a.unwrap(), b.unwrap());
        for (i, (x, y)) in a.iter().zip(b.iter()).enumerate() {
            if header[i].starts_with("elapsed_") {
                continue;
            }
            match (x.parse::<f64>(), y.parse::<f64>()) {
                (Ok(p), Ok(q)) => assert!(close(p, q), "{}: {x} vs {y}", header[i]),
                _ => assert_eq!(x, y, "{}", header[i]),
            }
        }
    }
}

fn verify_args(n: &str) -> Vec<String> {
    [
        "verify",
        "--n",
        n,
        "--k",
        "2",
        "--zeros",
        path(&data("first100.txt")),
    ]
    .iter()
    .map(|s| s.to_string())
    .collect()
}

fn run_owned(args: &[String]) -> Output {
    gcesaro(&args.iter().map(String::as_str).collect::<Vec<_>>())
}

#[test]
fn verify_json_golden() {
    let out = stdout(&run_owned(&verify_args("2000")));
    let got: Value = serde_json::from_str(&out).unwrap();
    let want: Value = serde_json::from_str(&golden("verify.json")).unwrap();
    assert_json_matches(&got, &want, "$");
}

#[test]
fn verify_csv_golden() {
    let mut args = verify_args("2000");
    args.extend(["--format".into(), "csv".into()]);
    assert_csv_matches(&stdout(&run_owned(&args)), &golden("verify.csv"));
}

#[test]
fn scan_csv_golden() {
    let z = data("first100.txt");
    let out = gcesaro(&[
        "scan",
        "--n-min",
        "500",
        "--n-max",
        "4000",
        "--points",
        "4",
        "--k",
        "2",
        "--zeros",
        path(&z),
    ]);
    let text = stdout(&out);
    assert_eq!(
        text.lines().next().unwrap(),
        "N,lhs,main,single,double,r0,r1,r2,tail_single,tail_double"
    );
    assert_eq!(text.lines().count(), 5);
    assert_csv_matches(&text, &golden("scan.csv"));
}

#[test]
fn stilde_golden() {
    let z = data("first100.txt");
    let base = [
        "stilde",
        "--a",
        "0.2",
        "--y-grid",
        "0,0.1,-0.1,1",
        "--zeros",
        path(&z),
    ];
    let out = gcesaro(&base);
    assert!(String::from_utf8_lossy(&out.stderr).starts_with("max ratio "));
    assert_csv_matches(&stdout(&out), &golden("stilde.csv"));
    let mut json = base.to_vec();
    json.extend(["--format", "json"]);
    let got: Value = serde_json::from_str(&stdout(&gcesaro(&json))).unwrap();
    assert_json_matches(
        &got,
        &serde_json::from_str(&golden("stilde.json")).unwrap(),
        "$",
    );
}

#[test]
fn probe_golden() {
    let z = data("first100.txt");
    let out = gcesaro(&[
        "probe",
        "--alpha",
        "2",
        "--zeros",
        path(&z),
        "--format",
        "csv",
    ]);
    assert_csv_matches(&stdout(&out), &golden("probe.csv"));
    let got: Value = serde_json::from_str(&stdout(&gcesaro(&[
        "probe",
        "--alpha",
        "2",
        "--zeros",
        path(&z),
    ])))
    .unwrap();
    assert_json_matches(
        &got,
        &serde_json::from_str(&golden("probe.json")).unwrap(),
        "$",
    );
}

#[test]
fn laplace_check_golden() {
    let text = stdout(&gcesaro(&[
        "laplace-check",
        "--s",
        "2",
        "--aa",
        "1",
        "--d",
        "1",
    ]));
    let got: Value = serde_json::from_str(&text).unwrap();
    assert_json_matches(
        &got,
        &serde_json::from_str(&golden("laplace.json")).unwrap(),
        "$",
    );
    let exact = (-1f64).exp();
    assert!((got["quadrature_re"].as_f64().unwrap() - exact).abs() < 1e-6);
    assert!(got["abs_diff"].as_f64().unwrap() < 1e-6);
}

#[test]
fn empty_table_report() {
    let dir = tempfile::tempdir().unwrap();
    let empty = dir.path().join("empty.txt");
    std::fs::write(&empty, "# no zeros\n").unwrap();
    let out = stdout(&gcesaro(&[
        "verify",
        "--n",
        "100",
        "--k",
        "2",
        "--zeros",
        path(&empty),
    ]));
    let r: VerificationReport = from_json(&out).unwrap();
    assert_eq!(r.single_sum, 0.0);
    assert_eq!(r.double_sum, 0.0);
    let expected = r.lhs - 10_000.0 / 24.0;
    assert_eq!(r.r0, expected);
    assert_eq!(r.r1, expected);
    assert_eq!(r.r2, expected);
}

#[test]
fn report_identities_and_round_trip() {
    let out = stdout(&run_owned(&verify_args("1500")));
    let r: VerificationReport = from_json(&out).unwrap();
    assert_eq!(r.r0, r.lhs - r.main_term);
    assert_eq!(r.r1, r.r0 - r.single_sum);
    assert_eq!(r.r2, r.r1 - r.double_sum);
    assert_eq!(r.rhs_total, r.main_term + r.single_sum + r.double_sum);
    assert_eq!(to_json(&r).unwrap(), out);
}

#[test]
fn unnormalized_scales_by_n_to_the_k() {
    let norm: VerificationReport = from_json(&stdout(&run_owned(&verify_args("1000")))).unwrap();
    let mut args = verify_args("1000");
    args.push("--unnormalized".into());
    let raw: VerificationReport = from_json(&stdout(&run_owned(&args))).unwrap();
    assert!(!raw.normalized);
    assert!(close(raw.lhs / 1e6, norm.lhs) || (raw.lhs / 1e6 - norm.lhs).abs() < 1e-12 * norm.lhs);
    assert!((raw.r2 / 1e6 - norm.r2).abs() < 1e-9 * norm.r2.abs());
}

#[test]
fn single_point_scan_equals_verify() {
    let z = data("first100.txt");
    let scan = stdout(&gcesaro(&[
        "scan",
        "--n-min",
        "1200",
        "--n-max",
        "1200",
        "--points",
        "1",
        "--k",
        "2",
        "--zeros",
        path(&z),
    ]));
    let r: VerificationReport = from_json(&stdout(&run_owned(&verify_args("1200")))).unwrap();
    let mut rows = csv::Reader::from_reader(scan.as_bytes());
    let row = rows.records().next().unwrap().unwrap();
    let vals: Vec<f64> = row.iter().map(|v| v.parse().unwrap()).collect();
    assert_eq!(
        vals,
        vec![
            1200.0,
            r.lhs,
            r.main_term,
            r.single_sum,
            r.double_sum,
            r.r0,
            r.r1,
            r.r2,
            r.tail_single,
            r.tail_double
        ]
    );
}

#[test]
fn reports_identical_across_thread_counts() {
    let mut reports: Vec<Value> = Vec::new();
    for t in ["1", "2", "8"] {
        let mut args = verify_args("3000");
        args.extend(["--threads".into(), t.into()]);
        let mut v: Value = serde_json::from_str(&stdout(&run_owned(&args))).unwrap();
        for key in ["elapsed_lhs_s", "elapsed_rhs_s", "elapsed_total_s"] {
            v.as_object_mut().unwrap().remove(key);
        }
        reports.push(v);
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
}

#[test]
fn out_flag_writes_file() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("report.json");
    let mut args = verify_args("800");
    args.extend(["--out".into(), path(&target).into()]);
    let out = run_owned(&args);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: VerificationReport = from_json(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(r.n, 800);
}

#[test]
fn exit_codes() {
    let z = data("first100.txt");
    let regime = gcesaro(&["verify", "--n", "1000", "--k", "0.4", "--zeros", path(&z)]);
    assert_eq!(regime.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&regime.stderr).contains("regime"));

    let low_k = gcesaro(&["verify", "--n", "1000", "--k", "0.8", "--zeros", path(&z)]);
    assert_eq!(low_k.status.code(), Some(2));
    let allowed = gcesaro(&[
        "verify",
        "--n",
        "1000",
        "--k",
        "0.8",
        "--zeros",
        path(&z),
        "--experimental-low-k",
    ]);
    assert!(allowed.status.success());

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "14.13\nxyz\n").unwrap();
    let parse = gcesaro(&["verify", "--n", "100", "--k", "2", "--zeros", path(&bad)]);
    assert_eq!(parse.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&parse.stderr).contains("line 2"));

    let missing = gcesaro(&[
        "probe",
        "--alpha",
        "2",
        "--zeros",
        path(&dir.path().join("nope.txt")),
    ]);
    assert_eq!(missing.status.code(), Some(3));

    let too_many = gcesaro(&[
        "verify",
        "--n",
        "100",
        "--k",
        "2",
        "--zeros",
        path(&z),
        "--max-zeros",
        "101",
    ]);
    assert_eq!(too_many.status.code(), Some(2));

    let truncation = gcesaro(&[
        "stilde",
        "--a",
        "0.05",
        "--y-grid",
        "5",
        "--zeros",
        path(&z),
    ]);
    assert_eq!(truncation.status.code(), Some(2));
}
