use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use widthlab::report::{BallReport, ExponentReport, IntersectReport, LatticeReport, SobolevRun};
use widthlab_core::oracle::{InclusionReport, PietschStesinReport};

fn widthlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_widthlab")).args(args).env_remove("WIDTHLAB_THREADS").output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

fn scratch(name: &str, body: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

const NOT3: [&str; 15] =
    ["exponent", "--p0", "4", "--p1", "3", "--q", "2", "--s", "0.5", "--gamma", "1", "--mu", "-0.1", "--alpha", "0.5"];

#[test]
fn exponent_not3_example() {
    let o = widthlab(&NOT3);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert!((v["theta_star"].as_f64().unwrap() - 0.153061).abs() < 1e-6);
    assert_eq!(v["notation_id"], "Not3");
    assert_eq!(v["status"], "Determined");
    assert_eq!(v["remark1"], true);
}

#[test]
fn ball_exact_value() {
    let o = widthlab(&["ball", "--p", "inf", "--q", "1", "--N", "10", "--n", "4"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["value"].as_f64(), Some(6.0));
    assert_eq!(v["exact"], true);
}

#[test]
fn tie_exits_with_two() {
    let o = widthlab(&[
        "exponent", "--p0", "3", "--p1", "3", "--q", "2", "--s", "0.3333333333333333", "--gamma", "1", "--mu", "-0.5",
        "--alpha", "0.2",
    ]);
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["status"], "NoGap");
}

#[test]
fn errors_exit_with_one_and_report_json() {
    let o = widthlab(&["ball", "--p", "2", "--q", "3", "--N", "10", "--n", "8"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "OutOfRegime");

    let o = widthlab(&["exponent", "--p0", "4"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "Usage");

    let o = widthlab(&["exponent", "--config", "/nonexistent/widthlab.json"]);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "Io");

    let o = widthlab(&["frobnicate"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn config_file_and_flag_override() {
    let cfg = scratch("not3.json", r#"{"p0": 4, "p1": 3, "q": 2, "s": 0.5, "gamma": 1, "mu": -0.1, "alpha": 0.9}"#);
    let cfg = cfg.to_str().unwrap();
    let from_file = json(&widthlab(&["exponent", "--config", cfg]));
    assert_eq!(from_file["params"]["alpha_star"].as_f64(), Some(0.9));
    let overridden = widthlab(&["exponent", "--config", cfg, "--alpha", "0.5"]);
    assert_eq!(stdout(&overridden), stdout(&widthlab(&NOT3)));
}

#[test]
fn infinite_exponents_from_flags_and_files() {
    let a = widthlab(&["intersect", "--nu0", "1", "--nu1", "1000", "--p0", "inf", "--p1", "1", "--q", "2", "--N", "64", "--n", "4"]);
    assert_eq!(a.status.code(), Some(0));
    let cfg = scratch("two_ball.json", r#"{"nu0": 1, "nu1": 1000, "p0": "inf", "p1": 1, "q": 2, "N": 64, "n": 4}"#);
    let b = widthlab(&["intersect", "--config", cfg.to_str().unwrap()]);
    assert_eq!(stdout(&a), stdout(&b));
    let v = json(&a);
    assert_eq!(v["regime"]["tag"], "ReduceToP0");
    assert!((v["value"].as_f64().unwrap() - 60f64.sqrt()).abs() < 1e-12);
}

const LATTICE: [&str; 17] = [
    "lattice", "--p0", "4", "--p1", "3", "--q", "2", "--s", "2", "--gamma", "1", "--mu", "-0.1", "--alpha", "0.9", "--k",
    "0.02",
];

#[test]
fn lattice_csv_and_summary() {
    let summary = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("lattice_summary.json");
    let mut args = LATTICE.to_vec();
    let s = summary.to_str().unwrap();
    args.extend(["--n-grid", "256,1024,4096,16384", "--output", "csv", "--summary", s]);
    let o = widthlab(&args);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    let mut lines = out.lines();
    assert_eq!(lines.next(), Some("n,S,nodes,dominant_t,dominant_m"));
    assert_eq!(lines.count(), 4);
    let fit: Value = serde_json::from_str(&std::fs::read_to_string(summary).unwrap()).unwrap();
    assert!(fit["slope"].as_f64().unwrap() < 0.0);
}

#[test]
fn lattice_output_is_deterministic_across_thread_counts() {
    let mut args = LATTICE.to_vec();
    args.extend(["--n-grid", "256,512,1024,2048,4096"]);
    let runs: Vec<Vec<u8>> = ["1", "3", "8"]
        .iter()
        .map(|t| Command::new(env!("CARGO_BIN_EXE_widthlab")).args(&args).env("WIDTHLAB_THREADS", t).output().unwrap().stdout)
        .collect();
    assert!(!runs[0].is_empty());
    assert!(runs.iter().all(|r| *r == runs[0]));
    let bad = Command::new(env!("CARGO_BIN_EXE_widthlab")).args(&args).env("WIDTHLAB_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn oracle_runs_are_reproducible() {
    let ps = ["oracle", "pietsch-stesin", "--p", "inf", "--q", "2", "--N", "8", "--n", "3", "--trials", "20", "--seed", "9"];
    let a = widthlab(&ps);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, widthlab(&ps).stdout);
    let r: PietschStesinReport = serde_json::from_slice(&a.stdout).unwrap();
    assert!(r.passed && r.exact);

    let inc = [
        "oracle", "inclusion", "--nu0", "1", "--nu1", "2", "--p0", "4", "--p1", "1.5", "--q", "2", "--N", "5", "--samples",
        "3000", "--seed", "4",
    ];
    let a = widthlab(&inc);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, widthlab(&inc).stdout);
    let r: InclusionReport = serde_json::from_slice(&a.stdout).unwrap();
    assert!(r.max_ratio <= 1.0 + 1e-9);
    let mut other = inc.to_vec();
    *other.last_mut().unwrap() = "5";
    assert_ne!(a.stdout, widthlab(&other).stdout);
}

#[test]
fn sobolev_from_file_and_flags() {
    let beta = (-0.1f64 + 2.0 - 2.0 / 3.0 - 0.2).to_string();
    let flags = [
        "sobolev", "--example", "john_power", "--d", "2", "--r", "1", "--p0", "4", "--p1", "3", "--q", "2", "--beta", &beta,
        "--sigma", "0.2", "--lambda", "0.2", "--theta", "1",
    ];
    let a = widthlab(&flags);
    assert_eq!(a.status.code(), Some(0));
    let v = json(&a);
    assert!((v["exponent"]["theta_star"].as_f64().unwrap() - 0.15306122448979592).abs() < 1e-9);
    assert_eq!(v["report"]["remark1"], true);

    let body = format!(
        r#"{{"example": "john_power", "d": 2, "r": 1, "p0": 4, "p1": 3, "q": 2, "beta": {beta}, "sigma": 0.2, "lambda": 0.2, "theta": 1}}"#
    );
    let cfg = scratch("sobolev.json", &body);
    let b = widthlab(&["sobolev", "--config", cfg.to_str().unwrap()]);
    assert_eq!(a.stdout, b.stdout);

    let broken = [
        "sobolev", "--example", "log_weight", "--d", "2", "--r", "1", "--p0", "4", "--p1", "2", "--q", "2", "--beta", "0.71",
        "--sigma", "-0.2", "--lambda", "0.3", "--mu-log", "0.1", "--alpha-log", "0.4", "--nu-log", "0.2", "--gamma-log", "2",
    ];
    let o = widthlab(&broken);
    assert_eq!(o.status.code(), Some(1));
    let err: Value = serde_json::from_slice(&o.stderr).unwrap();
    assert_eq!(err["error"], "ConstraintViolated");
}

#[test]
fn json_reports_round_trip() {
    fn check<T: serde::de::DeserializeOwned + serde::Serialize>(o: &Output) {
        let parsed: T = serde_json::from_slice(&o.stdout).unwrap();
        let again = serde_json::to_string_pretty(&parsed).unwrap() + "\n";
        assert_eq!(again, stdout(o));
    }
    check::<ExponentReport>(&widthlab(&NOT3));
    check::<BallReport>(&widthlab(&["ball", "--p", "1.5", "--q", "4", "--N", "1000", "--n", "30"]));
    check::<IntersectReport>(&widthlab(&[
        "intersect", "--nu0", "1", "--nu1", "0.4", "--p0", "3", "--p1", "1.5", "--q", "4", "--N", "500", "--n", "20",
    ]));
    let mut args = LATTICE.to_vec();
    args.extend(["--n-grid", "256,1024,4096"]);
    check::<LatticeReport>(&widthlab(&args));
    check::<SobolevRun>(&widthlab(&[
        "sobolev", "--example", "growing", "--d", "1", "--r", "2", "--p0", "3", "--p1", "2", "--q", "2", "--beta", "0.5",
        "--sigma", "1", "--lambda", "-0.5",
    ]));
    // A menu with an infinite entry.
    let o = widthlab(&["exponent", "--p0", "1.5", "--p1", "3", "--q", "2", "--s", "1", "--gamma", "0", "--mu", "-0.5", "--alpha", "0.8"]);
    check::<ExponentReport>(&o);
}

#[test]
fn text_and_csv_outputs() {
    let mut args = NOT3.to_vec();
    args.extend(["--output", "text"]);
    let t = stdout(&widthlab(&args));
    assert!(t.contains("status: Determined"));
    let mut args = NOT3.to_vec();
    args.extend(["-o", "csv"]);
    let c = stdout(&widthlab(&args));
    let mut rdr = csv::Reader::from_reader(c.as_bytes());
    let header = rdr.headers().unwrap().clone();
    let row = rdr.records().next().unwrap().unwrap();
    let i = header.iter().position(|h| h == "theta_star").unwrap();
    assert!((row[i].parse::<f64>().unwrap() - 0.153061).abs() < 1e-6);
}
