use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use advseq::records::InstanceRecord;

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/data").join(name)
}

fn golden(name: &str) -> String {
    let p = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(name);
    std::fs::read_to_string(p).unwrap().trim_end().to_string()
}

fn advseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_advseq")).args(args).output().unwrap()
}

fn code(o: &Output) -> i32 {
    o.status.code().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn first_line(s: &str) -> &str {
    s.lines().next().unwrap_or("")
}

fn p(name: &str) -> String {
    data(name).to_string_lossy().into_owned()
}

#[test]
fn solve_singleton_reports_both_divergences() {
    let o = advseq(&["solve", "--problem", &p("singleton.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "instance");
    assert!((v["d_fwd"].as_f64().unwrap() - 1.2).abs() < 1e-9);
    assert!((v["d_rev"].as_f64().unwrap() - 1.2).abs() < 1e-9);
    assert!(v["regions"]["theorem1"].is_object());
}

#[test]
fn solve_round_trips_through_instance_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("inst.json");
    let o = advseq(&["solve", "--problem", &p("interval.json"), "--out", out.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&out).unwrap();
    let rec: InstanceRecord = serde_json::from_str(&text).unwrap();
    let inst = rec.to_instance().unwrap();
    assert!((inst.d_fwd() - rec.d_fwd).abs() < 1e-12);
    assert!((inst.d_rev() - rec.d_rev).abs() < 1e-12);
    assert!((inst.c_fwd - rec.c_fwd).abs() < 1e-12);

    // an instance file is accepted wherever a problem file is
    let again = dir.path().join("again.json");
    let o = advseq(&["solve", "--problem", out.to_str().unwrap(), "--out", again.to_str().unwrap()]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let rec2: InstanceRecord = serde_json::from_str(&std::fs::read_to_string(&again).unwrap()).unwrap();
    assert!((rec2.d_fwd - rec.d_fwd).abs() < 1e-12);
    assert!((rec2.d_rev - rec.d_rev).abs() < 1e-12);
}

#[test]
fn exit_codes() {
    let single = p("singleton.json");
    let sim = |extra: &[&str]| {
        let mut a = vec!["simulate", "--problem", single.as_str(), "--regime", "theorem1", "--n", "4"];
        a.extend_from_slice(extra);
        code(&advseq(&a))
    };
    assert_eq!(sim(&["--trials", "0"]), 1);
    assert_eq!(sim(&["--trials", "10", "--strategy-h0", "nonsense"]), 1);
    assert_eq!(sim(&["--trials", "10"]), 0);
    assert_eq!(code(&advseq(&["simulate", "--problem", &single, "--regime", "theorem2", "--n", "4"])), 1);
    assert_eq!(code(&advseq(&["frobnicate"])), 1);
    assert_eq!(code(&advseq(&["--help"])), 0);

    let o = advseq(&["solve", "--problem", &p("bad_sum.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("sum"), "{}", stderr(&o));
    let o = advseq(&["solve", "--problem", &p("zero_mass.json")]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("absolutely continuous"), "{}", stderr(&o));
    assert_eq!(code(&advseq(&["solve", "--problem", &p("missing.json")])), 2);
    assert_eq!(code(&advseq(&["solve", "--problem", &p("overlap.json")])), 2);

    let o = advseq(&[
        "simulate",
        "--problem",
        &p("interval.json"),
        "--regime",
        "theorem2",
        "--n",
        "10",
        "--delta",
        "0.5",
        "--trials",
        "10",
    ]);
    assert_eq!(code(&o), 3, "{}", stderr(&o));

    let o = advseq(&["certify", "--problem", &single, "--ns", "40", "--horizon", "400", "--state-budget", "1000"]);
    assert_eq!(code(&o), 4, "{}", stderr(&o));
}

#[test]
fn parse_errors_carry_line_numbers() {
    let dir = tempfile::tempdir().unwrap();
    let f = dir.path().join("broken.json");
    std::fs::write(&f, "{\"alphabet_size\": 2,\n \"P\": [[0.5, 0.5]],\n \"Q\": [[0.2 0.8]]}").unwrap();
    let o = advseq(&["solve", "--problem", f.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert!(stderr(&o).contains("line 3"), "{}", stderr(&o));
}

#[test]
fn certify_interval_defaults_all_pass() {
    let o = advseq(&["certify", "--problem", &p("interval.json")]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "certify");
    assert_eq!(v["all_pass"], true);
    assert_eq!(v["failed"], 0);
    assert!(v["passed"].as_u64().unwrap() > 50);
}

#[test]
fn certify_failure_exits_5() {
    // without the horizon cut-off excluded, alpha = 0.5, n = 12 misses the bound
    let o = advseq(&[
        "certify",
        "--problem",
        &p("interval.json"),
        "--alphas",
        "0.5",
        "--ns",
        "12",
        "--truncation",
        "count-as-error",
        "--format",
        "csv",
    ]);
    assert_eq!(code(&o), 5, "{}", stderr(&o));
    assert!(stdout(&o).lines().any(|l| l.ends_with(",false")));
}

#[test]
fn golden_headers() {
    let single = p("singleton.json");
    let o = advseq(&["simulate", "--problem", &single, "--regime", "theorem1", "--n", "4", "--trials", "20"]);
    assert_eq!(first_line(&stdout(&o)), golden("simulate.header"));

    let dir = tempfile::tempdir().unwrap();
    let sweep = dir.path().join("sweep.csv");
    let o = advseq(&[
        "sweep",
        "--problem",
        &single,
        "--regime",
        "theorem1",
        "--ns",
        "4,6",
        "--trials",
        "50",
        "--out",
        sweep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let text = std::fs::read_to_string(&sweep).unwrap();
    assert_eq!(first_line(&text), golden("sweep.header"));
    assert_eq!(text.lines().count(), 3);

    let o = advseq(&["certify", "--problem", &single, "--ns", "4", "--format", "csv"]);
    assert_eq!(first_line(&stdout(&o)), golden("certify.header"));

    let inst = dir.path().join("inst.json");
    let hoef = dir.path().join("hoef.json");
    advseq(&["solve", "--problem", &single, "--out", inst.to_str().unwrap()]);
    let o = advseq(&[
        "hoeffding",
        "--problem",
        &single,
        "--r",
        "0.3",
        "--curve-points",
        "5",
        "--out",
        hoef.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let o = advseq(&[
        "report",
        "--input",
        inst.to_str().unwrap(),
        "--input",
        hoef.to_str().unwrap(),
        "--input",
        sweep.to_str().unwrap(),
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let out = stdout(&o);
    assert_eq!(first_line(&out), golden("report.header"));
    let rows: Vec<&str> = out.lines().skip(1).collect();
    assert_eq!(rows.iter().filter(|r| r.starts_with("sequential,theory")).count(), 17);
    assert_eq!(rows.iter().filter(|r| r.starts_with("fixed_length,theory")).count(), 5);
    assert_eq!(rows.iter().filter(|r| r.contains(",monte_carlo,")).count(), 2);
}

#[test]
fn hoeffding_json_contents() {
    let o = advseq(&["hoeffding", "--problem", &p("singleton.json"), "--r", "0.3", "--n", "10"]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "hoeffding");
    let s = v["s_star"].as_f64().unwrap();
    assert!(s > 0.0 && s < 1.2);
    assert!((v["threshold"].as_f64().unwrap() - 10.0 * (0.3 - s)).abs() < 1e-9);
    let curve = v["curve"].as_array().unwrap();
    assert_eq!(curve.len(), 21);
    assert!((curve[0]["s_star"].as_f64().unwrap() - 1.2).abs() < 1e-6);
    assert!(curve.last().unwrap()["s_star"].as_f64().unwrap().abs() < 1e-6);
    assert_eq!(code(&advseq(&["hoeffding", "--problem", &p("singleton.json"), "--r", "-1"])), 1);
}

#[test]
fn simulate_is_deterministic_across_runs_and_workers() {
    let base = [
        "simulate",
        "--problem",
        &p("interval.json"),
        "--regime",
        "theorem1",
        "--n",
        "6",
        "--trials",
        "3000",
        "--seed",
        "17",
        "--strategy-h0",
        "greedy_drift",
    ]
    .map(String::from)
    .to_vec();
    let run = |workers: &str| {
        let mut a: Vec<&str> = base.iter().map(String::as_str).collect();
        a.extend(["--workers", workers]);
        let o = advseq(&a);
        assert_eq!(code(&o), 0, "{}", stderr(&o));
        o.stdout
    };
    let a = run("1");
    assert_eq!(a, run("1"));
    assert_eq!(a, run("3"));
    assert_eq!(a, run("8"));

    let mut other: Vec<&str> = base.iter().map(String::as_str).collect();
    other[10] = "18";
    assert_ne!(advseq(&other).stdout, a);
}

#[test]
fn simulate_json_format() {
    let o = advseq(&[
        "simulate",
        "--problem",
        &p("singleton.json"),
        "--regime",
        "fixed",
        "--n",
        "6",
        "--r",
        "0.3",
        "--trials",
        "500",
        "--format",
        "json",
    ]);
    assert_eq!(code(&o), 0, "{}", stderr(&o));
    let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["kind"], "simulation");
    assert_eq!(v["horizon"], 6);
    assert_eq!(v["h0"]["tally"]["trials"].as_u64().or(v["h0"]["trials"].as_u64()), Some(500));
}
