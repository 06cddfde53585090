use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("testdata").join(name)
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memcompute")).args(args).output().expect("binary runs")
}

fn run_with(args: &[&str], env: (&str, &str)) -> Output {
    Command::new(env!("CARGO_BIN_EXE_memcompute")).args(args).env(env.0, env.1).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("bad json {e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn path(name: &str) -> String {
    data(name).to_str().unwrap().to_string()
}

#[test]
fn solve_brute_tiny() {
    let out = run(&["solve", "--set", &path("tiny.txt"), "--target", "3", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["decision"], true);
    assert_eq!(v["count"], 1);
    assert_eq!(v["n"], 2);
    assert_eq!(v["f_max"], 3);
    assert_eq!(v["N"], 7);
    assert!(v["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn solve_false_exits_three() {
    for method in ["goertzel", "fft", "dp", "brute"] {
        let out = run(&["solve", "--set", &path("tiny.txt"), "--target", "-1", "--method", method]);
        assert_eq!(out.status.code(), Some(3), "{method}");
        assert_eq!(json(&out)["decision"], false);
    }
}

#[test]
fn solve_dp_has_no_count() {
    let out = run(&["solve", "--set", &path("triple.json"), "--target", "5", "--method", "dp"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(json(&out)["count"].is_null());
}

#[test]
fn solve_recover() {
    for method in ["goertzel", "fft", "dp", "brute"] {
        let out = run(&["solve", "--set", &path("triple.json"), "--target", "3", "--method", method, "--recover"]);
        assert_eq!(out.status.code(), Some(0));
        let subset: Vec<i64> = serde_json::from_value(json(&out)["subset"].clone()).unwrap();
        assert_eq!(subset, vec![3], "{method}");
    }
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(run(&["solve", "--set", &path("missing.txt"), "--target", "3"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--set", &path("tiny.txt")]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--set", &path("tiny.txt"), "--target", "x"]).status.code(), Some(1));
    assert_eq!(run(&["solve", "--set", &path("tiny.txt"), "--target", "1", "--method", "magic"]).status.code(), Some(1));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(run(&["spectrum", "--set", &path("tiny.txt"), "--window", "3"]).status.code(), Some(1));
    assert_eq!(run(&["umm", "--tm", &path("tiny.txt")]).status.code(), Some(1));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

#[test]
fn parse_error_reports_line() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.txt");
    std::fs::write(&bad, "1\n2\nthree\n").unwrap();
    let out = run(&["solve", "--set", bad.to_str().unwrap(), "--target", "3"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 3"), "{}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn duplicates_need_flag() {
    let dir = tempfile::tempdir().unwrap();
    let dup = dir.path().join("dup.txt");
    std::fs::write(&dup, "2\n2\n").unwrap();
    let p = dup.to_str().unwrap();
    assert_eq!(run(&["solve", "--set", p, "--target", "4"]).status.code(), Some(1));
    let out = run(&["solve", "--set", p, "--target", "4", "--allow-duplicates", "--method", "brute"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["count"], 1);
}

#[test]
fn budget_env_and_flag() {
    let args = ["solve", "--set", &path("triple.json"), "--target", "3", "--method", "fft"];
    assert_eq!(run_with(&args, ("MEMCOMPUTE_BUDGET_SAMPLES", "5")).status.code(), Some(2));
    assert_eq!(run_with(&args, ("MEMCOMPUTE_BUDGET_SAMPLES", "13")).status.code(), Some(0));
    let mut flagged = args.to_vec();
    flagged.extend(["--budget-samples", "12"]);
    assert_eq!(run(&flagged).status.code(), Some(2));
}

#[test]
fn spectrum_window_rows() {
    let out = run(&["spectrum", "--set", &path("tiny.txt"), "--window", "1:3"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "f,count\n1,1\n2,1\n3,1\n");

    let out = run(&["spectrum", "--set", &path("tiny.txt"), "--window", "40:42"]);
    assert_eq!(stdout(&out), "f,count\n40,0\n41,0\n42,0\n");

    let out = run(&["spectrum", "--set", &path("triple.json"), "--window", "-1:6", "--method", "fft", "--format", "json"]);
    let v = json(&out);
    assert_eq!(v["3"], 2);
    assert_eq!(v["-1"], 0);
}

#[test]
fn spectrum_file_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.csv");
    let b = dir.path().join("b.csv");
    for (file, threads) in [(&a, "1"), (&b, "2")] {
        let out = run(&["--threads", threads, "spectrum", "--set", &path("triple.json"), "--out", file.to_str().unwrap()]);
        assert_eq!(out.status.code(), Some(0));
    }
    let text = std::fs::read(&a).unwrap();
    assert_eq!(text, std::fs::read(&b).unwrap());
    assert!(String::from_utf8(text).unwrap().starts_with("f,count\n-6,0\n"));
}

#[test]
fn bench_rows() {
    let out = run(&["bench", "--sizes", "8:10", "--max-abs", "200", "--seed", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let text = stdout(&out);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "n,p,method,ms,agree");
    assert_eq!(lines.len(), 1 + 3 * 2);
    for line in &lines[1..] {
        let cols: Vec<&str> = line.split(',').collect();
        assert!(cols[3].parse::<f64>().unwrap() > 0.0);
        assert_eq!(cols[4], "true");
    }
    let again = run(&["bench", "--sizes", "8:10", "--max-abs", "200", "--seed", "3"]);
    let strip = |t: &str| t.lines().map(|l| l.split(',').enumerate().filter(|(i, _)| *i != 3).map(|(_, c)| c).collect::<Vec<_>>().join(",")).collect::<Vec<_>>();
    assert_eq!(strip(&text), strip(&stdout(&again)));
}

#[test]
fn umm_increment() {
    let out = run(&["umm", "--tm", &path("inc.json"), "--tape", "11"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["tape"], "111");
    assert_eq!(v["halted"], true);
    let out = run(&["umm", "--tm", &path("inc.json"), "--tape", "1x"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn dcram_tiny() {
    let dir = tempfile::tempdir().unwrap();
    let trace = dir.path().join("trace.csv");
    let out = run(&["dcram", "--set", &path("tiny.txt"), "--target", "3", "--trace", trace.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["found"], true);
    assert!(std::fs::read_to_string(&trace).unwrap().starts_with("iteration,row,column,value\n"));
    let out = run(&["dcram", "--set", &path("triple.json"), "--target", "7"]);
    assert_eq!(out.status.code(), Some(3));
    let out = run(&["dcram", "--set", &path("triple.json"), "--target", "3", "--max-n", "2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn cvm_window_and_samples() {
    let dir = tempfile::tempdir().unwrap();
    let samples = dir.path().join("samples.csv");
    let spec = dir.path().join("spec.csv");
    let out = run(&[
        "cvm",
        "--set",
        &path("triple.json"),
        "--window",
        "3:3",
        "--emit-samples",
        samples.to_str().unwrap(),
        "--emit-spectrum",
        spec.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["counts"]["3"], 2);
    let rows = std::fs::read_to_string(&samples).unwrap();
    assert!(rows.starts_with("k,t,re,im\n"));
    assert_eq!(rows.lines().count(), 1 + 13);
    assert_eq!(std::fs::read_to_string(&spec).unwrap(), "f,count\n3,2\n");
}

#[test]
fn overhead_report() {
    let out = run(&["overhead", "--set", &path("triple.json")]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["mass"], 8.0);
    assert_eq!(v["support_size"], 7);
    assert_eq!(v["readout_count"], 6);
    assert_eq!(v["self_information_bits"], 3.0);
}

#[test]
fn benchmark_set_matches_dp() {
    let set = path("g27.txt");
    for target in ["0", "-39482145", "25149938"] {
        let spectral = run(&["solve", "--set", &set, "--target", target, "--method", "goertzel"]);
        let dp = run(&["solve", "--set", &set, "--target", target, "--method", "dp"]);
        assert!(matches!(spectral.status.code(), Some(0 | 3)));
        assert_eq!(spectral.status.code(), dp.status.code(), "target {target}");
        assert_eq!(json(&spectral)["decision"], json(&dp)["decision"]);
        assert_eq!(json(&spectral)["N"], 78_964_291);
    }
}
