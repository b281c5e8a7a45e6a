use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const FIXTURE_FLAGS: [&str; 6] = ["--nmax", "4", "--thresholds", "0.9,0.975,1", "--delta-it", "0.15"];

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_dyndens"))
}

fn data(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("examples/data").join(name)
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

#[test]
fn run_reproduces_the_worked_example() {
    let fixture = data("fixture.updates");
    let mut args = vec!["run", fixture.to_str().unwrap()];
    args.extend(FIXTURE_FLAGS);
    let o = run(&args);
    assert!(o.status.success(), "{}", stderr(&o));
    let lines: Vec<String> = stdout(&o).lines().map(String::from).collect();
    let tail: Vec<&str> = lines.iter().filter(|l| l.starts_with("10 ")).map(String::as_str).collect();
    assert_eq!(tail, ["10 GAIN 1.023333333 1,2,3", "10 GAIN 1.002333333 1,2,3,4"]);
    assert!(stderr(&o).starts_with("updates 11 events 6 "), "{}", stderr(&o));
}

#[test]
fn run_is_byte_deterministic_and_writes_reports() {
    let dir = TempDir::new().unwrap();
    let stream = dir.path().join("s.updates");
    let o = run(&[
        "gen",
        "--recipe",
        "fuzz",
        "--vertices",
        "10",
        "--updates",
        "500",
        "--seed",
        "4",
        "-o",
        stream.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let mut outputs = Vec::new();
    for i in 0..2 {
        let ev = dir.path().join(format!("ev{i}"));
        let rep = dir.path().join(format!("rep{i}"));
        let o = run(&[
            "run",
            stream.to_str().unwrap(),
            "--threshold",
            "0.05",
            "--nmax",
            "4",
            "--expand",
            "--checkpoint-every",
            "100",
            "-o",
            ev.to_str().unwrap(),
            "--report",
            rep.to_str().unwrap(),
        ]);
        assert!(o.status.success(), "{}", stderr(&o));
        outputs.push((fs::read(&ev).unwrap(), fs::read_to_string(&rep).unwrap()));
    }
    assert_eq!(outputs[0], outputs[1]);
    assert!(!outputs[0].0.is_empty());
    let report = &outputs[0].1;
    assert_eq!(report.matches("# after ").count(), 5);
    assert!(report.contains("# final\n"));
}

#[test]
fn empty_input_gives_empty_events() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty");
    fs::write(&empty, "").unwrap();
    let o = run(&["run", empty.to_str().unwrap()]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    assert!(stderr(&o).starts_with("updates 0 events 0 peak_entries 0"));
}

#[test]
fn malformed_line_aborts_with_its_number() {
    let dir = TempDir::new().unwrap();
    let bad = dir.path().join("bad");
    fs::write(&bad, "0 1 2 0.5\n1 2 3 0.5\n3 7 7 0.5\n").unwrap();
    let o = run(&["run", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("line 3: self-loop"), "{}", stderr(&o));
}

#[test]
fn invalid_config_is_rejected() {
    let fixture = data("fixture.updates");
    let o = run(&["run", fixture.to_str().unwrap(), "--delta-it", "150%"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("delta_it"), "{}", stderr(&o));
    let o = run(&["run", fixture.to_str().unwrap(), "--nmax", "4", "--thresholds", "0.9,1", "--delta-it", "0.15"]);
    assert!(stderr(&o).contains("expected 3 explicit thresholds"), "{}", stderr(&o));
}

#[test]
fn verify_passes_on_fuzz_stream() {
    let dir = TempDir::new().unwrap();
    let stream = dir.path().join("f.updates");
    let o = run(&[
        "gen",
        "--recipe",
        "fuzz",
        "--vertices",
        "10",
        "--updates",
        "200",
        "--max-magnitude",
        "1.2",
        "-o",
        stream.to_str().unwrap(),
    ]);
    assert!(o.status.success());
    for density in ["avgweight", "avgdegree", "sqrtdens"] {
        let o = run(&[
            "verify",
            stream.to_str().unwrap(),
            "--density",
            density,
            "--nmax",
            "4",
            "--delta-it",
            "20%",
            "--vertices",
            "10",
        ]);
        assert!(o.status.success(), "{}{}", stdout(&o), stderr(&o));
        assert_eq!(stdout(&o).trim(), "PASS 200 updates, 200 checkpoints");
    }
}

#[test]
fn gen_is_seeded() {
    let a = run(&["gen", "--vertices", "500", "--updates", "300", "--sets", "5", "--seed", "9"]);
    let b = run(&["gen", "--vertices", "500", "--updates", "300", "--sets", "5", "--seed", "9"]);
    let c = run(&["gen", "--vertices", "500", "--updates", "300", "--sets", "5", "--seed", "10"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(stdout(&a).lines().count(), 300);
    let o = run(&["gen", "--vertices", "20", "--sets", "5", "--set-size", "10"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn bench_prints_one_row_per_grid_point() {
    let dir = TempDir::new().unwrap();
    let stream = dir.path().join("td.updates");
    let o = run(&[
        "gen",
        "--recipe",
        "too-dense",
        "--vertices",
        "2000",
        "--updates",
        "100",
        "--sets",
        "2",
        "--set-size",
        "4",
        "-o",
        stream.to_str().unwrap(),
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["bench", stream.to_str().unwrap(), "--runs", "1"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let rows: Vec<String> = stdout(&o).lines().map(String::from).collect();
    assert_eq!(rows.len(), 2);
    assert!(rows[0].starts_with("config\t"));
    assert!(rows[1].ends_with("\ttrue"), "{}", rows[1]);
    let o = run(&["bench", stream.to_str().unwrap(), "--runs", "1", "--star-only", "--sweep-nmax", "4,5"]);
    assert_eq!(stdout(&o).lines().count(), 3);
}

#[test]
fn ingest_then_run_then_top() {
    let dir = TempDir::new().unwrap();
    let updates = dir.path().join("news.updates");
    let dict = dir.path().join("news.dict");
    let events = dir.path().join("news.events");
    let docs = data("news.docs");
    let o = run(&[
        "ingest",
        docs.to_str().unwrap(),
        "--measure",
        "chi2",
        "--mean-life-secs",
        "7200",
        "-o",
        updates.to_str().unwrap(),
        "--dictionary",
        dict.to_str().unwrap(),
        "--staleness-every",
        "5",
    ]);
    assert!(o.status.success(), "{}", stderr(&o));
    assert!(stderr(&o).contains("staleness:"));
    let names = fs::read_to_string(&dict).unwrap();
    assert_eq!(names.lines().next(), Some("obama"));
    let o =
        run(&["run", updates.to_str().unwrap(), "--threshold", "0.3", "--nmax", "4", "-o", events.to_str().unwrap()]);
    assert!(o.status.success(), "{}", stderr(&o));
    let o = run(&["top", events.to_str().unwrap(), "--dictionary", dict.to_str().unwrap(), "-k", "3"]);
    assert!(o.status.success(), "{}", stderr(&o));
    let top = stdout(&o);
    assert!(!top.is_empty());
    assert!(top.lines().count() <= 3);
    assert!(top.lines().next().unwrap().ends_with(char::is_alphabetic), "{top}");
}

#[test]
fn half_life_and_mean_life_conflict() {
    let docs = data("news.docs");
    let o = run(&["ingest", docs.to_str().unwrap(), "--mean-life-secs", "10", "--half-life-secs", "10"]);
    assert!(!o.status.success());
    let o = run(&["ingest", docs.to_str().unwrap(), "--half-life-secs", "3600"]);
    assert!(o.status.success(), "{}", stderr(&o));
}

#[test]
fn top_rejects_bad_penalty() {
    let dir = TempDir::new().unwrap();
    let ev = dir.path().join("ev");
    fs::write(&ev, "0 GAIN 1.000000000 1,2\n").unwrap();
    let o = run(&["top", ev.to_str().unwrap(), "--penalty", "1.5"]);
    assert_eq!(o.status.code(), Some(2));
    let o = run(&["top", ev.to_str().unwrap()]);
    assert_eq!(stdout(&o), "1.000000000 1.000000000 1.000 1,2\n");
}
