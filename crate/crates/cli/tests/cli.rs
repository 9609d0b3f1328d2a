use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

fn shallow(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_shallow"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exit code")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

fn gen_to(dir: &TempDir, name: &str, args: &[&str]) -> PathBuf {
    let path = dir.path().join(name);
    let mut full = vec!["gen"];
    full.extend_from_slice(args);
    full.extend_from_slice(&["-o", p(&path)]);
    let out = shallow(&full);
    assert_eq!(code(&out), 0, "gen {args:?}: {}", String::from_utf8_lossy(&out.stderr));
    path
}

fn stats(path: &Path) -> serde_json::Value {
    let out = shallow(&["stats", p(path)]);
    assert_eq!(code(&out), 0);
    serde_json::from_str(&stdout(&out)).unwrap()
}

#[test]
fn gen_writes_hypergraphs() {
    let out = shallow(&["gen", "projective-truncated", "--t", "2"]);
    assert_eq!(code(&out), 0);
    let text = stdout(&out);
    let header: Vec<&str> = text.lines().next().unwrap().split_whitespace().collect();
    assert_eq!(header[..3], ["H", "6", "4"]);

    let dir = TempDir::new().unwrap();
    let path = gen_to(&dir, "ag3.txt", &["affine-plane", "--q", "3", "--dual"]);
    let s = stats(&path);
    assert_eq!(s["n_vertices"], 12);
    assert_eq!(s["n_edges"], 9);
    assert_eq!(s["r_uniform"], 4);

    let out = shallow(&["gen", "nope"]);
    assert_eq!(code(&out), 2);
    let out = shallow(&["gen", "projective", "--t", "40"]);
    assert_eq!(code(&out), 2);
}

#[test]
fn random_gen_logs_and_reproduces_seed() {
    let a = shallow(&["gen", "random-regular", "--n", "12", "--r", "3", "--d", "2", "--seed", "5"]);
    let b = shallow(&["gen", "random-regular", "--n", "12", "--r", "3", "--d", "2", "--seed", "5"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 5"));
}

#[test]
fn solve_exit_codes() {
    let dir = TempDir::new().unwrap();
    let pt2 = gen_to(&dir, "pt2.txt", &["projective-truncated", "--t", "2"]);
    let out = shallow(&["solve", p(&pt2), "--algo", "exact", "--t", "1"]);
    assert_eq!(code(&out), 3);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["status"], "UNSAT");
    let out = shallow(&["solve", p(&pt2), "--algo", "exact", "--t", "2"]);
    assert_eq!(code(&out), 0);

    let tight = gen_to(&dir, "tight.txt", &["bipartite-tight", "--n", "13", "--t", "2"]);
    assert_eq!(code(&shallow(&["solve", p(&tight), "--algo", "bipartite-flow", "--t", "2"])), 3);
    assert_eq!(code(&shallow(&["solve", p(&tight), "--algo", "bipartite-flow", "--t", "3"])), 0);
    assert_eq!(code(&shallow(&["solve", p(&pt2), "--algo", "bipartite-flow", "--t", "2"])), 2);
    assert_eq!(code(&shallow(&["solve", p(&pt2), "--algo", "bogus", "--t", "2"])), 2);
    assert_eq!(code(&shallow(&["solve", "/nonexistent/host.txt", "--algo", "exact", "--t", "2"])), 2);

    let big = gen_to(&dir, "pt3.txt", &["projective-truncated", "--t", "3"]);
    let out = shallow(&["solve", p(&big), "--algo", "lll", "--t", "1", "--seed", "0", "--max-resamples", "50"]);
    assert_eq!(code(&out), 4);
}

#[test]
fn lll_reports_are_reproducible() {
    let dir = TempDir::new().unwrap();
    let h = gen_to(&dir, "rr.txt", &["random-regular", "--n", "60", "--r", "3", "--d", "6", "--seed", "1"]);
    let run = || shallow(&["solve", p(&h), "--algo", "lll", "--t", "3", "--seed", "11", "--no-timing"]);
    let (a, b) = (run(), run());
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    assert!(!stdout(&a).contains("elapsed_ms"));
    assert!(String::from_utf8_lossy(&a.stderr).contains("seed: 11"));
}

#[test]
fn verify_accepts_solver_selection() {
    let dir = TempDir::new().unwrap();
    let h = gen_to(&dir, "f1.txt", &["figure1"]);
    let sel = dir.path().join("sel.txt");
    let report = dir.path().join("report.json");
    let out = shallow(&[
        "solve", p(&h), "--algo", "exact", "--t", "2", "--selection-out", p(&sel), "--report", p(&report),
    ]);
    assert_eq!(code(&out), 0);
    let rep: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(rep["status"], "SAT");
    assert_eq!(code(&shallow(&["verify", p(&h), p(&sel), "--t", "2"])), 0);
    // A single edge leaves vertices uncovered.
    let one = dir.path().join("one.txt");
    std::fs::write(&one, "0\n").unwrap();
    assert_eq!(code(&shallow(&["verify", p(&h), p(&one), "--t", "2"])), 3);
    assert_eq!(code(&shallow(&["verify", p(&h), p(&one), "--t", "2", "--shallow-only"])), 0);
}

#[test]
fn bounds_subcommands() {
    let out = shallow(&["bounds", "min-t-general", "--mu", "1", "--r", "2"]);
    assert_eq!(code(&out), 0);
    let value = stdout(&out).lines().find(|l| l.starts_with("value")).unwrap().to_string();
    assert_eq!(value.split_whitespace().nth(1), Some("9"));

    let out = shallow(&["bounds", "lambert-c", "--json"]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let c: f64 = rep["value"].as_str().unwrap().parse().unwrap();
    assert!((c - 4.319).abs() < 1e-3);

    let out = shallow(&["bounds", "--json", "partition-k", "--max-delta", "3", "--r", "3", "--t", "1"]);
    let rep: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(rep["value"], "54");
    let out = shallow(&["bounds", "lambert-w", "--x", "-1"]);
    assert_eq!(code(&out), 2);
    let out = shallow(&["bounds", "rrs", "--n", "12", "--r", "4"]);
    assert!(stdout(&out).contains('5'));
}

#[test]
fn experiment_specs() {
    let dir = TempDir::new().unwrap();
    let empty = dir.path().join("empty.spec");
    std::fs::write(&empty, "# nothing\n").unwrap();
    let out = shallow(&["experiment", p(&empty)]);
    assert_eq!(code(&out), 0);
    assert_eq!(stdout(&out), format!("{}\n", shallow_core::experiment::CSV_HEADER));

    let bad = dir.path().join("bad.spec");
    std::fs::write(&bad, "kind = projective\nthis line is not a pair\n").unwrap();
    assert_eq!(code(&shallow(&["experiment", p(&bad)])), 2);

    let spec = dir.path().join("small.spec");
    std::fs::write(&spec, "kind = projective-truncated\ngen.t = 2\nt = 2\nalgo = exact, lll\nseeds = 0..2\n").unwrap();
    let csv = dir.path().join("out.csv");
    let out = shallow(&["experiment", p(&spec), "-o", p(&csv), "--workers", "2"]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.lines().skip(1).all(|l| l.contains(",SAT,")), "{text}");
    let again = shallow(&["experiment", p(&spec), "--workers", "1"]);
    assert_eq!(
        shallow_core::experiment::strip_elapsed(&text),
        shallow_core::experiment::strip_elapsed(&stdout(&again))
    );
}

#[test]
fn monte_carlo_csv() {
    let dir = TempDir::new().unwrap();
    let h = gen_to(&dir, "rr.txt", &["random-regular", "--n", "30", "--r", "3", "--d", "4", "--seed", "2"]);
    let csv = dir.path().join("mc.csv");
    let out = shallow(&["monte-carlo", p(&h), "--t", "2", "--trials", "20", "--seed", "4", "-o", p(&csv)]);
    assert_eq!(code(&out), 0);
    let text = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(text.lines().next(), Some("trial,seed,max_deg,shallow"));
    assert_eq!(text.lines().count(), 21);
}

#[test]
fn round_trip_every_kind() {
    let dir = TempDir::new().unwrap();
    let cases: [(&str, &[&str], &str, &str); 10] = [
        ("projective", &["--t", "2"], "exact", "3"),
        ("projective-truncated", &["--t", "3"], "exact", "3"),
        ("codegree-uniform", &["--n", "16", "--r", "3", "--t", "2"], "lll", "6"),
        ("codegree-partite", &["--n", "6", "--r", "3", "--t", "2"], "exact", "3"),
        ("bipartite-tight", &["--n", "13", "--t", "2"], "bipartite-flow", "3"),
        ("figure1", &[], "exact", "2"),
        ("random-regular", &["--n", "24", "--r", "3", "--d", "4", "--seed", "1"], "lll", "3"),
        ("random-partite", &["--n", "6", "--r", "2", "--d", "4", "--seed", "1"], "codegree-partite", "2"),
        ("random-girth4", &["--n", "150", "--r", "3", "--d", "5", "--seed", "1"], "lll", "3"),
        ("affine-plane", &["--q", "3", "--dual"], "exact-max", "1"),
    ];
    for (kind, args, algo, t) in cases {
        let mut gen_args = vec![kind];
        gen_args.extend_from_slice(args);
        let h = gen_to(&dir, &format!("{kind}.txt"), &gen_args);
        let s = stats(&h);
        assert!(s["n_edges"].as_u64().unwrap() > 0, "{kind}");
        let sel = dir.path().join(format!("{kind}.sel"));
        let out = shallow(&["solve", p(&h), "--algo", algo, "--t", t, "--seed", "3", "--selection-out", p(&sel)]);
        assert_eq!(code(&out), 0, "{kind}: {}", stdout(&out));
        let mut verify = vec!["verify", p(&h), p(&sel), "--t", t];
        if algo == "exact-max" {
            verify.push("--shallow-only");
        }
        assert_eq!(code(&shallow(&verify)), 0, "{kind}");
    }
}

#[test]
fn design_commands() {
    let dir = TempDir::new().unwrap();
    let d = dir.path().join("ag3.design");
    assert_eq!(code(&shallow(&["design", "construct", "--q", "3", "-o", p(&d)])), 0);
    assert_eq!(code(&shallow(&["design", "verify", p(&d)])), 0);
    let h = dir.path().join("ag3.dual");
    assert_eq!(code(&shallow(&["design", "dualize", p(&d), "-o", p(&h)])), 0);
    let s = stats(&h);
    assert_eq!((s["n_vertices"].as_u64(), s["n_edges"].as_u64()), (Some(12), Some(9)));

    let text = std::fs::read_to_string(&d).unwrap();
    let mut lines: Vec<&str> = text.lines().collect();
    let last = lines.len() - 1;
    lines[last] = "0 1 2";
    let broken = dir.path().join("broken.design");
    std::fs::write(&broken, lines.join("\n")).unwrap();
    assert_ne!(code(&shallow(&["design", "verify", p(&broken)])), 0);
    assert_eq!(code(&shallow(&["design", "construct", "--q", "6"])), 2);
}
