use std::fs;

use dmfprep::cli::run_with;
use dmfprep::fixtures;
use dmfprep::report::PlanDocument;

fn run(args: &[&str]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let mut argv = vec!["dmfprep"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

const TS1: &str = "5/16,11/16,14/16,16/16,14/16,11/16,5/16";

#[test]
fn plan_prints_a_stats_line() {
    let (code, out, _) = run(&["plan", "--algorithm", "emdp", "--targets", TS1]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S=5 B=3 W=1 steps=7"), "{out}");

    let (code, out, _) = run(&["plan", "--algorithm", "twowaymix", "--targets", "5/16"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S=2 B=3 W=4 steps=4"), "{out}");
}

#[test]
fn plan_writes_a_reloadable_document() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("plan.json");
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["plan", "--targets", TS1, "--output", p]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S=5"));
    let doc = PlanDocument::parse(&fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc.algorithm.as_deref(), Some("emdp"));
    assert_eq!(doc.plan.targets, fixtures::ts1());

    let (code, out, _) = run(&["validate", "--plan", p]);
    assert_eq!(code, 0, "{out}");
    assert!(out.starts_with("valid: S=5 B=3 W=1 steps=7"));

    let (code, out, _) = run(&["plan", "--targets", "1/2,1/2", "--format", "json"]);
    assert_eq!(code, 0);
    assert!(PlanDocument::parse(&out).is_ok());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        &["plan", "--targets", ""][..],
        &["plan", "--targets", "1/2,3/7"],
        &["plan", "--algorithm", "twowaymix", "--targets", "1/2,1/4"],
        &["plan"],
        &["frobnicate"],
        &["compare"],
        &["compare", "--series", "ts9"],
        &["gen-series", "--family", "linear", "--a", "1/4", "--n", "3"],
        &["plan", "--targets", "1/64", "--precision", "4"],
    ] {
        let (code, _, err) = run(args);
        assert_eq!(code, 1, "{args:?}: {err}");
        assert!(!err.is_empty());
    }
    let (_, _, err) = run(&["plan", "--targets", "1/2,\n1/4, 3/7"]);
    assert!(err.contains("line 2, column 6"), "{err}");
}

#[test]
fn help_exits_zero() {
    let (code, out, _) = run(&["--help"]);
    assert_eq!(code, 0);
    for sub in ["plan", "compare", "oracle", "validate", "gen-series", "export-dot"] {
        assert!(out.contains(sub), "{sub}");
    }
}

#[test]
fn targets_from_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("ts.txt");
    fs::write(&path, "# TS3\n31/64\n55/64\n1\n51/64\n").unwrap();
    let (code, out, _) = run(&["plan", "--targets", path.to_str().unwrap(), "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("algorithm,S,B,W,steps,peak\nemdp,"));
}

#[test]
fn validate_reports_violations_with_exit_two() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    let mut plan = fixtures::ts1_witness();
    plan.steps[7].inputs[1] = dmfprep::DropletSource::StepOutput { step: 0, output: 0 };
    fs::write(&path, PlanDocument { stats: None, ..PlanDocument::new(plan, None) }.render()).unwrap();
    let (code, out, _) = run(&["validate", "--plan", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("already consumed"), "{out}");

    // tampered stats block
    let text = fixtures::TS1_WITNESS_JSON.replace("\"n_waste\":2", "\"n_waste\":4");
    fs::write(&path, text).unwrap();
    let (code, out, _) = run(&["validate", "--plan", path.to_str().unwrap()]);
    assert_eq!(code, 2);
    assert!(out.contains("recorded stats"), "{out}");

    fs::write(&path, "{ not json").unwrap();
    let (code, _, err) = run(&["validate", "--plan", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 2);
    assert!(err.contains("line 1"), "{err}");
}

#[test]
fn validate_witness_json_trace() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    fs::write(&path, fixtures::TS1_WITNESS_JSON).unwrap();
    let (code, out, _) = run(&["validate", "--plan", path.to_str().unwrap(), "--format", "json"]);
    assert_eq!(code, 0);
    let v: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert_eq!(v["valid"], true);
    assert_eq!(v["trace"]["stats"]["n_sample"], 5);
}

#[test]
fn export_dot_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.json");
    fs::write(&path, fixtures::TS1_WITNESS_JSON).unwrap();
    let (code, a, _) = run(&["export-dot", "--plan", path.to_str().unwrap()]);
    let (_, b, _) = run(&["export-dot", "--plan", path.to_str().unwrap()]);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(a.starts_with("digraph plan {"));
    assert_eq!(a.matches("shape=box").count(), 8);
}

#[test]
fn gen_series_examples() {
    let (code, out, _) = run(&["gen-series", "--family", "linear", "--a", "1/4", "--delta", "1/4", "--n", "3", "--precision", "2"]);
    assert_eq!(code, 0);
    assert_eq!(out, "[\"1/4\",\"1/2\",\"3/4\"]\n");
    let (_, out, _) = run(&["gen-series", "--family", "harmonic", "--a", "0.5", "--n", "3", "--precision", "4", "--format", "text"]);
    assert_eq!(out, "8/16,4/16,3/16\n");
    let (_, out, _) = run(&["gen-series", "--family", "geometric", "--a", "1/2", "--ratio", "1/2", "--n", "3", "--precision", "4", "--format", "csv"]);
    assert_eq!(out, "index,cf,value\n0,8/16,0.5\n1,4/16,0.25\n2,2/16,0.125\n");
    let (code, _, err) = run(&["gen-series", "--family", "linear", "--a", "1/2", "--delta", "1/2", "--n", "3"]);
    assert_eq!(code, 1);
    assert!(err.contains("element 2"), "{err}");
}

#[test]
fn compare_tables() {
    let (code, out, _) = run(&["compare", "--series", "ts1,ts2,ts3", "--format", "csv"]);
    assert_eq!(code, 0);
    assert!(out.contains("ts1,emdp,computed,5,3,1,7,"));
    assert!(out.contains("ts1,emdp,reported,5,4,2,8,-"));
    assert!(out.contains("ts2,emdp,reported,8,5,4,12,-"));

    let (code, out, _) = run(&["compare", "--series", "ts1", "--with-oracle"]);
    assert_eq!(code, 0);
    assert!(out.lines().any(|l| l.starts_with("ts1") && l.contains("oracle") && l.contains("computed")), "{out}");
    assert!(out.contains("reported"));

    let args = ["compare", "--family", "geometric", "--n", "8", "--precision", "5", "--seed", "7", "--corpus", "3"];
    let (code, a, _) = run(&args);
    let (_, b, _) = run(&args);
    assert_eq!(code, 0);
    assert_eq!(a, b);
    assert!(a.contains("geometric-2"));
}

#[test]
fn oracle_verdicts() {
    let (code, out, _) = run(&["oracle", "--targets", "3/4"]);
    assert_eq!(code, 0);
    assert!(out.starts_with("S=2 B=1 W=2 steps=2"), "{out}");
    let (code, out, _) = run(&["oracle", "--targets", "3/4", "--max-steps", "1"]);
    assert_eq!(code, 0);
    assert!(out.contains("infeasible"));
    let (code, _, err) = run(&["oracle", "--targets", "31/64,55/64,1,51/64", "--max-steps", "13", "--budget", "0.05"]);
    assert_eq!(code, 3, "{err}");
}
