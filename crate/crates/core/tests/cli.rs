use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_hyperpolygon"));
    c.env_remove("HYPERPOLY_WORKERS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn here(rel: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests").join(rel)
}

const GOLDEN: &[(&str, &[&str])] = &[
    ("complexes_count_5", &["complexes", "count", "--n", "5"]),
    ("complexes_count_6", &["complexes", "count", "--n", "6"]),
    ("complexes_count_7", &["complexes", "count", "--n", "7"]),
    ("complexes_count_6_full", &["complexes", "count", "--n", "6", "--full-only"]),
    ("census_5", &["resolutions", "census", "--n", "5"]),
    ("census_6", &["resolutions", "census", "--n", "6"]),
    ("chambers_a5_f", &["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "F"]),
    ("chambers_a5_c0", &["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "C0"]),
    ("chambers_a6_f", &["chambers", "count", "--arrangement", "A", "--n", "6", "--in-cone", "F"]),
    ("chambers_a6_c0", &["chambers", "count", "--arrangement", "A", "--n", "6", "--in-cone", "C0"]),
    ("chambers_a6_ray", &["chambers", "count", "--arrangement", "A", "--n", "6", "--at-ray", "1,1,1,1,1,1"]),
    (
        "chambers_a6_ray_charpoly",
        &["chambers", "count", "--arrangement", "A", "--n", "6", "--at-ray", "1,1,1,1,1,1", "--method", "charpoly"],
    ),
    ("chambers_b6_3", &["chambers", "count", "--arrangement", "B", "--n", "6", "--m", "3"]),
    (
        "chambers_b6_3_charpoly",
        &["chambers", "count", "--arrangement", "B", "--n", "6", "--m", "3", "--method", "charpoly"],
    ),
    ("bunches_classify_5", &["bunches", "classify", "--n", "5"]),
    ("cox_verify_5", &["cox", "verify", "--n", "5", "--samples", "100", "--seed", "0"]),
];

#[test]
fn golden_outputs() {
    for (name, args) in GOLDEN {
        let want = std::fs::read_to_string(here(&format!("golden/{name}.json"))).unwrap();
        let o = run(args);
        assert!(o.status.success(), "{name}: {}", String::from_utf8_lossy(&o.stderr));
        assert_eq!(stdout(&o), want, "{name}");
    }
}

#[test]
fn output_is_independent_of_workers() {
    let args = ["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "F"];
    let one = run(&[&["-j", "1"], &args[..]].concat());
    let four = run(&[&["-j", "4"], &args[..]].concat());
    let env = bin().args(args).env("HYPERPOLY_WORKERS", "3").output().unwrap();
    assert!(one.status.success());
    assert_eq!(one.stdout, four.stdout);
    assert_eq!(one.stdout, env.stdout);

    let census = ["resolutions", "census", "--n", "5", "--records"];
    assert_eq!(run(&[&["-j", "1"], &census[..]].concat()).stdout, run(&[&["-j", "2"], &census[..]].concat()).stdout);
}

#[test]
fn streams_are_ndjson() {
    let o = run(&["complexes", "enumerate", "--n", "5"]);
    let lines: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 81);
    assert!(lines.iter().all(|v| v["n"] == 5 && v["maximal_faces"].is_array()));

    let o = run(&["resolutions", "census", "--n", "5", "--records"]);
    let records: Vec<serde_json::Value> =
        stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(records.len(), 81);
    for r in &records {
        assert_eq!(r["kind"], "projective");
        // witnesses are exact, written as "p/q" or integers
        assert!(r["witness"].as_array().unwrap().iter().all(|x| x.is_string()));
    }
}

#[test]
fn arrangement_from_file() {
    let path = here("fixtures/braid4.json");
    let p = path.to_str().unwrap();
    for method in ["enumerate", "charpoly"] {
        let o = run(&["chambers", "count", "--spec", p, "--method", method]);
        let v: serde_json::Value = serde_json::from_str(&stdout(&o)).unwrap();
        assert_eq!(v["count"], 24);
    }
}

#[test]
fn exit_codes() {
    let usage = [
        &["complexes", "count"][..],
        &["complexes", "count", "--n", "10"],
        &["chambers", "count", "--arrangement", "B", "--n", "6"],
        &["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "F", "--method", "charpoly"],
        &["chambers", "count", "--arrangement", "A", "--n", "5", "--in-cone", "F", "--at-ray", "1,1,1,1,1"],
        &["chambers", "count", "--arrangement", "A", "--n", "5", "--at-ray", "1,1,1"],
        &["chambers", "count", "--arrangement", "A", "--n", "5", "--at-ray", "1,1,1,1,1/0"],
        &["cox", "verify", "--n", "4"],
        &["frobnicate"],
    ];
    for args in usage {
        let o = run(args);
        assert_eq!(o.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&o.stderr));
        assert!(!o.stderr.is_empty());
    }
    let o = run(&["chambers", "count", "--arrangement", "A", "--n", "8", "--at-ray", "1,1,1,1,1,1,1,1", "--method", "charpoly"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8_lossy(&o.stderr);
    assert!(err.contains("resource limit") && err.contains("primes above"), "{err}");
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn plain_and_csv_formats() {
    let o = run(&["--format", "plain", "resolutions", "census", "--n", "6"]);
    assert!(stdout(&o).contains("nonprojective: 962"));
    let o = run(&["--format", "csv", "oracle", "crosscheck", "--n", "4"]);
    let text = stdout(&o);
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("name,instances,disagreements"));
    assert_eq!(rows.count(), 7);
}
