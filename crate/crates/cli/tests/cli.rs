use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "core", "fixtures", name]
        .iter()
        .collect();
    p.to_string_lossy().into_owned()
}

fn ctxbell(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ctxbell"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = ctxbell(args);
    assert!(
        out.status.success(),
        "ctxbell {args:?} failed: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn record(args: &[&str]) -> Value {
    serde_json::from_str(&stdout(args)).expect("record output is JSON")
}

fn stderr_of_failure(args: &[&str]) -> String {
    let out = ctxbell(args);
    assert!(!out.status.success(), "ctxbell {args:?} unexpectedly succeeded");
    assert!(out.stdout.is_empty());
    String::from_utf8(out.stderr).unwrap()
}

#[test]
fn ratings_ranks_dog_first_under_chewing_a_bone() {
    let table = fixture("pet_ratings.tsv");
    let v = record(&["ratings", "--table", &table, "--context", "chewing a bone"]);
    assert_eq!(v["schema_version"], 1);
    let head = &v["results"]["ranking"][0];
    assert_eq!(head["exemplar"], "dog");
    assert!((head["typicality"].as_f64().unwrap() - 6.81 / 15.84).abs() < 1e-12);
    assert_eq!(v["results"]["context"], "The pet is chewing a bone");
}

#[test]
fn ratings_weird_person_puts_spider_then_snake() {
    let table = fixture("pet_ratings.tsv");
    let out = stdout(&[
        "ratings",
        "--table",
        &table,
        "--context",
        "weird person",
        "--format",
        "tsv",
    ]);
    let rows: Vec<&str> = out.lines().skip(2).take(2).collect();
    assert!(rows[0].starts_with("1\tspider\t5.96"), "{out}");
    assert!(rows[1].starts_with("2\tsnake\t5.64"), "{out}");
}

#[test]
fn bell_at_lambda_zero_is_maximal() {
    let v = record(&["bell", "--lambda", "0"]);
    let r = &v["results"];
    assert_eq!(r["bell_value"], 4.0);
    assert_eq!(r["violated"], true);
    assert_eq!(r["classification"]["band"], "supra-quantum");
    assert_eq!(r["product_equalities"]["all_hold"], false);
    assert_eq!(r["product_equalities"]["cells"][0][0], false);
}

#[test]
fn bell_scenario_file_matches_lambda_flag() {
    let scenario = fixture("pet_food.toml");
    let from_file = record(&["bell", "--scenario", &scenario]);
    let from_flag = record(&["bell", "--lambda", "0"]);
    assert_eq!(from_file["results"], from_flag["results"]);
}

#[test]
fn sweep_quarter_grid() {
    let out = stdout(&["sweep", "--range", "0:1:0.25", "--format", "tsv"]);
    assert_eq!(
        out,
        "# ctxbell sweep schema 1 version 0.1.0\n\
         lambda\tbell_value\tviolated\n\
         0\t4\ttrue\n0.25\t3.5\ttrue\n0.5\t3\ttrue\n0.75\t2.5\ttrue\n1\t2\tfalse\n"
    );
}

#[test]
fn sweep_single_point() {
    let v = record(&["sweep", "--range", "0:0:1"]);
    let rows = v["results"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 1);
    assert_eq!(rows[0]["bell_value"], 4.0);
}

#[test]
fn sweep_rejects_out_of_range() {
    let err = stderr_of_failure(&["sweep", "--range", "0:2:0.5"]);
    assert!(err.contains("exceeds [0, 1]"), "{err}");
    let err = stderr_of_failure(&["sweep", "--range", "0:1"]);
    assert!(err.contains("start:stop:step"), "{err}");
}

#[test]
fn guppy_combined_exceeds_single() {
    let (pet, fish, rel) = (
        fixture("pet_fish_pet.tsv"),
        fixture("pet_fish_fish.tsv"),
        fixture("pet_fish_relation.toml"),
    );
    let v = record(&[
        "guppy",
        "--concept-a",
        &pet,
        "--concept-b",
        &fish,
        "--relation",
        &rel,
        "--exemplar",
        "guppy",
    ]);
    let r = &v["results"];
    assert!((r["combined_marginal"].as_f64().unwrap() - 0.25).abs() < 1e-12);
    assert!((r["typicality_a"].as_f64().unwrap() - 0.10).abs() < 1e-12);
    assert!((r["gap"].as_f64().unwrap() - 0.15).abs() < 1e-12);
    assert_eq!(r["guppy_effect"], true);
}

#[test]
fn semspace_order_verdicts() {
    let corpus = fixture("toy_corpus.txt");
    let v = record(&[
        "semspace",
        "--corpus",
        &corpus,
        "--k",
        "2",
        "--pair",
        "mary,john",
        "--compare",
        "mary hits john",
        "john hits mary",
    ]);
    let c = &v["results"]["comparison"];
    assert_eq!(c["bow"]["verdict"], "indistinguishable");
    assert_eq!(c["order"]["verdict"], "distinguishable");
    assert_eq!(v["results"]["singular_values"].as_array().unwrap().len(), 2);
    let sim = v["results"]["similarities"][0]["value"].as_f64().unwrap();
    assert!((-1.0..=1.0).contains(&sim));
}

#[test]
fn semspace_unknown_word_is_an_error() {
    let corpus = fixture("toy_corpus.txt");
    let err = stderr_of_failure(&["semspace", "--corpus", &corpus, "--k", "2", "--pair", "mary,zebra"]);
    assert!(err.contains("zebra"), "{err}");
}

#[test]
fn kolmo_feasible_and_infeasible() {
    let v = record(&["kolmo", "--joint", "0.5,0.5,0.5,-0.5"]);
    assert_eq!(v["results"]["realizability"]["result"], "feasible");
    assert_eq!(v["results"]["classification"]["band"], "classical");

    let v = record(&["kolmo", "--lambda", "0"]);
    assert_eq!(v["results"]["realizability"]["result"], "infeasible");
    let w = &v["results"]["realizability"]["witness"];
    assert_eq!(w["value"], 4.0);
    assert_eq!(w["bound"], 2.0);

    let tsirelson = fixture("tsirelson.toml");
    let v = record(&["kolmo", "--scenario", &tsirelson]);
    assert_eq!(v["results"]["classification"]["band"], "quantum-achievable");
}

#[test]
fn kolmo_joint_needs_four_values() {
    let err = stderr_of_failure(&["kolmo", "--joint", "0.5,0.5"]);
    assert!(err.contains("4 values"), "{err}");
}

#[test]
fn output_is_byte_identical_across_runs() {
    let table = fixture("pet_ratings.tsv");
    for args in [
        vec!["bell", "--lambda", "0.3"],
        vec!["sweep", "--range", "0:1:0.1"],
        vec!["ratings", "--table", table.as_str(), "--context", "being taught"],
        vec!["kolmo", "--lambda", "0.5", "--format", "tsv"],
    ] {
        assert_eq!(stdout(&args), stdout(&args), "{args:?}");
    }
}

#[test]
fn timing_only_when_requested() {
    let plain = record(&["bell", "--lambda", "0.5"]);
    assert!(plain.get("timing").is_none());
    let timed = record(&["bell", "--lambda", "0.5", "--timing"]);
    assert!(timed["timing"]["elapsed_ms"].as_f64().unwrap() >= 0.0);
}

#[test]
fn digest_depends_on_input_contents() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.toml");
    std::fs::write(&path, "joint = [[1.0, 1.0], [1.0, -1.0]]\n").unwrap();
    let p = path.to_str().unwrap();
    let first = record(&["bell", "--scenario", p]);
    std::fs::write(&path, "joint = [[1.0, 1.0], [1.0, -1.0]]\n# edited\n").unwrap();
    let second = record(&["bell", "--scenario", p]);
    assert_eq!(first["results"], second["results"]);
    assert_ne!(first["inputs_digest"], second["inputs_digest"]);
}

#[test]
fn malformed_ratings_report_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.tsv");
    std::fs::write(&path, "exemplar\tctx\ndog\t1.0\ncat\t-2\n").unwrap();
    let err = stderr_of_failure(&["ratings", "--table", path.to_str().unwrap(), "--context", "ctx"]);
    assert!(err.contains("bad.tsv"), "{err}");
    assert!(err.contains("line 3, column 2"), "{err}");
}

#[test]
fn malformed_scenario_reports_position() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.toml");
    std::fs::write(&path, "joint = [[1.0, 1.0],\n  [1.0, 2.5]]\n").unwrap();
    let err = stderr_of_failure(&["bell", "--scenario", path.to_str().unwrap()]);
    assert!(err.contains("bad.toml"), "{err}");
}

#[test]
fn ambiguous_context_is_rejected() {
    let table = fixture("pet_ratings.tsv");
    let err = stderr_of_failure(&["ratings", "--table", &table, "--context", "pet"]);
    assert!(err.contains("pet"), "{err}");
}
