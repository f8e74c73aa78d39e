//! The `enricat` binary: exit codes, output shape and determinism on the files in tests/data.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/data")
        .join(name)
}

fn enricat(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_enricat"))
        .args(args)
        .env_remove("ENRICAT_STAGE_BOUND")
        .output()
        .expect("binary runs")
}

fn on(cmd: &str, file: &str, extra: &[&str]) -> Output {
    let path = data(file);
    let mut args = vec![cmd, path.to_str().unwrap()];
    args.extend_from_slice(extra);
    enricat(&args)
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn status(o: &Output) -> String {
    json(o)["verdict"]["status"].as_str().unwrap().to_string()
}

const ARROWS: &[&str] = &["--a", "x", "--b", "y", "--f", "f", "--gbar", "gbar"];
const LOOP: &[&str] = &["--a", "x", "--b", "x", "--f", "f", "--gbar", "gbar"];

#[test]
fn free_arrows_pushout_stabilizes() {
    let o = on("pushout", "free_arrows.json", ARROWS);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["trace"]["stabilized"], true);
    let homs = &v["result"]["category"]["homs"];
    assert_eq!(homs["x→y"], 2);
    assert_eq!(homs["y→x"], 0);
    assert_eq!(homs["x→x"], 1);
}

#[test]
fn free_loop_is_truncated_at_the_stage_bound() {
    let o = on(
        "pushout",
        "free_loop.json",
        &[LOOP, &["--stage-bound", "3"]].concat(),
    );
    assert_eq!(o.status.code(), Some(2));
    let v = json(&o);
    assert_eq!(v["trace"]["stabilized"], false);
    assert_eq!(v["result"], Value::Null);
    // Words e^0 .. e^t in the free endomorphism.
    assert_eq!(
        v["trace"]["pairs"][0]["stage_sizes"],
        serde_json::json!([1, 2, 3, 4])
    );
}

#[test]
fn stage_bound_is_read_from_the_environment() {
    let path = data("free_loop.json");
    let o = Command::new(env!("CARGO_BIN_EXE_enricat"))
        .args([&["trace-export", path.to_str().unwrap()], LOOP].concat())
        .env("ENRICAT_STAGE_BOUND", "2")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert_eq!(json(&o)["stage_bound"], 2);
}

#[test]
fn malformed_file_is_an_input_error_with_a_position() {
    let o = on("validate", "malformed.json", &[]);
    assert_eq!(o.status.code(), Some(3));
    assert!(o.stdout.is_empty());
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn unknown_names_and_predicates_are_input_errors() {
    let o = on(
        "pushout",
        "free_arrows.json",
        &["--a", "x", "--b", "z", "--f", "f", "--gbar", "gbar"],
    );
    assert_eq!(o.status.code(), Some(3));
    let o = enricat(&[
        "check",
        "no-such-predicate",
        data("free_arrows.json").to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(3));
    assert_eq!(
        enricat(&["proptest", "no-such-suite"]).status.code(),
        Some(3)
    );
}

#[test]
fn interval_inclusion_is_dk() {
    let path = data("bool_interval.json");
    let o = enricat(&["check", "dk", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(status(&o), "pass");
    let o = enricat(&[
        "check",
        "interval",
        path.to_str().unwrap(),
        "--category",
        "interval",
    ]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn discrete_pair_is_not_an_interval() {
    let path = data("bool_discrete.json");
    let o = enricat(&["check", "interval", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert_eq!(status(&o), "fail");
    assert!(json(&o)["witness"].is_object());
}

#[test]
fn decomposition_holds_on_a_stabilized_trace() {
    let path = data("free_arrows.json");
    let o = enricat(&[&["check", "decomposition", path.to_str().unwrap()], ARROWS].concat());
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(status(&o), "pass");
    let o = enricat(&[&["check", "oracle", path.to_str().unwrap()], ARROWS].concat());
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn decomposition_on_a_truncated_trace_is_skipped() {
    let path = data("free_loop.json");
    let args = [
        &["check", "decomposition", path.to_str().unwrap()],
        LOOP,
        &["--stage-bound", "2"],
    ]
    .concat();
    assert_eq!(enricat(&args).status.code(), Some(2));
}

#[test]
fn validate_and_pi0() {
    let o = on("validate", "free_arrows.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(status(&o), "pass");
    let o = on("pi0", "bool_discrete.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["homs"]["0,1"], 0);
    assert_eq!(v["homs"]["1,1"], 1);
}

#[test]
fn free_category_on_a_chain_graph() {
    let o = on("free", "chain_graph.json", &[]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(
        v["category"]["homs"]["a→b"]["dims"],
        serde_json::json!([1, 0, 0])
    );
    assert_eq!(
        v["category"]["homs"]["a→a"]["dims"],
        serde_json::json!([1, 0, 0])
    );
}

#[test]
fn empty_proptest_run_passes() {
    let o = enricat(&["proptest", "oracle-pushout", "--count", "0"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    assert_eq!(v["count"], 0);
    assert_eq!(v["instances"], serde_json::json!([]));
}

#[test]
fn replay_reproduces_an_instance() {
    let o = enricat(&["proptest", "product-square", "--count", "2", "--seed", "9"]);
    assert_eq!(o.status.code(), Some(0));
    let v = json(&o);
    let first = &v["instances"][0];
    let seed = first["seed"].as_u64().expect("instances carry their seed");
    let r = enricat(&["proptest", "product-square", "--replay", &seed.to_string()]);
    assert_eq!(&json(&r), first);
}

#[test]
fn output_is_byte_identical_across_runs() {
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| on("trace-export", "free_arrows.json", ARROWS).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
    let runs: Vec<Vec<u8>> = (0..2)
        .map(|_| enricat(&["proptest", "pi0-oracle", "--count", "5", "--seed", "3"]).stdout)
        .collect();
    assert_eq!(runs[0], runs[1]);
}

#[test]
fn listings_are_not_empty() {
    for cmd in ["predicates", "suites"] {
        let o = enricat(&[cmd]);
        assert_eq!(o.status.code(), Some(0));
        assert!(String::from_utf8(o.stdout).unwrap().lines().count() > 10);
    }
}
