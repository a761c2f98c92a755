use serde_json::Value;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_perfmatch"))
}

fn tmp(name: &str, contents: &str) -> PathBuf {
    let p = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).unwrap()
}

const C6: &str = "3 3 6\n0 3\n0 4\n1 4\n1 5\n2 5\n2 3\n";

#[test]
fn gen_writes_shared_format() {
    let v = json(&run(&["gen", "cg", "2"]));
    assert_eq!(
        v["graph"]["black"].as_array().unwrap().len()
            + v["graph"]["white"].as_array().unwrap().len(),
        16
    );
    assert!(v["canonical_matching"].is_array());
    assert!(v["embedding"].is_array());
    let h = json(&run(&["gen", "heawood"]));
    assert_eq!(h["graph"]["edges"].as_array().unwrap().len(), 21);
}

#[test]
fn bad_family_parameter_is_a_usage_error() {
    assert_eq!(run(&["gen", "svmg", "0"]).status.code(), Some(2));
    assert_eq!(run(&["gen", "nosuch"]).status.code(), Some(2));
    assert_eq!(run(&["count"]).status.code(), Some(2));
}

#[test]
fn count_grid_and_cycle() {
    let grid = run(&["gen", "grid", "4", "4"]);
    let p = tmp("grid4.json", &String::from_utf8(grid.stdout).unwrap());
    let v = json(&run(&["count", p.to_str().unwrap()]));
    assert_eq!(v["count"], "36");
    assert_eq!(v["tool"]["name"], "perfmatch");
    assert!(v["bounds"]["width_cap"].is_number());
    let c6 = tmp("c6.txt", C6);
    let v = json(&run(&["count", c6.to_str().unwrap(), "--route", "dp"]));
    assert_eq!(v["count"], "2");
    assert_eq!(v["routing_report"]["braces"].as_array().unwrap().len(), 2);
}

#[test]
fn count_without_perfect_matching_is_zero() {
    let p = tmp("nopm.txt", "2 2 1\n0 2\n");
    let v = json(&run(&["count", p.to_str().unwrap()]));
    assert_eq!(v["count"], "0");
}

#[test]
fn weights_give_a_polynomial() {
    let c6 = tmp("c6w.txt", C6);
    let w = tmp("c6w.json", "[1, 0, 1, 0, 1, 0]");
    let v = json(&run(&[
        "count",
        c6.to_str().unwrap(),
        "--weights",
        w.to_str().unwrap(),
    ]));
    assert_eq!(v["polynomial"], serde_json::json!([1, 0, 0, 1]));
    assert_eq!(v["count"], "2");
}

#[test]
fn infeasible_route_and_resource_exit_codes() {
    let k33 = tmp(
        "k33.json",
        &String::from_utf8(run(&["gen", "ktt", "3", "3"]).stdout).unwrap(),
    );
    let out = run(&["count", k33.to_str().unwrap(), "--route", "pfaffian"]);
    assert_eq!(out.status.code(), Some(3));
    assert!(!out.stderr.is_empty());
    let out = run(&[
        "count",
        k33.to_str().unwrap(),
        "--route",
        "oracle",
        "--oracle-bound",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(4));
}

#[test]
fn analyze_examples() {
    let hw = tmp(
        "hw.json",
        &String::from_utf8(run(&["gen", "heawood"]).stdout).unwrap(),
    );
    let v = json(&run(&["analyze", hw.to_str().unwrap()]));
    assert_eq!(v["brace"], true);
    assert_eq!(v["pfaffian"], "pfaffian");
    let k33 = tmp(
        "k33a.json",
        &String::from_utf8(run(&["gen", "ktt", "3", "3"]).stdout).unwrap(),
    );
    assert_eq!(
        json(&run(&["analyze", k33.to_str().unwrap()]))["pfaffian"],
        "non_pfaffian"
    );
    let c6 = tmp("c6a.txt", C6);
    let v = json(&run(&["analyze", c6.to_str().unwrap()]));
    assert_eq!(v["brace"], false);
    assert_eq!(v["braces"], serde_json::json!(["C4", "C4"]));
}

#[test]
fn other_subcommands() {
    let cube = tmp(
        "cube.json",
        &String::from_utf8(run(&["gen", "cube"]).stdout).unwrap(),
    );
    let c = cube.to_str().unwrap();
    assert_eq!(json(&run(&["pmw", c, "--exact"]))["kind"], "exact");
    assert_eq!(json(&run(&["pfaffian", c]))["verdict"], "pfaffian");
    assert_eq!(
        json(&run(&["minor", c, "--pattern", "k33"]))["contains"],
        false
    );
    let k44 = tmp(
        "k44.json",
        &String::from_utf8(run(&["gen", "ktt", "4", "4"]).stdout).unwrap(),
    );
    let v = json(&run(&["minor", k44.to_str().unwrap()]));
    assert_eq!(v["contains"], true);
    assert!(v["model"].is_object());
    assert_eq!(
        json(&run(&["decompose", c]))["braces"],
        serde_json::json!(["Q3"])
    );
    let two = tmp("twok2.txt", "2 2 2\n0 2\n1 3\n");
    let spec = tmp("spec.json", r#"{"pairs":[{"e":[0,2],"f":[1,3]}]}"#);
    let v = json(&run(&[
        "gadget",
        two.to_str().unwrap(),
        "--spec",
        spec.to_str().unwrap(),
    ]));
    assert_eq!(v["chi_weight_sum"], "-1");
    assert_eq!(v["replaced_signed_count"], "-1");
}

#[test]
fn csv_matrix_input() {
    let p = tmp("m.csv", "1,1,0\n0,1,1\n1,0,1\n");
    assert_eq!(json(&run(&["count", p.to_str().unwrap()]))["count"], "2");
}

#[test]
fn output_is_reproducible() {
    let c6 = tmp("c6r.txt", C6);
    let args = ["decompose", c6.to_str().unwrap(), "--seed", "5"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let args = ["count", c6.to_str().unwrap(), "--threads", "2"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
}

#[test]
fn text_format() {
    let c6 = tmp("c6t.txt", C6);
    let out = run(&["count", c6.to_str().unwrap(), "--format", "text"]);
    assert!(String::from_utf8(out.stdout)
        .unwrap()
        .starts_with("count: 2\n"));
}
