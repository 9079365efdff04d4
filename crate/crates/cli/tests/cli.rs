use std::path::PathBuf;
use std::process::Command;

use serde_json::{json, Value};
use tempfile::TempDir;

struct Run {
    code: i32,
    out: Value,
}

fn pointfree(args: &[&str]) -> Run {
    let output = Command::new(env!("CARGO_BIN_EXE_pointfree"))
        .args(args)
        .output()
        .expect("binary runs");
    let text = String::from_utf8(output.stdout).unwrap();
    Run {
        code: output.status.code().unwrap(),
        out: serde_json::from_str(&text).unwrap_or(Value::Null),
    }
}

struct Files(TempDir);

impl Files {
    fn new() -> Self {
        Files(TempDir::new().unwrap())
    }

    fn put(&self, name: &str, v: &Value) -> String {
        let path: PathBuf = self.0.path().join(name);
        std::fs::write(&path, v.to_string()).unwrap();
        path.to_str().unwrap().to_string()
    }
}

fn two() -> Value {
    json!({ "elements": ["0", "1"], "leq": [["0", "1"]] })
}

fn chain3() -> Value {
    json!({ "elements": ["0", "m", "1"], "leq": [["0", "m"], ["m", "1"]] })
}

fn sierpinski() -> Value {
    json!({ "points": ["x", "y"], "opens": [[], ["y"], ["x", "y"]] })
}

fn point() -> Value {
    json!({ "points": ["*"], "opens": [[], ["*"]] })
}

fn empty() -> Value {
    json!({ "points": [], "opens": [[]] })
}

#[test]
fn coproduct_with_two_is_the_unit() {
    let f = Files::new();
    let (l, r) = (f.put("two.json", &two()), f.put("chain.json", &chain3()));
    let run = pointfree(&["coproduct", "--left", &l, "--right", &r]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["size"], 3);
}

#[test]
fn points_of_the_three_chain_form_sierpinski_space() {
    let f = Files::new();
    let run = pointfree(&["pt", "--frame", &f.put("chain.json", &chain3())]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["points"].as_array().unwrap().len(), 2);
    assert_eq!(run.out["opens"].as_array().unwrap().len(), 3);
}

#[test]
fn opens_and_downsets() {
    let f = Files::new();
    let run = pointfree(&["omega", "--space", &f.put("s.json", &sierpinski())]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["elements"].as_array().unwrap().len(), 3);

    let grid = json!({
        "elements": ["00", "01", "10", "11"],
        "leq": [["00", "01"], ["00", "10"], ["01", "11"], ["10", "11"]],
    });
    let run = pointfree(&["downsets", "--poset", &f.put("grid.json", &grid)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["elements"].as_array().unwrap().len(), 6);
}

#[test]
fn validate_output_reparses_to_itself() {
    let f = Files::new();
    for (flag, v) in [("--frame", chain3()), ("--space", sierpinski())] {
        let first = pointfree(&["validate", flag, &f.put("a.json", &v)]);
        assert_eq!(first.code, 0);
        let again = pointfree(&["validate", flag, &f.put("b.json", &first.out["canonical"])]);
        assert_eq!(again.out, first.out);
    }
}

#[test]
fn input_errors_exit_two_with_a_diagnostic() {
    let f = Files::new();
    let diamond = json!({
        "elements": ["0", "a", "b", "c", "1"],
        "leq": [["0", "a"], ["0", "b"], ["0", "c"], ["a", "1"], ["b", "1"], ["c", "1"]],
    });
    let run = pointfree(&["validate", "--frame", &f.put("m3.json", &diamond)]);
    assert_eq!(run.code, 2);
    assert_eq!(run.out["error"], "NotDistributiveError");

    let run = pointfree(&["omega", "--space", "/nonexistent/space.json"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.out["error"], "IoError");

    let run = pointfree(&["frobnicate"]);
    assert_eq!(run.code, 2);
    assert_eq!(run.out["error"], "UsageError");

    let run = pointfree(&["check", "frames", "--suite", "SubspaceLemma"]);
    assert_eq!(run.code, 2);
}

#[test]
fn pseudotopology_commands() {
    let f = Files::new();
    let xi = json!({ "points": ["1", "2"], "lim": { "1": ["1"], "2": ["1", "2"] } });
    let run = pointfree(&["pstop", "tau", "--space", &f.put("xi.json", &xi)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["opens"], json!([[], ["2"], ["1", "2"]]));

    let discrete = json!({ "points": ["1", "2"], "lim": { "1": ["1"], "2": ["2"] } });
    let indiscrete = json!({ "points": ["1", "2"], "lim": { "1": ["1", "2"], "2": ["1", "2"] } });
    let (d, i) = (f.put("d.json", &discrete), f.put("i.json", &indiscrete));
    assert_eq!(pointfree(&["pstop", "meet", "--left", &d, "--right", &i]).out, indiscrete);
    assert_eq!(pointfree(&["pstop", "join", "--left", &d, "--right", &i]).out, discrete);

    let id = json!({ "1": "1", "2": "2" });
    let down = json!({ "source": discrete, "target": indiscrete, "map": id });
    let run = pointfree(&["pstop", "check", "--map", &f.put("down.json", &down)]);
    assert_eq!(run.out["continuous"], true);
    let up = json!({ "source": indiscrete, "target": discrete, "map": id });
    let run = pointfree(&["pstop", "check", "--map", &f.put("up.json", &up)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["continuous"], false);
    assert!(!run.out["witness"].is_null());
}

#[test]
fn lifting_commands() {
    let f = Files::new();
    let cell = json!({ "source": empty(), "target": point(), "map": {} });
    let pair = json!({ "points": ["a", "b"], "opens": [[], ["a"], ["b"], ["a", "b"]] });
    let into_pair = json!({ "source": empty(), "target": pair, "map": {} });
    let run = pointfree(&[
        "lift",
        "factorize",
        "--map",
        &f.put("f.json", &into_pair),
        "--gens",
        &f.put("s.json", &json!([cell])),
        "--steps",
        "1",
    ]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["verdict"], "COMPLETE");
    assert_eq!(run.out["stages"].as_array().unwrap().len(), 1);

    // the identity square has exactly one diagonal
    let id = json!({ "source": point(), "target": point(), "map": { "*": "*" } });
    let square = json!({ "i": id, "f": id, "u": id, "v": id });
    let run = pointfree(&["lift", "check", "--square", &f.put("sq.json", &square)]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["has_lift"], true);
    assert_eq!(run.out["lifts"].as_array().unwrap().len(), 1);
}

#[test]
fn locale_commands() {
    let f = Files::new();
    let id = json!({ "source": chain3(), "target": chain3(), "map": { "0": "0", "m": "m", "1": "1" } });
    let h = f.put("id.json", &id);
    let run = pointfree(&["pushout-loc", "--f", &h, "--g", &h]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["apex"].as_array().unwrap().len(), 3);
    let run = pointfree(&["copair", "--f", &h, "--g", &h]);
    assert_eq!(run.code, 0);
    assert_eq!(run.out["target"]["top"], "1");
    assert_eq!(run.out["map"].as_object().unwrap().len(), 6);
}

#[test]
fn check_writes_a_passing_report() {
    let f = Files::new();
    let out = f.0.path().join("report.json");
    let run = pointfree(&["check", "pstop-lemmas", "--max-points", "3", "--json-out", out.to_str().unwrap()]);
    assert_eq!(run.code, 0);
    let report: Value = serde_json::from_str(&std::fs::read_to_string(out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["suites"].as_array().unwrap().len(), 10);
    assert!(report["suites"][0].get("elapsed_ms").is_none());
}
