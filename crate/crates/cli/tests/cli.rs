use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn proportia(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_proportia"))
        .args(args)
        .env_remove("PROPORTIA_SPEC_PATH")
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> Value {
    // global flags go first so a `--` in `args` cannot capture them
    let mut all = vec!["--json"];
    all.extend_from_slice(args);
    let out = proportia(&all);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn stderr_record(out: &Output) -> Value {
    serde_json::from_slice(&out.stderr).expect("stderr is a JSON record")
}

fn strings(v: &Value) -> Vec<&str> {
    v.as_array()
        .unwrap()
        .iter()
        .map(|s| s.as_str().unwrap())
        .collect()
}

fn temp_spec(name: &str, text: &str) -> PathBuf {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, text).unwrap();
    path
}

#[test]
fn solves_across_numbers_and_words() {
    let v = json(&[
        "solve",
        "2:4::ab:z",
        "--pair",
        "natMul,words8",
        "--max-arity",
        "1",
    ]);
    assert_eq!(strings(&v["solutions"]), ["abab"]);
    assert_eq!(v["bounds"]["max_arity"], 1);
    assert_eq!(v["saturated"], serde_json::json!([true, true]));
}

#[test]
fn query_suffix_names_the_pair() {
    let v = json(&["solve", "2:4::ab:z @natMul,words8", "--max-arity", "1"]);
    assert_eq!(strings(&v["solutions"]), ["abab"]);
}

#[test]
fn central_permutation_fails_on_booleans() {
    let v = json(&[
        "axioms",
        "--algebra",
        "boolOr",
        "--axiom",
        "central_permutation",
    ]);
    let ax = &v["axioms"][0];
    assert_eq!(ax["verdict"], "fails");
    let found = ax["counterexamples"].as_array().unwrap().iter().any(|c| {
        c["premise"] == "1:1::0:1 holds"
            && c["conclusion"]
                .as_str()
                .unwrap()
                .starts_with("1:0::1:1 fails")
    });
    assert!(found, "{ax}");
}

#[test]
fn determinism_and_reflexivity_hold_on_booleans() {
    let v = json(&["axioms", "--algebra", "boolOr"]);
    for ax in v["axioms"].as_array().unwrap() {
        if ax["axiom"] == "determinism" || ax["axiom"] == "reflexivity" {
            assert_eq!(ax["verdict"], "holds_exhaustively");
        }
    }
}

#[test]
fn mbd_is_strictly_weaker_than_the_solver() {
    let v = json(&["compare", "--model", "mbd", "--universe", "a,b"]);
    assert_eq!(v["tuples"], 256);
    assert!(v["baseline_only"].as_array().unwrap().is_empty());
    assert!(strings(&v["solver_only"]).contains(&"{a}:{b}::{}:{a,b}"));
}

#[test]
fn negative_verdicts_are_answers() {
    let out = proportia(&["holds", "1:0::1:1", "--pair", "boolOr"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("1:0::1:1: fails"), "{text}");
    assert!(text.contains("dominated by 0 via one -> zero"), "{text}");
}

#[test]
fn oracle_agrees_on_small_queries() {
    let v = json(&[
        "holds",
        "1:0::1:0",
        "--pair",
        "boolOr",
        "--max-depth",
        "2",
        "--oracle",
    ]);
    assert_eq!(v["holds"], true);
    assert_eq!(v["oracle"]["agrees"], true);
    let v = json(&["solve", "a:b'::c:z", "--pair", "succStruct", "--oracle"]);
    assert_eq!(v["oracle"]["agrees"], true);
}

#[test]
fn justify_tags_members() {
    let v = json(&["justify", "a:b::c:d", "--pair", "succStruct"]);
    let members = v["justifications"].as_array().unwrap();
    assert_eq!(v["total"], members.len());
    let identity = members
        .iter()
        .find(|m| m["justification"] == "z1 -> z2")
        .unwrap();
    assert_eq!(identity["trivial"], true);
    for m in members {
        assert!(!m["source_witnesses"].as_array().unwrap().is_empty());
        assert!(!m["target_witnesses"].as_array().unwrap().is_empty());
    }
}

#[test]
fn baselines_report_witnesses() {
    let v = json(&[
        "baseline",
        "--model",
        "sy_numbers",
        "--range",
        "10",
        "--",
        "1",
        "3",
        "-2",
        "0",
    ]);
    assert_eq!(v["holds"], true);
    let w = &v["witness"];
    let [a1, a2, d1, d2] = ["a1", "a2", "d1", "d2"].map(|k| w[k].as_i64().unwrap());
    assert_eq!([a1 + a2, a1 + d2, d1 + a2, d1 + d2], [1, 3, -2, 0]);

    let v = json(&[
        "baseline",
        "--model",
        "sy_sets",
        "--universe",
        "a",
        "{a}",
        "{a}",
        "{a}",
        "{}",
    ]);
    assert_eq!(v["holds"], true);
    let v = json(&[
        "baseline",
        "--model",
        "mbd",
        "--universe",
        "a,b",
        "{a}",
        "{b}",
        "{}",
        "{a,b}",
    ]);
    assert_eq!(v["holds"], false);
}

#[test]
fn json_is_byte_deterministic() {
    let args = ["solve", "1:0::1:z", "--pair", "boolOr", "--json"];
    assert_eq!(proportia(&args).stdout, proportia(&args).stdout);
}

#[test]
fn spec_path_from_environment() {
    let path = temp_spec(
        "one.alg",
        "[algebra cyc]\nkind = mod_n\nn = 3\nops = add\nconsts = one:1\n",
    );
    let out = Command::new(env!("CARGO_BIN_EXE_proportia"))
        .args(["solve", "0:1::1:z", "--json"])
        .env("PROPORTIA_SPEC_PATH", &path)
        .output()
        .unwrap();
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let v: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["pair"], "cyc");
    assert!(strings(&v["solutions"]).contains(&"2"));
}

#[test]
fn spec_errors_exit_with_one() {
    let path = temp_spec(
        "bad.alg",
        "[algebra t]\nkind = table\nelems = p, q\nfns = f/1\ntable f: p -> q\n",
    );
    let out = proportia(&["list-builtins", "--spec", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    let rec = stderr_record(&out);
    assert_eq!(rec["error"], "spec");
    assert!(rec["message"].as_str().unwrap().contains("line 1"));
}

#[test]
fn usage_errors_exit_with_one() {
    let out = proportia(&["solve", "q:0::1:z", "--pair", "boolOr"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_record(&out)["error"], "element_not_in_carrier");

    let out = proportia(&["solve", "1:0::1:z"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_record(&out)["error"], "missing_algebra");

    let out = proportia(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(stderr_record(&out)["error"], "usage");
}

#[test]
fn scope_limits_exit_with_two() {
    let out = proportia(&[
        "compare",
        "--model",
        "mbd",
        "--universe",
        "a,b",
        "--limit",
        "100",
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_record(&out)["error"], "scope_too_large");

    let out = proportia(&["solve", "1:0::1:z", "--pair", "boolOr", "--oracle"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(stderr_record(&out)["error"], "scope_too_large");
}

#[test]
fn listing_and_dumping() {
    let v = json(&["list-builtins"]);
    let names: Vec<&str> = v["algebras"]
        .as_array()
        .unwrap()
        .iter()
        .map(|a| a["name"].as_str().unwrap())
        .collect();
    assert!(names.contains(&"boolOr") && names.contains(&"words8"));

    let v = json(&["dump-classes", "--pair", "boolOr", "--max-arity", "1"]);
    let reps: Vec<&str> = v["classes"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["representative"].as_str().unwrap())
        .collect();
    assert!(reps.contains(&"z1"), "{reps:?}");
    assert_eq!(v["saturated"], serde_json::json!([true, true]));
}
