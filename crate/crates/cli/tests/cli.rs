//! End-to-end tests of the binary: exit codes, golden values, and the JSON
//! report schema. Each subcommand must mirror the library call it wraps.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde::Deserialize;

fn fixture(name: &str) -> String {
    let path: PathBuf = [env!("CARGO_MANIFEST_DIR"), "tests", "fixtures", name]
        .iter()
        .collect();
    path.to_string_lossy().into_owned()
}

fn interpres(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_interpres"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout_of(args: &[&str]) -> String {
    let out = interpres(args);
    assert!(
        out.status.success(),
        "expected success for {args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[derive(Deserialize)]
struct ReportSchema {
    command: String,
    #[allow(dead_code)]
    inputs: Vec<(String, String)>,
    checks: Vec<CheckSchema>,
    #[allow(dead_code)]
    millis: u128,
}

#[derive(Deserialize)]
struct CheckSchema {
    name: String,
    verdict: String,
    #[serde(default)]
    witness: serde_json::Value,
}

#[test]
fn encode_prints_the_ackermann_code() {
    assert_eq!(stdout_of(&["hf", "encode", "{{},{{}}}"]).trim(), "3");
}

#[test]
fn decode_inverts_encode() {
    assert_eq!(stdout_of(&["hf", "decode", "3"]).trim(), "{{},{{}}}");
    for n in ["0", "7", "15", "100"] {
        let set = stdout_of(&["hf", "decode", n]);
        assert_eq!(stdout_of(&["hf", "encode", set.trim()]).trim(), n);
    }
}

#[test]
fn min_depth_of_stage_four_is_one() {
    assert_eq!(stdout_of(&["mathias", "min-depth", "--vstage", "4"]).trim(), "1");
}

#[test]
fn check_bi_identity_fixture_exits_zero() {
    let out = interpres(&[
        "interp",
        "check-bi",
        &fixture("path3.json"),
        &fixture("path3.json"),
        &fixture("bi_identity.json"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn check_syn_reversal_on_a_cycle_passes() {
    let out = interpres(&[
        "interp",
        "check-syn",
        &fixture("cycle3.json"),
        &fixture("cycle3.json"),
        &fixture("bi_reversal.json"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn check_mutual_between_opposite_paths() {
    let out = interpres(&[
        "interp",
        "check-mutual",
        &fixture("path3.json"),
        &fixture("reversed_path3.json"),
        &fixture("reversal_interp.json"),
        &fixture("reversal_interp.json"),
    ]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn quotient_of_a_four_cycle_by_antipodes() {
    let text = stdout_of(&[
        "--json",
        "model",
        "quotient",
        &fixture("cycle4.json"),
        &fixture("eq_antipodal.json"),
    ]);
    let report: ReportSchema = serde_json::from_str(&text).expect("schema");
    assert_eq!(report.command, "model quotient");
    let witness = &report.checks[0].witness;
    assert_eq!(witness["projection"], serde_json::json!([0, 1, 0, 1]));
    assert_eq!(witness["structure"]["domain"], 2);
}

#[test]
fn eval_agrees_with_the_library() {
    let out = stdout_of(&["logic", "eval", &fixture("cycle3.json"), "Ax.Ey.E(x,y)"]);
    assert_eq!(out.trim(), "true");
    let out = stdout_of(&["logic", "eval", &fixture("path3.json"), "Ax.Ey.E(x,y)"]);
    assert_eq!(out.trim(), "false");
}

#[test]
fn eval_with_assignment() {
    let out = stdout_of(&[
        "logic",
        "eval",
        &fixture("path3.json"),
        "E(x,y)",
        "--assign",
        "x=0,y=1",
    ]);
    assert_eq!(out.trim(), "true");
}

#[test]
fn wf_and_ext_verdicts() {
    assert!(interpres(&["model", "wf", &fixture("path3.json")]).status.success());
    let cyclic = interpres(&["model", "wf", &fixture("cycle3.json")]);
    assert_eq!(cyclic.status.code(), Some(1), "cycles are not well-founded");
}

#[test]
fn iso_verdict_between_paths() {
    let out = interpres(&[
        "model",
        "iso",
        &fixture("path3.json"),
        &fixture("reversed_path3.json"),
    ]);
    // a path and its reversal are isomorphic as abstract graphs
    assert!(out.status.success());
    let different = interpres(&["model", "iso", &fixture("path3.json"), &fixture("cycle3.json")]);
    assert_eq!(different.status.code(), Some(1));
}

#[test]
fn coded_pair_membership() {
    let out = interpres(&["hf", "member", &fixture("pair_zero.json"), &fixture("pair_one.json")]);
    assert!(out.status.success());
    let reverse = interpres(&["hf", "member", &fixture("pair_one.json"), &fixture("pair_zero.json")]);
    assert_eq!(reverse.status.code(), Some(1));
}

#[test]
fn collapse_prints_the_von_neumann_chain() {
    let text = stdout_of(&["hf", "collapse", &fixture("rel_chain.json")]);
    let values: Vec<String> = serde_json::from_str(&text).expect("JSON list");
    assert_eq!(values, vec!["{}", "{{}}", "{{},{{}}}"]);
}

#[test]
fn double_iso_swap_bijection() {
    let text = stdout_of(&["--json", "hf", "double-iso", &fixture("double_swap.json")]);
    let report: ReportSchema = serde_json::from_str(&text).expect("schema");
    assert_eq!(report.checks[0].witness, serde_json::json!([1, 0]));
}

#[test]
fn theory_disjunction_has_product_size() {
    let text = stdout_of(&[
        "interp",
        "theory-or",
        &fixture("theory_loop.json"),
        &fixture("theory_noloop.json"),
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("JSON");
    assert_eq!(value["axioms"].as_array().unwrap().len(), 1);
    assert_eq!(value["axioms"][0], "(Ex.E(x,x) | Ax.~E(x,x))");
}

#[test]
fn translate_reversal_of_an_edge() {
    let text = stdout_of(&[
        "interp",
        "translate",
        &fixture("reversal_interp.json"),
        "~E(x,y)",
        "--sig",
        "E/2",
    ]);
    assert_eq!(text.trim(), "~E(y__1,x__1)");
}

#[test]
fn apply_reports_representatives() {
    let text = stdout_of(&[
        "--json",
        "interp",
        "apply",
        &fixture("path3.json"),
        &fixture("reversal_interp.json"),
    ]);
    let report: ReportSchema = serde_json::from_str(&text).expect("schema");
    let witness = &report.checks[0].witness;
    assert_eq!(witness["structure"]["domain"], 3);
    assert_eq!(witness["representatives"], serde_json::json!([[0], [1], [2]]));
}

#[test]
fn compose_multiplies_dimensions() {
    let text = stdout_of(&[
        "interp",
        "compose",
        &fixture("reversal_interp.json"),
        &fixture("reversal_interp.json"),
        "--sig",
        "E/2",
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("JSON");
    assert_eq!(value["dimension"], 1);
}

#[test]
fn usage_errors_exit_two() {
    let out = interpres(&["no-such-command"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn validation_errors_exit_three() {
    let out = interpres(&["hf", "decode", "notanumber"]);
    assert_eq!(out.status.code(), Some(3));
    let out = interpres(&["logic", "eval", "/nonexistent.json", "Ax.x=x"]);
    assert_eq!(out.status.code(), Some(3));
    // formula over an unknown symbol
    let out = interpres(&["logic", "eval", &fixture("path3.json"), "R(x)"]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn json_error_reports_use_the_error_verdict() {
    let out = interpres(&["--json", "hf", "decode", "notanumber"]);
    assert_eq!(out.status.code(), Some(3));
    let report: ReportSchema =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).expect("schema");
    assert_eq!(report.checks[0].verdict, "error");
}

#[test]
fn json_reports_round_trip_for_checks() {
    let out = interpres(&["--json", "model", "wf", &fixture("cycle3.json")]);
    let report: ReportSchema =
        serde_json::from_str(&String::from_utf8_lossy(&out.stdout)).expect("schema");
    assert_eq!(report.command, "model wf");
    assert_eq!(report.checks.len(), 1);
    assert_eq!(report.checks[0].name, "well-founded");
    assert_eq!(report.checks[0].verdict, "fail");
}

#[test]
fn tower_commands_cover_the_seeded_hierarchy() {
    assert_eq!(stdout_of(&["mathias", "tower-sub", "{{}}", "{{}}"]).trim(), "{{{}}}");
    assert!(interpres(&["mathias", "in-tower", "{{{}}}", "{{}}"]).status.success());
    let skips = interpres(&["mathias", "in-tower", "{{},{{}}}", "{{}}"]);
    assert_eq!(skips.status.code(), Some(1), "the chain through {{}} skips the seed");
    let stage: serde_json::Value =
        serde_json::from_str(&stdout_of(&["mathias", "stage", "{{}}", "2"])).unwrap();
    assert_eq!(stage["size"], 2);
    let descents: serde_json::Value =
        serde_json::from_str(&stdout_of(&["mathias", "descents", "{{{}}}"])).unwrap();
    assert_eq!(descents.as_array().unwrap().len(), 1);
    let profile: serde_json::Value =
        serde_json::from_str(&stdout_of(&["mathias", "profile", "{{},{{}}}"])).unwrap();
    assert_eq!(profile["constant"], 3);
}

#[test]
fn closure_command_accepts_the_v4_sample() {
    let out = interpres(&["mathias", "closure", "2", "--v4-transitive"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn scott_command_emits_a_loadable_interpretation() {
    // membership structure of V3 with a merging equivalence, reduced
    let v3 = r#"{"domain": 4, "relations": {"E": [[0,1],[1,2],[0,3],[1,3]]}}"#;
    let dir = std::env::temp_dir().join("interpres-scott-test");
    std::fs::create_dir_all(&dir).unwrap();
    let model = dir.join("v3.json");
    std::fs::write(&model, v3).unwrap();
    let interp = dir.join("merge.json");
    std::fs::write(
        &interp,
        r#"{"dimension":1,"domain":"x1=x1","equality":"(x1=x2 | ((x1=p1 | x1=p2) & (x2=p1 | x2=p2)))","relations":{"E":"~(x1=x1)"},"params":[1,2]}"#,
    )
    .unwrap();
    let text = stdout_of(&[
        "interp",
        "scott",
        model.to_str().unwrap(),
        interp.to_str().unwrap(),
    ]);
    let value: serde_json::Value = serde_json::from_str(&text).expect("JSON");
    assert!(value["equality"].as_str().unwrap().contains('p'));
    // the reduced interpretation loads and applies
    let reduced = dir.join("reduced.json");
    std::fs::write(&reduced, text).unwrap();
    let out = interpres(&["interp", "apply", model.to_str().unwrap(), reduced.to_str().unwrap()]);
    assert!(out.status.success());
}
