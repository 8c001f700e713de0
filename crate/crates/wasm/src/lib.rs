//! Browser bindings for the workbench: the Ackermann coding explorer,
//! formula evaluation, and interpretation application. Inputs and outputs
//! are JSON strings; failures come back as `{"error": "..."}` so the page
//! can render them inline.

use num_bigint::BigUint;
use serde_json::json;
use wasm_bindgen::prelude::wasm_bindgen;

use interpres_core::hf::{ack_decode, ack_encode, encode_coded_pair, HFSet, DEFAULT_ACK_CAP};
use interpres_core::interp::{apply, translate, Interpretation};
use interpres_core::logic::{evaluate, parse_formula, satisfying_tuples, Assignment};
use interpres_core::mathias::{growth_profile, min_depth};
use interpres_core::model::FinStructure;

fn err(e: impl std::fmt::Display) -> String {
    json!({ "error": e.to_string() }).to_string()
}

fn set_info(x: &HFSet) -> serde_json::Value {
    let code = ack_encode(x, DEFAULT_ACK_CAP)
        .map(|c| c.to_string())
        .unwrap_or_else(|_| "too large".to_string());
    json!({
        "literal": x.to_string(),
        "code": code,
        "rank": x.rank(),
        "cardinality": x.len(),
        "transitive": x.is_transitive(),
        "tc_size": x.tc_with_self().len(),
        "min_depth": min_depth(x),
        "profile": growth_profile(x).to_json(),
        "children": x.children().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "coded_pair": serde_json::to_value(encode_coded_pair(x)).expect("serializable"),
    })
}

/// Decode an Ackermann code (decimal string) into a set and its statistics.
#[wasm_bindgen]
pub fn ack_explore_code(code: &str) -> String {
    let n: BigUint = match code.trim().parse() {
        Ok(n) => n,
        Err(_) => return err("not a natural number"),
    };
    match ack_decode(&n, DEFAULT_ACK_CAP) {
        Ok(x) => set_info(&x).to_string(),
        Err(e) => err(e),
    }
}

/// Parse a set literal like `{{},{{}}}` and report its coding data.
#[wasm_bindgen]
pub fn ack_explore_literal(text: &str) -> String {
    match HFSet::parse(text) {
        Ok(x) => set_info(&x).to_string(),
        Err(e) => err(e),
    }
}

/// Evaluate a formula in a structure, including the relation its free
/// variables define.
#[wasm_bindgen]
pub fn eval_formula(model_json: &str, formula: &str, assign_json: &str) -> String {
    let m = match FinStructure::from_json(model_json) {
        Ok(m) => m,
        Err(e) => return err(e),
    };
    let f = match parse_formula(formula, m.signature()) {
        Ok(f) => f,
        Err(e) => return err(e),
    };
    let asg: Assignment = if assign_json.trim().is_empty() {
        Assignment::new()
    } else {
        match serde_json::from_str(assign_json) {
            Ok(a) => a,
            Err(e) => return err(format!("bad assignment JSON: {e}")),
        }
    };
    let free: Vec<String> = f.free_vars().into_iter().collect();
    let value = match evaluate(&m, &f, &asg) {
        Ok(v) => Some(v),
        Err(_) if !free.is_empty() => None, // uncovered variables: show the table instead
        Err(e) => return err(e),
    };
    let table = match satisfying_tuples(&m, &f, &free) {
        Ok(t) => t,
        Err(e) => return err(e),
    };
    json!({
        "rendered": f.render(),
        "depth": f.depth(),
        "free_variables": free,
        "value": value,
        "satisfying": table,
    })
    .to_string()
}

/// Apply an interpretation to a structure: the quotient, representatives,
/// and a translation preview for a sample formula.
#[wasm_bindgen]
pub fn apply_interpretation(model_json: &str, interp_json: &str, sample_formula: &str) -> String {
    let m = match FinStructure::from_json(model_json) {
        Ok(m) => m,
        Err(e) => return err(e),
    };
    let interp = match Interpretation::from_json(interp_json, Some(m.signature())) {
        Ok(i) => i,
        Err(e) => return err(e),
    };
    let applied = match apply(&interp, &m) {
        Ok(a) => a,
        Err(e) => return err(e),
    };
    let translation = if sample_formula.trim().is_empty() {
        serde_json::Value::Null
    } else {
        match parse_formula(sample_formula, interp.source())
            .map_err(|e| e.to_string())
            .and_then(|f| translate(&f, &interp).map_err(|e| e.to_string()))
        {
            Ok(t) => json!(t.render()),
            Err(e) => json!({ "error": e }),
        }
    };
    json!({
        "structure": serde_json::to_value(applied.structure.to_doc()).expect("serializable"),
        "representatives": applied.reps,
        "domain": applied.domain,
        "classes": applied.class_count(),
        "translation": translation,
    })
    .to_string()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn explorer_reports_code_three() {
        let out: serde_json::Value =
            serde_json::from_str(&ack_explore_literal("{{},{{}}}")).unwrap();
        assert_eq!(out["code"], "3");
        assert_eq!(out["rank"], 2);
        let back: serde_json::Value = serde_json::from_str(&ack_explore_code("3")).unwrap();
        assert_eq!(back["literal"], "{{},{{}}}");
    }

    #[test]
    fn eval_reports_value_and_table() {
        let model = r#"{"domain": 2, "relations": {"E": [[0, 1]]}}"#;
        let out: serde_json::Value =
            serde_json::from_str(&eval_formula(model, "Ey.E(x,y)", "")).unwrap();
        assert_eq!(out["satisfying"], serde_json::json!([[0]]));
    }

    #[test]
    fn apply_reports_quotient() {
        let model = r#"{"domain": 3, "relations": {"E": [[0, 1], [1, 2]]}}"#;
        let interp = r#"{"dimension":1,"domain":"x1=x1","equality":"x1=x2","relations":{"E":"E(x2,x1)"}}"#;
        let out: serde_json::Value =
            serde_json::from_str(&apply_interpretation(model, interp, "Ex.E(x,x)")).unwrap();
        assert_eq!(out["classes"], 3);
    }

    #[test]
    fn errors_come_back_inline() {
        let out: serde_json::Value = serde_json::from_str(&ack_explore_code("x")).unwrap();
        assert!(out["error"].is_string());
    }
}
