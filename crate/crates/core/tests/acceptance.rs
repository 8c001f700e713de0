//! The acceptance suite: every criterion at its stated tolerance, one
//! pass/fail line each. `interpres selftest` runs the same suites.

use interpres_core::selftest::{run_criterion, CriterionResult};

fn check(index: usize, time_budget_ms: Option<u128>) -> CriterionResult {
    let r = run_criterion(index, 0);
    println!(
        "criterion {}: {} [{}] ({} ms) — {}",
        r.index,
        r.name,
        if r.pass { "PASS" } else { "FAIL" },
        r.millis,
        r.detail
    );
    assert!(r.pass, "criterion {} failed: {}", r.index, r.detail);
    if let Some(budget) = time_budget_ms {
        assert!(
            r.millis < budget,
            "criterion {} took {} ms, budget {} ms",
            r.index,
            r.millis,
            budget
        );
    }
    r
}

#[test]
fn criterion_1_translation_semantics() {
    check(1, Some(30_000));
}

#[test]
fn criterion_2_functoriality() {
    check(2, Some(30_000));
}

#[test]
fn criterion_3_ackermann() {
    check(3, Some(20_000));
}

#[test]
fn criterion_4_mostowski() {
    check(4, Some(60_000));
}

#[test]
fn criterion_5_scott_reduction() {
    check(5, None);
}

#[test]
fn criterion_6_coded_pairs() {
    check(6, None);
}

#[test]
fn criterion_7_double_membership_kernel() {
    check(7, None);
}

#[test]
fn criterion_8_mathias_numbers() {
    check(8, None);
}

#[test]
fn criterion_9_zermelo_tower() {
    check(9, None);
}
