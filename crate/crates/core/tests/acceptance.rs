//! Full acceptance gate: runs every criterion, prints one verdict line per
//! criterion, and fails if any criterion fails.
//!
//! Run with `cargo test --test acceptance -- --nocapture` to see the
//! per-criterion measurements.

use tlevy::verify::{run_criterion, suite_criteria};

#[test]
fn all_criteria_pass() {
    let ids = suite_criteria("all").expect("the full suite exists");
    let mut failed = Vec::new();
    for &id in ids {
        let r = run_criterion(id);
        println!(
            "criterion {:2} {:<32} {}  [{:7.2}s]  {}",
            r.id,
            r.name,
            if r.passed { "PASS" } else { "FAIL" },
            r.seconds,
            r.detail
        );
        if !r.passed {
            failed.push((r.id, r.detail));
        }
    }
    assert!(
        failed.is_empty(),
        "failed criteria: {:?}",
        failed.iter().map(|(id, _)| id).collect::<Vec<_>>()
    );
}
