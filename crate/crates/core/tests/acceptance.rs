//! The acceptance suite as an integration test: one pass/fail line per
//! criterion, every threshold pinned in `maxatlas::acceptance`.

use maxatlas::acceptance;

#[test]
fn acceptance_criteria() {
    let reports = acceptance::run_all();
    let mut failed = Vec::new();
    for r in &reports {
        println!(
            "{} [{}] {} ({} ms) - {}",
            if r.pass { "PASS" } else { "FAIL" },
            r.id,
            r.name,
            r.millis,
            r.details
        );
        if !r.pass {
            failed.push(r.id);
        }
    }
    assert!(failed.is_empty(), "criteria failed: {failed:?}");
}
