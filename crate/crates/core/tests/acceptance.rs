//! Criteria 1 to 10, each with a wall-clock bound.

use std::io::Write;
use std::time::{Duration, Instant};

use umf_core::suite::{criterion, SuiteConfig, CRITERIA};

const BOUNDS_SECS: [u64; CRITERIA] = [1, 5, 5, 60, 5, 10, 120, 10, 10, 30];

#[test]
fn acceptance() {
    let cfg = SuiteConfig::default();
    let mut failed = Vec::new();
    for n in 1..=CRITERIA {
        let start = Instant::now();
        let checks = criterion(n, &cfg);
        let elapsed = start.elapsed();
        let bound = Duration::from_secs(BOUNDS_SECS[n - 1]);
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass) && elapsed < bound;
        // Bypasses libtest output capture.
        let mut out = std::io::stdout().lock();
        let _ = writeln!(
            out,
            "{} criterion {n} ({:.3}s, bound {}s)",
            if pass { "PASS" } else { "FAIL" },
            elapsed.as_secs_f64(),
            bound.as_secs()
        );
        for c in &checks {
            let _ = writeln!(out, "    {c}");
        }
        if !pass {
            failed.push(n);
        }
    }
    assert!(failed.is_empty(), "failed criteria: {failed:?}");
}
