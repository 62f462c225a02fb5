//! Acceptance criteria 1–14: one `pass`/`fail` line per criterion.
//!
//! `MLFRAC_SEED` overrides the pinned seed; `MLFRAC_SUITE` selects `fast`,
//! `full` (default) or a single criterion by name or number.

use std::process::ExitCode;

use mlfrac::verify::{run_with, Status, Suite, DEFAULT_SEED};

fn main() -> ExitCode {
    // libtest-style flags passed through by `cargo test` are ignored
    let seed = std::env::var("MLFRAC_SEED").ok().and_then(|s| s.parse().ok()).unwrap_or(DEFAULT_SEED);
    let suite: Suite = match std::env::var("MLFRAC_SUITE").as_deref().unwrap_or("full").parse() {
        Ok(s) => s,
        Err(e) => {
            eprintln!("{e}");
            return ExitCode::from(2);
        }
    };
    println!("acceptance suite `{}`, seed {seed}", suite.name());
    let report = run_with(&suite, seed, |r| {
        println!(
            "criterion {:>2} {:<21} {:<4}  statistic {:.6e}  threshold {:.3e}  [{:.0} ms]  {}",
            r.id,
            r.name,
            r.status,
            r.statistic,
            r.threshold,
            r.runtime_ms.unwrap_or(0.0),
            r.detail
        );
    });
    let count = |s| report.results.iter().filter(|r| r.status == s).count();
    println!("{} passed, {} failed, {} skipped", count(Status::Pass), count(Status::Fail), count(Status::Skip));
    if report.failed() {
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
