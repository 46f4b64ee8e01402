//! Runs every verification suite once and reports criteria 1 to 12, one
//! line each. Plain main so the table is always printed; exits nonzero if
//! anything fails.

use parchi::verify::{criterion_of, run_acceptance};
use std::process::ExitCode;

fn main() -> ExitCode {
    let (reports, criteria) = match run_acceptance() {
        Ok(x) => x,
        Err(e) => {
            println!("acceptance suites failed to build: {e}");
            return ExitCode::FAILURE;
        }
    };
    for c in &criteria {
        let status = if c.passed { "PASS" } else { "FAIL" };
        let mut line = format!(
            "criterion {:>2} {status}  {:<46} checks={} failures={}",
            c.number, c.title, c.checks, c.failures
        );
        if !c.detail.is_empty() {
            line.push_str(&format!("  [{}]", c.detail));
        }
        println!("{line}");
    }

    // identities outside the numbered criteria still have to hold
    let extra: Vec<_> = reports
        .iter()
        .flat_map(|r| &r.records)
        .filter(|r| criterion_of(r).is_none())
        .collect();
    let extra_failed: Vec<_> = extra.iter().filter(|r| !r.passed).collect();
    println!(
        "supplementary identities: {} checked, {} failed",
        extra.len(),
        extra_failed.len()
    );
    for r in extra_failed.iter().take(5) {
        println!("  failed {} at {} ({:?})", r.identity, r.params, r.error);
    }

    let failed: Vec<u8> = criteria.iter().filter(|c| !c.passed).map(|c| c.number).collect();
    let ok = criteria.len() == 12 && failed.is_empty() && extra_failed.is_empty();
    println!("acceptance: {}", if ok { "PASS" } else { "FAIL" });
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
