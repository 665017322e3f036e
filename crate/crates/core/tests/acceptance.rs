//! Acceptance suite: one PASS/FAIL line per criterion at the reference
//! dimensions. Run with `cargo test -p phase-ovm --test acceptance`.
//!
//! The strict-decrease part of criterion 10 cannot hold: the leading 8×8
//! block of `[ρ_W(0), η_W(0)]` only involves number states below 12, whose
//! matrix elements are the same at every truncation above that, so the
//! block deviation is identical at dims 40, 80 and 160. It is reported as a
//! failure and listed in `EXPECTED_FAILURES`; any other failure, or this
//! one passing, makes the suite exit non-zero.

use std::process::ExitCode;

use phase_ovm::verify::{run_criterion, VerifyConfig};

const EXPECTED_FAILURES: &[&str] = &["c10.block_deviation_strict_decrease"];

fn main() -> ExitCode {
    if std::env::args().any(|a| a == "--list") {
        return ExitCode::SUCCESS;
    }
    let cfg = VerifyConfig::default();
    let mut unexpected = Vec::new();
    for n in 1..=12 {
        let report = run_criterion(n, &cfg);
        let verdict = if report.passed() { "PASS" } else { "FAIL" };
        println!("criterion {n:>2} {verdict} {} ({:.2} s)", report.title, report.runtime_s);
        for check in &report.checks {
            let expected = EXPECTED_FAILURES.contains(&check.name.as_str());
            println!(
                "    {:<4} {} measured={:.6e} tolerance={:.3e}{}",
                check.status.as_str().to_uppercase(),
                check.qualified_name(),
                check.measured,
                check.tolerance,
                if expected { " (known unattainable)" } else { "" }
            );
            if check.passed() == expected {
                unexpected.push(check.name.clone());
            }
        }
    }
    if unexpected.is_empty() {
        println!("acceptance: all results as expected");
        ExitCode::SUCCESS
    } else {
        println!("acceptance: unexpected results in {unexpected:?}");
        ExitCode::FAILURE
    }
}
