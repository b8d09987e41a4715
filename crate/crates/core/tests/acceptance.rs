//! Acceptance criteria, one pass/fail line each with runtime and limit.
//! Runs without the libtest harness so the lines always print; a
//! positional argument like `7` or `C07` restricts to one criterion.

use std::process::ExitCode;

use geomon::suite::{run_check, SuiteConfig, CHECKS};

fn selected() -> Option<u8> {
    std::env::args()
        .skip(1)
        .filter(|a| !a.starts_with('-'))
        .find_map(|a| a.trim_start_matches(['C', 'c']).parse().ok())
}

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let only = selected();
    let mut failed = 0;
    for &(id, _, _) in CHECKS.iter().filter(|c| only.map_or(true, |o| o == c.0)) {
        let outcome = run_check(id, &cfg);
        println!("{}", outcome.line());
        failed += !outcome.passed() as usize;
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        ExitCode::FAILURE
    } else {
        ExitCode::SUCCESS
    }
}
