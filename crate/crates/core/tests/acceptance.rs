//! Runs every acceptance criterion and prints one PASS/FAIL line each.

use std::process::ExitCode;

use forkalg::verify::{criterion_count, run};

fn main() -> ExitCode {
    let mut failed = Vec::new();
    for id in 1..=criterion_count() {
        let outcome = run(id);
        println!("{outcome} [{} ms]", outcome.millis);
        if !outcome.passed {
            failed.push(id);
        }
    }
    if failed.is_empty() {
        println!("acceptance: {} of {} criteria passed", criterion_count(), criterion_count());
        ExitCode::SUCCESS
    } else {
        println!("acceptance: failed criteria {failed:?}");
        ExitCode::FAILURE
    }
}
