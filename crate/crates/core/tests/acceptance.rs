//! Runs every acceptance criterion and prints one line per criterion.
//! Set `MAGSPEC_FAST=1` for the subset without finite element solves.

use magspec_core::verify;
use magspec_core::SolverOptions;

fn main() {
    let fast = std::env::var("MAGSPEC_FAST").is_ok_and(|v| v == "1");
    let opts = SolverOptions::default();
    let mut failed = 0;
    for r in verify::run(fast, &opts) {
        println!("{}", r.line());
        failed += usize::from(!r.passed);
    }
    let control = verify::run_criterion(0, &opts);
    println!("{}", control.line());
    failed += usize::from(!control.passed);
    if failed > 0 {
        println!("acceptance: {failed} failing");
        std::process::exit(1);
    }
    println!("acceptance: all criteria pass");
}
