//! One PASS/FAIL line per acceptance criterion; exits non-zero if any fail.

use spinshift::verify;

fn main() {
    let fast = std::env::args().any(|a| a == "--fast");
    let mut failed = 0;
    for outcome in verify::run_all(fast) {
        println!("{}", outcome.line());
        if !outcome.pass {
            failed += 1;
        }
    }
    println!("{} of {} criteria passed", verify::CRITERIA.len() - failed, verify::CRITERIA.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
