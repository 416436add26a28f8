//! Runs the nine acceptance criteria and prints one PASS/FAIL line each.

use std::process::ExitCode;

use softedge::verify::{run_suite, Suite, VerifyOptions};

fn main() -> ExitCode {
    let opts = VerifyOptions::default();
    let mut ok = true;
    for suite in Suite::ALL {
        let r = run_suite(suite, &opts);
        println!("{}", r.line());
        for n in &r.notes {
            println!("    {n}");
        }
        ok &= r.pass;
    }
    if ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
