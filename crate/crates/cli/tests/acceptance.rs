//! Runs the nine acceptance criteria on the default configuration and prints
//! one line per criterion. Known-infeasible criteria are reported as XFAIL and
//! do not fail the run.

use std::process::ExitCode;

use nsp_waves::verify::{suite_acceptable, Suite};
use nsp_waves::ExperimentConfig;

fn main() -> ExitCode {
    let cfg = ExperimentConfig::default();
    let mut suite = Suite::new(&cfg);
    let outcomes = suite.run_all(|o| println!("{}", o.line()));
    let passed = outcomes.iter().filter(|o| o.passed).count();
    let xfail = outcomes.iter().filter(|o| !o.passed && o.expected_failure).count();
    let failed = outcomes.len() - passed - xfail;
    println!("acceptance: {passed} passed, {xfail} expected failures, {failed} failed");
    if suite_acceptable(&outcomes) {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
