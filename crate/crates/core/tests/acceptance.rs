//! Acceptance criteria, one line per criterion. Exits nonzero if any fail.
//! `OCCTIME_SCALE=full` selects the larger scale.

use std::process::ExitCode;

use occtime_core::verify::{run_check, Scale, Status, CRITERIA};

fn main() -> ExitCode {
    let scale = match std::env::var("OCCTIME_SCALE").as_deref() {
        Ok("full") => Scale::Full,
        _ => Scale::Quick,
    };
    let mut failed = 0;
    for (id, _, _) in CRITERIA {
        let r = run_check(id, scale);
        let tag = match r.status {
            Status::Pass => "PASS",
            Status::Fail => {
                failed += 1;
                "FAIL"
            }
        };
        let budget = r.budget_seconds.map(|b| format!(" / budget {b} s")).unwrap_or_default();
        println!(
            "[{tag}] criterion {id:>2} {}: worst {:.3e} (tol {:.1e}) in {:.2} s{budget} | {}",
            r.name, r.worst, r.tolerance, r.seconds, r.detail
        );
    }
    println!("{} of {} criteria passed", CRITERIA.len() - failed, CRITERIA.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
