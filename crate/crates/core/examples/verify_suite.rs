//! Runs a check suite in-process and prints the summary.

use gl2_restrict::verify::{self, Budgets, Context, RPolicy, CHECK_IDS};

fn main() -> gl2_restrict::Result<()> {
    let ctx = Context::new(3, 2, Budgets::default(), 0)?;
    let tasks = verify::plan(&ctx, &CHECK_IDS, &RPolicy::Sample);
    let reports = verify::run_tasks(&ctx, &tasks, false)?;
    for r in &reports {
        println!("{:<9} {:?} {}", r.id, r.params.get("r"), r.status.as_str());
    }
    let s = verify::summarize(&reports);
    println!("pass {} fail {} skipped {}", s.pass, s.fail, s.skipped);
    Ok(())
}
