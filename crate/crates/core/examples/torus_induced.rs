//! Restriction of ind_{T_q}^{G_q} omega_{2f}^r to G_p.

use gl2_restrict::verify::{self, Budgets, Context};

fn main() -> gl2_restrict::Result<()> {
    for (p, f, r) in [(3, 2, 1), (3, 3, 4)] {
        let ctx = Context::new(p, f, Budgets::default(), 1)?;
        for part in [1, 2] {
            let report = verify::check_t2(&ctx, r, part)?;
            println!(
                "({p},{f}) r={r} part {part}: {} {}",
                report.status.as_str(),
                serde_json::Value::Object(report.details)
            );
        }
    }
    Ok(())
}
