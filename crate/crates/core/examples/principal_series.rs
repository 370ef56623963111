//! Restriction of ind_{B_q}^{G_q} chi_r to G_p against the closed form.

use gl2_restrict::brauer;
use gl2_restrict::verify::{self, Budgets, Context};

fn main() -> gl2_restrict::Result<()> {
    for (p, f, r) in [(3, 2, 1), (3, 3, 1)] {
        let ctx = Context::new(p, f, Budgets::default(), 1)?;
        let lhs = verify::principal_series_lhs(&ctx, r, 0)?;
        for part in [1, 2] {
            let rhs = verify::t1_rhs(&ctx, r, part)?;
            let a = brauer::fingerprint(&ctx.tower, &lhs, &ctx.classes)?;
            let b = brauer::fingerprint(&ctx.tower, &rhs, &ctx.classes)?;
            println!("({p},{f}) r={r} part {part}: dim {} = {}", lhs.dim(), rhs.dim());
            println!("  rhs = {}", rhs.name());
            println!("  fingerprints equal: {}", brauer::compare(&a, &b).is_equal());
        }
        let report = verify::check_t1(&ctx, r, 1)?;
        println!("  check: {} {}", report.status.as_str(), serde_json::Value::Object(report.details));
    }
    Ok(())
}
