//! The Steinberg model Sym^{p-1} and ind_{S_p} chi = ind_{B_p} chi (x) St.

use gl2_restrict::ffield::FieldTower;
use gl2_restrict::grp::Mat2;
use gl2_restrict::reps;
use gl2_restrict::verify::{self, Budgets, Context};

fn main() -> gl2_restrict::Result<()> {
    let t = FieldTower::build(3, 1)?;
    let k = t.top();
    let st = reps::steinberg_model(&t);
    let g = Mat2::new(k.one(), k.one(), k.zero(), k.one());
    let m = st.matrix(&t, &g)?;
    println!("St on [[1,1],[0,1]] at p=3:");
    for i in 0..m.rows {
        let row: Vec<_> = (0..m.cols).map(|j| k.to_int(m.get(i, j)).unwrap()).collect();
        println!("  {row:?}");
    }
    for p in [3, 5] {
        let report = verify::check_gj(&Context::new(p, 1, Budgets::default(), 1)?)?;
        println!("p={p}: {} {}", report.status.as_str(), serde_json::Value::Object(report.details));
    }
    Ok(())
}
