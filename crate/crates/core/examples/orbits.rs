//! G_p- and G_q-orbits on projective lines, with stabilizers.

use gl2_restrict::ffield::{FieldTower, Level};
use gl2_restrict::grp::SubgroupSpec;
use gl2_restrict::projline;

fn main() -> gl2_restrict::Result<()> {
    let t = FieldTower::build(3, 3)?;
    for (acting, space) in [(SubgroupSpec::GQ, Level::Fq2), (SubgroupSpec::GP, Level::Fq)] {
        let d = projline::orbit_decomposition(&t, acting, space)?;
        println!("{}", serde_json::to_string_pretty(&d.to_json(&t)).unwrap());
    }
    let split = projline::split_epsilon_orbit(&t)?;
    let sizes = split.sizes();
    println!(
        "G_q-orbit of eps splits into {} G_p-orbits: first {} then {} of size {}",
        sizes.len(),
        sizes[0],
        sizes.len() - 1,
        sizes[1]
    );
    Ok(())
}
