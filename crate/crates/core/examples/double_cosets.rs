//! Double cosets G_p \ G_q / H, their intersections, and twisted characters.

use gl2_restrict::ffield::FieldTower;
use gl2_restrict::grp::SubgroupSpec;
use gl2_restrict::mackey;
use gl2_restrict::projline::render_mat;
use gl2_restrict::reps::CharacterSpec;

fn main() -> gl2_restrict::Result<()> {
    let t = FieldTower::build(3, 2)?;
    for small in [SubgroupSpec::BQ, SubgroupSpec::TQ] {
        let d = mackey::double_coset_reps(&t, small)?;
        println!("G_p \\ G_q / {}: {} double cosets", small.name(), d.cosets.len());
        let chi = match small {
            SubgroupSpec::BQ => CharacterSpec::chi_r(1),
            _ => CharacterSpec::omega_2f(1),
        };
        for c in &d.cosets {
            let tw = mackey::twist_character(&t, &chi, &c.gamma, &c.intersection)?;
            println!(
                "  gamma={} orbit={} intersection={} character={}",
                render_mat(&t, &c.gamma),
                c.orbit_size,
                c.intersection.label(),
                tw
            );
        }
        let gammas: Vec<_> = d.cosets.iter().map(|c| c.gamma).collect();
        let audit = mackey::brute_force_double_cosets(&t, small, d.system.base, &gammas, u64::MAX)?;
        println!("  brute force: pieces {:?}, covered {}", audit.piece_sizes, audit.covered);
    }
    Ok(())
}
