//! Brauer fingerprints, intertwiner spaces and randomized isomorphism tests.

use gl2_restrict::brauer;
use gl2_restrict::grp::SubgroupSpec;
use gl2_restrict::reps::{self, CharacterSpec};
use gl2_restrict::verify::{self, Budgets, Context};

fn main() -> gl2_restrict::Result<()> {
    let ctx = Context::new(3, 2, Budgets::default(), 1)?;
    let t = &ctx.tower;
    let budget = brauer::DEFAULT_HOM_BUDGET;
    let lhs = verify::principal_series_lhs(&ctx, 2, 0)?;
    let b = reps::induce(t, SubgroupSpec::BP, CharacterSpec::chi_rs(2, 0, SubgroupSpec::BP), SubgroupSpec::GP, u64::MAX)?;
    let tp = reps::induce(t, SubgroupSpec::TP, CharacterSpec::omega_2(2), SubgroupSpec::GP, u64::MAX)?;
    let rhs = reps::direct_sum(SubgroupSpec::GP, vec![(b.clone(), 1), (tp.clone(), 1)])?;

    let fp = brauer::fingerprint(t, &lhs, &ctx.classes)?;
    println!("{}", serde_json::to_string(&fp.to_json(t)).unwrap());
    for (name, src) in [("ind_B_p chi_2", &b), ("ind_T_p omega_2^2", &tp)] {
        let h = brauer::hom_space(t, src, &lhs, budget)?;
        println!("dim Hom({name}, restriction) = {} via {}", h.dim(), h.method());
    }
    let verdict = brauer::iso_probable(t, &ctx.classes, &lhs, &rhs, 8, 1, budget)?;
    println!("restriction vs {}: {verdict:?}", rhs.name());
    let other = reps::induce(t, SubgroupSpec::TP, CharacterSpec::omega_2(3), SubgroupSpec::GP, u64::MAX)?;
    let wrong = reps::direct_sum(SubgroupSpec::GP, vec![(b, 1), (other, 1)])?;
    let c = brauer::compare(&fp, &brauer::fingerprint(t, &wrong, &ctx.classes)?);
    println!("against {}: {}", wrong.name(), c.witness(t));
    Ok(())
}
