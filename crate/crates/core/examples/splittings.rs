//! ind_{Z_p}^{S_p} and ind_{Z_p}^{T_p} of chi_r split into distinct characters.

use gl2_restrict::grp::SubgroupSpec;
use gl2_restrict::reps::{self, CharacterSpec};
use gl2_restrict::verify::{self, Budgets, Context};

fn main() -> gl2_restrict::Result<()> {
    let ctx = Context::new(3, 2, Budgets::default(), 1)?;
    let t = &ctx.tower;
    let r = 1;
    for (into, cands) in [
        (SubgroupSpec::SP, reps::split_torus_characters(t)),
        (SubgroupSpec::TP, reps::aniso_torus_characters(t)),
    ] {
        let rep = reps::induce(t, SubgroupSpec::ZP, CharacterSpec::chi_rs(r, 0, SubgroupSpec::ZP), into, u64::MAX)?;
        let (found, total) = reps::diagonalize(t, &rep, &cands, u64::MAX)?;
        let names: Vec<String> = found.iter().map(|(i, m)| format!("{m}*{}", cands[*i])).collect();
        println!("ind_Z_p^{} chi_{r}: {total} dims -> {}", into.name(), names.join(" + "));
    }
    for r in 0..8 {
        println!("r={r}: {}", verify::check_splittings(&ctx, r)?.status.as_str());
    }
    Ok(())
}
