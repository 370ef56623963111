//! Builds the tower F_p ⊂ F_q ⊂ F_{q^2} and prints its defining data.

use gl2_restrict::ffield::{FieldTower, Level};

fn main() -> gl2_restrict::Result<()> {
    for (p, f) in [(3, 1), (3, 2), (3, 3), (5, 2)] {
        let t = FieldTower::build(p, f)?;
        let k = t.top();
        let eps = t.epsilon_top();
        println!("p={p} f={f} q={} |F_q2|={}", t.q(), k.size());
        println!("  description: {}", serde_json::to_string(&t.describe()).unwrap());
        println!(
            "  eta in F_p? {}  eta^2 in F_p? {}",
            t.in_level(t.eta_top(), Level::Fp),
            t.in_level(k.mul(t.eta_top(), t.eta_top()), Level::Fp)
        );
        println!(
            "  eps in F_q? {}  eps^2 in F_q? {}  eps = eta? {}",
            t.in_level(eps, Level::Fq),
            t.in_level(k.mul(eps, eps), Level::Fq),
            eps == t.eta_top()
        );
    }
    Ok(())
}
