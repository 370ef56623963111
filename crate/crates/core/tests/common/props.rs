//! Properties shared by the proptest suite and the acceptance run. Each takes
//! plain indices so that strategies stay trivial.

use std::sync::OnceLock;

use gl2_restrict::brauer;
use gl2_restrict::ffield::{Elem, Field, FieldTower, Level};
use gl2_restrict::grp::{self, Mat2, SubgroupSpec};
use gl2_restrict::linalg::upoly;
use gl2_restrict::projline::{self, ProjPoint};
use gl2_restrict::reps::{self, CharacterSpec, Rep};

use super::{gl2, prime_field, stabilizer};

pub const PARAMS: [(u32, u32); 5] = [(3, 1), (3, 2), (3, 3), (5, 1), (5, 2)];

pub struct Fixture {
    pub tower: FieldTower,
    pub gp: Vec<Mat2>,
    pub classes: Vec<Mat2>,
}

pub fn fixture(i: usize) -> &'static Fixture {
    static CELLS: OnceLock<Vec<Fixture>> = OnceLock::new();
    let all = CELLS.get_or_init(|| {
        PARAMS
            .iter()
            .map(|&(p, f)| {
                let tower = FieldTower::build(p, f).unwrap();
                let k = tower.top();
                let gp = gl2(k, &prime_field(k));
                let classes = grp::p_regular_class_reps(&tower);
                Fixture { tower, gp, classes }
            })
            .collect()
    });
    &all[i % all.len()]
}

fn nth(k: &Field, i: usize) -> Elem {
    k.elements().nth(i % k.size() as usize).unwrap()
}

fn check(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

pub fn field_axioms(fx: usize, a: usize, b: usize, c: usize) -> Result<(), String> {
    let t = &fixture(fx).tower;
    for (_, k) in t.levels() {
        let (a, b, c) = (nth(k, a), nth(k, b), nth(k, c));
        check(k.add(a, k.add(b, c)) == k.add(k.add(a, b), c), || "additive associativity".into())?;
        check(k.mul(a, k.mul(b, c)) == k.mul(k.mul(a, b), c), || "multiplicative associativity".into())?;
        check(k.mul(a, k.add(b, c)) == k.add(k.mul(a, b), k.mul(a, c)), || "distributivity".into())?;
        check(k.add(a, k.neg(a)) == k.zero(), || "negation".into())?;
        check(k.mul(a, b) == k.mul(b, a), || "commutativity".into())?;
        if !a.is_zero() {
            check(k.mul(a, k.inv(a)) == k.one(), || "inverse".into())?;
            check(k.pow(a, k.size() as i64 - 1) == k.one(), || "unit order".into())?;
        }
        let squares = k.elements().filter(|&x| !x.is_zero() && k.is_square(x)).count();
        check(squares as u32 == (k.size() - 1) / 2, || "half the units are squares".into())?;
    }
    Ok(())
}

pub fn embeddings_commute(fx: usize, a: usize, b: usize) -> Result<(), String> {
    let t = &fixture(fx).tower;
    let levels = [Level::Fp, Level::Fp2, Level::Fq, Level::Fq2];
    for &from in &levels {
        let kf = t.field(from);
        let (x, y) = (t.elem(from, nth(kf, a)), t.elem(from, nth(kf, b)));
        for &to in &levels {
            if !t.degree_of(to).is_multiple_of(t.degree_of(from)) {
                check(t.embed(x, to).is_err(), || format!("{from:?} -> {to:?} should not embed"))?;
                continue;
            }
            let kt = t.field(to);
            let e = |z| t.embed(z, to).unwrap().value();
            let sum = t.elem(from, kf.add(x.value(), y.value()));
            let prod = t.elem(from, kf.mul(x.value(), y.value()));
            check(e(sum) == kt.add(e(x), e(y)), || format!("{from:?} -> {to:?} additive"))?;
            check(e(prod) == kt.mul(e(x), e(y)), || format!("{from:?} -> {to:?} multiplicative"))?;
            check(e(t.elem(from, kf.one())) == kt.one(), || "unital".into())?;
            // Through the intermediate level and back to the top.
            check(t.lift(t.embed(x, to).unwrap()) == t.lift(x), || format!("{from:?} -> {to:?} -> top"))?;
        }
    }
    Ok(())
}

pub fn orbit_stabilizer(fx: usize, i: usize) -> Result<(), String> {
    let f = fixture(fx);
    let k = f.tower.top();
    let pt = if i % (k.size() as usize + 1) == k.size() as usize {
        ProjPoint::Infinity
    } else {
        ProjPoint::Finite(nth(k, i))
    };
    let orbit = projline::orbit(k, &grp::generators(&f.tower), pt);
    let naive = match pt {
        ProjPoint::Finite(x) => Some(x),
        ProjPoint::Infinity => None,
    };
    let stab = stabilizer(k, &f.gp, naive);
    check(orbit.len() * stab.len() == f.gp.len(), || {
        format!("|orbit| {} * |stab| {} != {}", orbit.len(), stab.len(), f.gp.len())
    })
}

/// A small representation of `G_p` picked by `kind`.
pub fn sample_rep(fx: usize, kind: usize, r: i64, s: i64) -> Rep {
    let t = &fixture(fx).tower;
    let gp = SubgroupSpec::GP;
    let b = u64::MAX;
    match kind % 6 {
        0 => reps::induce(t, SubgroupSpec::BP, CharacterSpec::chi_rs(r, s, SubgroupSpec::BP), gp, b).unwrap(),
        1 => reps::induce(t, SubgroupSpec::TP, CharacterSpec::omega_2(r), gp, b).unwrap(),
        2 => reps::induce(t, SubgroupSpec::SP, CharacterSpec::chi_rs(r, s, SubgroupSpec::SP), gp, b).unwrap(),
        3 => reps::tensor(
            reps::induce(t, SubgroupSpec::BP, CharacterSpec::chi_rs(r, s, SubgroupSpec::BP), gp, b).unwrap(),
            reps::steinberg_model(t),
        )
        .unwrap(),
        4 => reps::induce(t, SubgroupSpec::BQ, CharacterSpec::chi_r(r), SubgroupSpec::GQ, b)
            .unwrap()
            .restrict(t, gp)
            .unwrap(),
        _ => reps::tensor(reps::det_power(gp, s), reps::steinberg_model(t)).unwrap(),
    }
}

pub fn monomial_matches_dense(fx: usize, kind: usize, r: i64, s: i64) -> Result<(), String> {
    let f = fixture(fx);
    let rep = sample_rep(fx, kind, r, s);
    let a = brauer::fingerprint(&f.tower, &rep, &f.classes).unwrap();
    let b = brauer::fingerprint_dense(&f.tower, &rep, &f.classes).unwrap();
    check(brauer::compare(&a, &b).is_equal(), || format!("{} differs", rep.name()))
}

pub fn sum_is_multiplicative(fx: usize, k1: usize, k2: usize, r: i64, s: i64, m: u64, n: u64) -> Result<(), String> {
    let f = fixture(fx);
    let k = f.tower.top();
    let (a, b) = (sample_rep(fx, k1, r, s), sample_rep(fx, k2, s, r));
    let sum = reps::direct_sum(SubgroupSpec::GP, vec![(a.clone(), m), (b.clone(), n)]).unwrap();
    let fs = brauer::fingerprint(&f.tower, &sum, &f.classes).unwrap();
    let fa = brauer::fingerprint(&f.tower, &a, &f.classes).unwrap();
    let fb = brauer::fingerprint(&f.tower, &b, &f.classes).unwrap();
    check(fs.dim == m as usize * a.dim() + n as usize * b.dim(), || "dimension".into())?;
    for ((x, y), z) in fa.polys.iter().zip(&fb.polys).zip(&fs.polys) {
        let want = upoly::mul(k, &upoly::pow(k, x, m), &upoly::pow(k, y, n));
        check(&want == z, || "product of characteristic polynomials".into())?;
    }
    Ok(())
}

pub fn fingerprint_is_class_function(fx: usize, kind: usize, r: i64, g: usize, h: usize) -> Result<(), String> {
    let f = fixture(fx);
    let k = f.tower.top();
    let rep = sample_rep(fx, kind, r, 1 - r);
    let (g, h) = (f.gp[g % f.gp.len()], f.gp[h % f.gp.len()]);
    let conj = h.mul(&g, k).mul(&h.inv(k), k);
    check(
        brauer::charpoly_at(&f.tower, &rep, &g) == brauer::charpoly_at(&f.tower, &rep, &conj),
        || format!("{} not conjugation invariant", rep.name()),
    )
}

pub fn rep_is_homomorphism(fx: usize, kind: usize, r: i64, s: i64, g: usize, h: usize) -> Result<(), String> {
    let f = fixture(fx);
    let k = f.tower.top();
    let rep = sample_rep(fx, kind, r, s);
    let (g, h) = (f.gp[g % f.gp.len()], f.gp[h % f.gp.len()]);
    let lhs = rep.matrix(&f.tower, &g.mul(&h, k)).unwrap();
    let rhs = rep.matrix(&f.tower, &g).unwrap().mul(&rep.matrix(&f.tower, &h).unwrap(), k);
    check(lhs == rhs, || format!("{} is not multiplicative", rep.name()))
}
