mod common;

use std::collections::BTreeSet;

use common::*;
use gl2_restrict::brauer::{self, IsoVerdict};
use gl2_restrict::ffield::{poly, FieldTower, Level};
use gl2_restrict::grp::{self, Mat2, SubgroupSpec};
use gl2_restrict::mackey;
use gl2_restrict::projline::{self, ProjPoint};
use gl2_restrict::reps::{self, CharacterSpec, Rep};
use gl2_restrict::verify::formulas;

fn tower(p: u32, f: u32) -> FieldTower {
    FieldTower::build(p, f).unwrap()
}

#[test]
fn tower_levels_and_defining_polynomials() {
    let t = tower(3, 1);
    let d = t.describe();
    assert_eq!(d.polys.keys().copied().collect::<Vec<_>>(), vec![1, 2]);
    let t = tower(3, 2);
    assert_eq!(t.q(), 9);
    assert_eq!(t.top().size(), 81);
    assert_eq!(t.field(Level::Fp2).size(), t.field(Level::Fq).size());
    for (p, f) in [(3, 3), (5, 2), (7, 2)] {
        for (deg, m) in tower(p, f).describe().polys {
            assert_eq!(m.len() as u32, deg + 1);
            assert_eq!(*m.last().unwrap(), 1);
            assert!(poly::is_irreducible(&m, p));
        }
    }
    assert!(FieldTower::build(2, 3).is_err());
}

#[test]
fn eta_and_epsilon_by_exhaustion() {
    // (3,1): squares of F_3 are {0, 1}, so eta^2 = 2 and epsilon = eta.
    let t = tower(3, 1);
    let k = t.top();
    let f3 = prime_field(k);
    let squares: BTreeSet<_> = f3.iter().map(|&x| k.mul(x, x)).collect();
    let non_squares: Vec<_> = f3.iter().filter(|x| !squares.contains(x)).collect();
    assert_eq!(non_squares, vec![&k.from_int(2)]);
    let eta = t.eta_top();
    assert_eq!(k.mul(eta, eta), k.from_int(2));
    assert!(!f3.contains(&eta));
    assert_eq!(t.epsilon_top(), eta);

    // (3,2): eps^2 is one of the non-squares of F_9 and eps is not in F_9.
    let t = tower(3, 2);
    let k = t.top();
    let f9 = subfield(k, 9);
    let sq9: BTreeSet<_> = f9.iter().map(|&x| k.mul(x, x)).collect();
    let eps = t.epsilon_top();
    assert!(!f9.contains(&eps));
    let e2 = k.mul(eps, eps);
    assert!(f9.contains(&e2) && !sq9.contains(&e2));
    let sq81: BTreeSet<_> = k.elements().filter(|x| !x.is_zero()).map(|x| k.mul(x, x)).collect();
    assert_eq!(sq81.len(), 40);

    // (3,3): eps is eta and lies outside F_27.
    let t = tower(3, 3);
    let k = t.top();
    assert_eq!(t.epsilon_top(), t.eta_top());
    assert!(!subfield(k, 27).contains(&t.epsilon_top()));
    let e2 = k.mul(t.eta_top(), t.eta_top());
    assert!(prime_field(k).contains(&e2));
}

#[test]
fn frobenius_moves_epsilon_for_even_f() {
    for (p, f) in [(3, 2), (5, 2), (3, 4)] {
        let t = tower(p, f);
        let k = t.top();
        let eps = t.epsilon_top();
        assert_ne!(k.frobenius(eps, f), eps);
        assert_eq!(k.frobenius(eps, 0), eps);
    }
}

#[test]
fn subgroup_orders_and_membership() {
    let t = tower(3, 1);
    assert_eq!(grp::enumerate(&t, SubgroupSpec::GP, u64::MAX).unwrap().len(), 48);
    let t = tower(3, 2);
    assert_eq!(grp::enumerate(&t, SubgroupSpec::TQ, u64::MAX).unwrap().len(), 80);
    let t5 = tower(5, 1);
    assert_eq!(grp::enumerate(&t5, SubgroupSpec::ZP, u64::MAX).unwrap().len(), 4);

    let k = t.top();
    let one = k.one();
    let z = k.zero();
    assert!(grp::contains(&t, SubgroupSpec::BQ, &Mat2::new(one, one, z, one)).unwrap());
    assert!(!grp::contains(&t, SubgroupSpec::BQ, &Mat2::new(one, z, one, one)).unwrap());
    let eta2 = k.mul(t.eta_top(), t.eta_top());
    assert!(grp::contains(&t, SubgroupSpec::TP, &Mat2::new(z, one, eta2, z)).unwrap());
}

#[test]
fn torus_meets_small_group() {
    for (p, f, size, spec) in [(3, 2, 2, SubgroupSpec::ZP), (3, 3, 8, SubgroupSpec::TP), (5, 2, 4, SubgroupSpec::ZP)] {
        let t = tower(p, f);
        let k = t.top();
        let gp = gl2(k, &prime_field(k));
        let inside: Vec<_> = gp
            .iter()
            .filter(|g| grp::contains(&t, SubgroupSpec::TQ, g).unwrap())
            .collect();
        assert_eq!(inside.len(), size, "({p},{f})");
        let lib = grp::intersect_with_gp(&t, SubgroupSpec::TQ).unwrap();
        assert_eq!(lib.elements.len(), size);
        assert_eq!(lib.kind, Some(spec));
    }
}

/// Conjugacy classes of `GL_2(F_p)` by brute force; returns (all, p-regular).
fn class_counts(p: u32) -> (usize, usize) {
    let t = tower(p, 1);
    let k = t.top();
    let g = gl2(k, &prime_field(k));
    let mut seen = BTreeSet::new();
    let (mut all, mut reg) = (0, 0);
    for x in &g {
        if seen.contains(x) {
            continue;
        }
        let cls: BTreeSet<Mat2> = g.iter().map(|h| h.mul(x, k).mul(&h.inv(k), k)).collect();
        seen.extend(cls);
        all += 1;
        if x.order(k) % p as u64 != 0 {
            reg += 1;
        }
    }
    (all, reg)
}

#[test]
fn p_regular_classes_match_brute_force() {
    assert_eq!(class_counts(3), (8, 6));
    assert_eq!(grp::p_regular_class_reps(&tower(3, 1)).len(), 6);
    let (_, reg5) = class_counts(5);
    assert_eq!(grp::p_regular_class_reps(&tower(5, 2)).len(), reg5);
    for t in [tower(3, 2), tower(5, 1)] {
        let k = t.top();
        assert!(grp::p_regular_class_reps(&t).contains(&Mat2::identity(k)));
    }
}

#[test]
fn generators_close_up() {
    assert_eq!(grp::closure(tower(3, 1).top(), &grp::generators(&tower(3, 1))).len(), 48);
    let t = tower(5, 1);
    let gens = grp::generators(&t);
    assert_eq!(grp::closure(t.top(), &gens).len(), 480);
    let k = t.top();
    let no_diag: Vec<_> = gens.iter().copied().filter(|g| g.det(k) == k.one()).collect();
    assert!(no_diag.len() < gens.len());
    assert!(grp::closure(k, &no_diag).len() < 480);
}

#[test]
fn orbit_counts_match_closed_forms() {
    for (p, f) in [(3, 1), (3, 2), (3, 3), (3, 4), (5, 2), (5, 3), (7, 2)] {
        let t = tower(p, f);
        let (p, f) = (p as u64, f);
        let (small, _) = gp_orbits(&t);
        let generic = p * (p * p - 1);
        let prof = size_profile(&small);
        let generic_count = *prof.get(&(generic as usize)).unwrap_or(&0) as u64;
        assert_eq!(prof.get(&(p as usize + 1)), Some(&1));
        if f % 2 == 1 {
            assert_eq!(Some(generic_count), formulas::i1(p, f), "I1 at ({p},{f})");
            assert_eq!(small.len() as u64, 1 + generic_count);
        } else {
            assert_eq!(Some(generic_count), formulas::i2(p, f), "I2 at ({p},{f})");
            assert_eq!(prof.get(&((p * p - p) as usize)), Some(&1));
            assert_eq!(small.len() as u64, 2 + generic_count);
        }
        let lib = projline::orbit_decomposition(&t, SubgroupSpec::GP, Level::Fq).unwrap();
        let mut a = lib.sizes();
        let mut b: Vec<usize> = small.iter().map(Vec::len).collect();
        a.sort();
        b.sort();
        assert_eq!(a, b);
    }
}

#[test]
fn epsilon_orbit_splits_as_stated() {
    for (p, f, special, generic_count) in [(3, 2, 0, 3), (3, 3, 1, 29), (5, 2, 0, 5)] {
        let t = tower(p, f);
        let (_, big) = gp_orbits(&t);
        let prof = size_profile(&big);
        let g = p as usize * (p as usize * p as usize - 1);
        assert_eq!(prof.get(&g), Some(&generic_count));
        assert_eq!(prof.get(&(p as usize * p as usize - p as usize)).copied().unwrap_or(0), special);
        let j = if f % 2 == 0 { formulas::j(p as u64, f) } else { formulas::j_prime(p as u64, f) };
        assert_eq!(j, Some(generic_count as u64));
    }
    // All G_p-orbits of P^1(F_{q^2}) at (3,3): 2 from P^1(F_q), 30 from the rest.
    let t = tower(3, 3);
    let (small, big) = gp_orbits(&t);
    assert_eq!(small.len() + big.len(), 32);
    let all = projline::orbit_decomposition(&t, SubgroupSpec::GP, Level::Fq2).unwrap();
    assert_eq!(all.orbits.len(), 32);
    assert_eq!(all.total(), 730);
}

#[test]
fn stabilizers_by_brute_force() {
    for (p, f) in [(3, 2), (5, 2), (3, 3)] {
        let t = tower(p, f);
        let k = t.top();
        let (_, q) = qp(&t);
        let gq = gl2(k, &subfield(k, q));
        let s0 = stabilizer(k, &gq, Some(k.zero()));
        assert!(s0.iter().all(|g| g.entries()[2].is_zero()));
        assert_eq!(s0.len() as u64, (q - 1) * (q - 1) * q);
        let se = stabilizer(k, &gq, Some(t.epsilon_top()));
        assert_eq!(se.len() as u64, q * q - 1);
        for g in &se {
            assert!(grp::contains(&t, SubgroupSpec::TQ, g).unwrap());
        }
        let gp = gl2(k, &prime_field(k));
        for x in projline::generic_set(&t) {
            let s = stabilizer(k, &gp, Some(x));
            assert_eq!(s.len() as u64, p as u64 - 1, "x = {x:?}");
            assert!(s.iter().all(|g| {
                let [a, b, c, d] = g.entries();
                b.is_zero() && c.is_zero() && a == d
            }));
        }
    }
}

#[test]
fn coset_systems_and_double_cosets() {
    let t = tower(3, 2);
    let k = t.top();
    assert_eq!(mackey::coset_reps(&t, SubgroupSpec::BQ).unwrap().len(), 10);
    assert_eq!(mackey::coset_reps(&t, SubgroupSpec::TQ).unwrap().len(), 72);
    for x in subfield(k, 9) {
        assert_eq!(act(k, &mackey::g_x(&t, x), Some(k.zero())), Some(x));
    }
    assert_eq!(act(k, &mackey::w(&t), Some(k.zero())), None);
    let eps = t.epsilon_top();
    let (a, b) = (k.from_int(1), k.from_int(2));
    assert_eq!(act(k, &mackey::g_ab(&t, a, b), Some(eps)), Some(k.add(a, k.mul(b, eps))));

    let cases = [(3, 2, SubgroupSpec::BQ, 2), (3, 3, SubgroupSpec::BQ, 2), (3, 2, SubgroupSpec::TQ, 3)];
    for (p, f, small, n) in cases {
        let t = tower(p, f);
        let d = mackey::double_coset_reps(&t, small).unwrap();
        assert_eq!(d.cosets.len(), n, "({p},{f}) {}", small.name());
    }
    let t = tower(3, 2);
    let d = mackey::double_coset_reps(&t, SubgroupSpec::BQ).unwrap();
    let kinds: Vec<_> = d.cosets.iter().map(|c| c.intersection.kind).collect();
    assert_eq!(kinds, vec![Some(SubgroupSpec::BP), Some(SubgroupSpec::TP)]);
    assert_eq!(d.cosets[1].point, ProjPoint::Finite(t.eta_top()));
    let t = tower(3, 3);
    let d = mackey::double_coset_reps(&t, SubgroupSpec::BQ).unwrap();
    assert_eq!(d.cosets[1].intersection.kind, Some(SubgroupSpec::ZP));
}

#[test]
fn characters_on_named_elements() {
    let t = tower(3, 2);
    let k = t.top();
    let (z, one) = (k.zero(), k.one());
    let eta = t.eta_top();
    let tt = Mat2::new(z, one, k.mul(eta, eta), z);
    assert_eq!(CharacterSpec::omega_2(1).eval(&t, &tt).unwrap(), eta);

    // chi_r twisted by g_eta on [[a,b],[b eta^2,a]] is (a + b eta)^r.
    let g_eta = mackey::g_x(&t, eta);
    for r in 0..8 {
        let tw = CharacterSpec::chi_r(r).twist(g_eta);
        for a in prime_field(k) {
            for b in prime_field(k) {
                if a.is_zero() && b.is_zero() {
                    continue;
                }
                let h = Mat2::new(a, b, k.mul(b, k.mul(eta, eta)), a);
                assert_eq!(tw.eval(&t, &h).unwrap(), k.pow(k.add(a, k.mul(b, eta)), r));
            }
        }
    }
}

#[test]
fn split_torus_pieces_for_p3_r1() {
    // chi_r|Z_p with r = 1 induced to S_p: chi_{1,0} and chi_{2,-1} = chi_{0,1}.
    let t = tower(3, 1);
    let k = t.top();
    let want: BTreeSet<(u32, u32)> = [(1, 0), (0, 1)].into_iter().collect();
    let mut got = BTreeSet::new();
    for i in 1..3i64 {
        let chi = CharacterSpec::chi_rs(i, 1 - i, SubgroupSpec::SP);
        let two = k.from_int(2);
        let (va, vd) = (
            chi.eval(&t, &Mat2::diag(two, k.one())).unwrap(),
            chi.eval(&t, &Mat2::diag(k.one(), two)).unwrap(),
        );
        let e = |v| if v == k.one() { 0 } else { 1 };
        got.insert((e(va), e(vd)));
        let c = Mat2::scalar(two);
        assert_eq!(chi.eval(&t, &c).unwrap(), two);
    }
    assert_eq!(got, want);
}

fn fp_ind(t: &FieldTower, sub: SubgroupSpec, chi: CharacterSpec) -> Rep {
    reps::induce(t, sub, chi, SubgroupSpec::GP, u64::MAX).unwrap()
}

#[test]
fn brauer_examples() {
    let t = tower(3, 2);
    let classes = grp::p_regular_class_reps(&t);
    let a = fp_ind(&t, SubgroupSpec::BP, CharacterSpec::chi_rs(0, 0, SubgroupSpec::BP));
    let b = fp_ind(&t, SubgroupSpec::BP, CharacterSpec::chi_rs(1, 0, SubgroupSpec::BP));
    let fa = brauer::fingerprint(&t, &a, &classes).unwrap();
    let fb = brauer::fingerprint(&t, &b, &classes).unwrap();
    assert!(brauer::compare(&fa, &fa).is_equal());
    assert!(!brauer::compare(&fa, &fb).is_equal());

    // det twist: ind chi_{r,s} vs ind chi_{r-s} (x) det^s on G_q.
    let gq = SubgroupSpec::GQ;
    let gq_classes: Vec<Mat2> = classes.clone();
    for (r, s) in [(1, 1), (3, 5), (0, 2)] {
        let l = reps::induce(&t, SubgroupSpec::BQ, CharacterSpec::chi_rs(r, s, SubgroupSpec::BQ), gq, u64::MAX).unwrap();
        let rr = reps::tensor(
            reps::induce(&t, SubgroupSpec::BQ, CharacterSpec::chi_rs(r - s, 0, SubgroupSpec::BQ), gq, u64::MAX).unwrap(),
            reps::det_power(gq, s),
        )
        .unwrap();
        let fl = brauer::fingerprint(&t, &l, &gq_classes).unwrap();
        let fr = brauer::fingerprint(&t, &rr, &gq_classes).unwrap();
        assert!(brauer::compare(&fl, &fr).is_equal(), "r={r} s={s}");
    }

    // The inclusion of ind_{B_p} chi_r into the restriction.
    let big = reps::induce(&t, SubgroupSpec::BQ, CharacterSpec::chi_r(1), gq, u64::MAX)
        .unwrap()
        .restrict(&t, SubgroupSpec::GP)
        .unwrap();
    let small = fp_ind(&t, SubgroupSpec::BP, CharacterSpec::chi_rs(1, 0, SubgroupSpec::BP));
    assert!(brauer::hom_dim(&t, &small, &big, brauer::DEFAULT_HOM_BUDGET).unwrap() >= 1);
    let v = brauer::iso_probable(&t, &classes, &big, &big, 4, 7, brauer::DEFAULT_HOM_BUDGET).unwrap();
    assert_eq!(v, IsoVerdict::Iso);
}

#[test]
fn e1_is_an_isomorphism_at_r0() {
    let t = tower(3, 2);
    let classes = grp::p_regular_class_reps(&t);
    let lhs = reps::induce(&t, SubgroupSpec::BQ, CharacterSpec::chi_r(0), SubgroupSpec::GQ, u64::MAX)
        .unwrap()
        .restrict(&t, SubgroupSpec::GP)
        .unwrap();
    let rhs = reps::direct_sum(
        SubgroupSpec::GP,
        vec![
            (fp_ind(&t, SubgroupSpec::BP, CharacterSpec::chi_rs(0, 0, SubgroupSpec::BP)), 1),
            (fp_ind(&t, SubgroupSpec::TP, CharacterSpec::omega_2(0)), 1),
        ],
    )
    .unwrap();
    assert_eq!(lhs.dim(), 10);
    let v = brauer::iso_probable(&t, &classes, &lhs, &rhs, 8, 3, brauer::DEFAULT_HOM_BUDGET).unwrap();
    assert_eq!(v, IsoVerdict::Iso);
}

#[test]
fn steinberg_model_diagonal_action() {
    for p in [3u32, 5] {
        let t = tower(p, 1);
        let k = t.top();
        let st = reps::steinberg_model(&t);
        assert_eq!(st.dim(), p as usize);
        let (a, d) = (k.from_int(2), k.from_int(p as i64 - 1));
        let m = st.matrix(&t, &Mat2::diag(a, d)).unwrap();
        for i in 0..p as usize {
            for j in 0..p as usize {
                let want = if i == j {
                    k.mul(k.pow(a, (p as usize - 1 - i) as i64), k.pow(d, i as i64))
                } else {
                    k.zero()
                };
                assert_eq!(m.get(i, j), want);
            }
        }
    }
}
