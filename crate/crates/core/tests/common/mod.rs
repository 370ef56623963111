//! Naive oracles written against raw field arithmetic only.

#![allow(dead_code)]

pub mod props;

use std::collections::{BTreeMap, BTreeSet};

use gl2_restrict::ffield::{Elem, Field, FieldTower};
use gl2_restrict::grp::Mat2;

/// Elements of the subfield of order `size`, as `x^size = x`.
pub fn subfield(k: &Field, size: u64) -> Vec<Elem> {
    k.elements().filter(|&x| k.pow(x, size as i64) == x || x.is_zero()).collect()
}

pub fn prime_field(k: &Field) -> Vec<Elem> {
    (0..k.characteristic() as i64).map(|i| k.from_int(i)).collect()
}

/// `GL_2` over the listed field, by the quadruple loop.
pub fn gl2(k: &Field, f: &[Elem]) -> Vec<Mat2> {
    let mut out = Vec::new();
    for &a in f {
        for &b in f {
            for &c in f {
                for &d in f {
                    if k.sub(k.mul(a, d), k.mul(b, c)) != k.zero() {
                        out.push(Mat2::new(a, b, c, d));
                    }
                }
            }
        }
    }
    out
}

/// A point `[1 : x]` as `Some(x)`, `[0 : 1]` as `None`.
pub type Pt = Option<Elem>;

pub fn line(f: &[Elem]) -> Vec<Pt> {
    let mut v: Vec<Pt> = f.iter().map(|&x| Some(x)).collect();
    v.push(None);
    v
}

/// `[u : v] -> [au + bv : cu + dv]`.
pub fn act(k: &Field, g: &Mat2, pt: Pt) -> Pt {
    let [a, b, c, d] = g.entries();
    let (u, v) = match pt {
        Some(x) => (k.add(a, k.mul(b, x)), k.add(c, k.mul(d, x))),
        None => (b, d),
    };
    if u.is_zero() {
        None
    } else {
        Some(k.div(v, u))
    }
}

/// Orbits of `group` on `pts`, each sorted, listed by least member.
pub fn orbits(k: &Field, group: &[Mat2], pts: &[Pt]) -> Vec<Vec<Pt>> {
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for &x in pts {
        if seen.contains(&x) {
            continue;
        }
        let o: BTreeSet<Pt> = group.iter().map(|g| act(k, g, x)).collect();
        seen.extend(o.iter().copied());
        out.push(o.into_iter().collect());
    }
    out
}

pub fn stabilizer(k: &Field, group: &[Mat2], x: Pt) -> Vec<Mat2> {
    group.iter().copied().filter(|g| act(k, g, x) == x).collect()
}

/// Orbit sizes as a sorted multiset.
pub fn size_profile(orbits: &[Vec<Pt>]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for o in orbits {
        *m.entry(o.len()).or_insert(0) += 1;
    }
    m
}

pub fn qp(t: &FieldTower) -> (u64, u64) {
    (t.p() as u64, t.q() as u64)
}

/// `G_p`-orbits on `P^1(F_q)` and on `P^1(F_{q^2}) \ P^1(F_q)`.
pub fn gp_orbits(t: &FieldTower) -> (Vec<Vec<Pt>>, Vec<Vec<Pt>>) {
    let k = t.top();
    let (_, q) = qp(t);
    let gp = gl2(k, &prime_field(k));
    let fq = subfield(k, q);
    let small = orbits(k, &gp, &line(&fq));
    let fqset: BTreeSet<Elem> = fq.iter().copied().collect();
    let rest: Vec<Pt> = k.elements().filter(|x| !fqset.contains(x)).map(Some).collect();
    (small, orbits(k, &gp, &rest))
}
