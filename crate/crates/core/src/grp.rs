//! `GL_2` over tower levels. Matrix entries always live in the ambient field
//! `F_{q^2}`; the level of a subgroup says which subfield they are drawn from.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field, FieldTower, Level};

/// Default cap on the number of elements any enumeration may produce.
pub const DEFAULT_ENUM_BUDGET: u64 = 1_000_000;

/// The matrix `[[a, b], [c, d]]`. Ordering is lexicographic in `(a, b, c, d)`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Mat2 {
    pub a: Elem,
    pub b: Elem,
    pub c: Elem,
    pub d: Elem,
}

impl fmt::Debug for Mat2 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{:?},{:?}],[{:?},{:?}]]", self.a, self.b, self.c, self.d)
    }
}

impl Mat2 {
    pub fn new(a: Elem, b: Elem, c: Elem, d: Elem) -> Self {
        Mat2 { a, b, c, d }
    }

    pub fn identity(k: &Field) -> Self {
        Mat2::new(k.one(), Elem::ZERO, Elem::ZERO, k.one())
    }

    pub fn scalar(s: Elem) -> Self {
        Mat2::new(s, Elem::ZERO, Elem::ZERO, s)
    }

    pub fn diag(a: Elem, d: Elem) -> Self {
        Mat2::new(a, Elem::ZERO, Elem::ZERO, d)
    }

    pub fn det(&self, k: &Field) -> Elem {
        k.sub(k.mul(self.a, self.d), k.mul(self.b, self.c))
    }

    pub fn mul(&self, rhs: &Mat2, k: &Field) -> Mat2 {
        let dot = |x1, y1, x2, y2| k.add(k.mul(x1, y1), k.mul(x2, y2));
        Mat2 {
            a: dot(self.a, rhs.a, self.b, rhs.c),
            b: dot(self.a, rhs.b, self.b, rhs.d),
            c: dot(self.c, rhs.a, self.d, rhs.c),
            d: dot(self.c, rhs.b, self.d, rhs.d),
        }
    }

    /// # Panics
    /// If the matrix is singular.
    pub fn inv(&self, k: &Field) -> Mat2 {
        let di = k.inv(self.det(k));
        Mat2 {
            a: k.mul(self.d, di),
            b: k.neg(k.mul(self.b, di)),
            c: k.neg(k.mul(self.c, di)),
            d: k.mul(self.a, di),
        }
    }

    /// `self * g * self^{-1}`.
    pub fn conjugate(&self, g: &Mat2, k: &Field) -> Mat2 {
        self.mul(g, k).mul(&self.inv(k), k)
    }

    pub fn pow(&self, mut e: u64, k: &Field) -> Mat2 {
        let mut r = Mat2::identity(k);
        let mut b = *self;
        while e > 0 {
            if e & 1 == 1 {
                r = r.mul(&b, k);
            }
            b = b.mul(&b, k);
            e >>= 1;
        }
        r
    }

    pub fn entries(&self) -> [Elem; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn has_entries_in(&self, tower: &FieldTower, level: Level) -> bool {
        self.entries().iter().all(|&x| tower.in_level(x, level))
    }

    /// Multiplicative order.
    pub fn order(&self, k: &Field) -> u64 {
        let id = Mat2::identity(k);
        let mut x = *self;
        let mut n = 1;
        while x != id {
            x = x.mul(self, k);
            n += 1;
        }
        n
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SubgroupKind {
    Borel,
    AnisoTorus,
    SplitTorus,
    Center,
    Full,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SubgroupSpec {
    pub kind: SubgroupKind,
    pub level: Level,
}

impl SubgroupSpec {
    pub const fn new(kind: SubgroupKind, level: Level) -> Self {
        SubgroupSpec { kind, level }
    }

    /// `G_p = GL_2(F_p)`.
    pub const GP: SubgroupSpec = SubgroupSpec::new(SubgroupKind::Full, Level::Fp);
    /// `G_q = GL_2(F_q)`.
    pub const GQ: SubgroupSpec = SubgroupSpec::new(SubgroupKind::Full, Level::Fq);
    pub const BP: SubgroupSpec = SubgroupSpec::new(SubgroupKind::Borel, Level::Fp);
    pub const BQ: SubgroupSpec = SubgroupSpec::new(SubgroupKind::Borel, Level::Fq);
    pub const TP: SubgroupSpec = SubgroupSpec::new(SubgroupKind::AnisoTorus, Level::Fp);
    pub const TQ: SubgroupSpec = SubgroupSpec::new(SubgroupKind::AnisoTorus, Level::Fq);
    pub const SP: SubgroupSpec = SubgroupSpec::new(SubgroupKind::SplitTorus, Level::Fp);
    pub const ZP: SubgroupSpec = SubgroupSpec::new(SubgroupKind::Center, Level::Fp);

    pub fn name(&self) -> String {
        let lvl = match self.level {
            Level::Fp => "p",
            Level::Fp2 => "p2",
            Level::Fq => "q",
            Level::Fq2 => "q2",
        };
        let k = match self.kind {
            SubgroupKind::Borel => "B",
            SubgroupKind::AnisoTorus => "T",
            SubgroupKind::SplitTorus => "S",
            SubgroupKind::Center => "Z",
            SubgroupKind::Full => "G",
        };
        format!("{k}_{lvl}")
    }

    fn validate(&self) -> Result<()> {
        match (self.kind, self.level) {
            (SubgroupKind::SplitTorus | SubgroupKind::Center, Level::Fp) => Ok(()),
            (SubgroupKind::SplitTorus | SubgroupKind::Center, _) => {
                Err(Error::UnsupportedSubgroup(format!(
                    "{} is only used over F_p",
                    self.name()
                )))
            }
            (SubgroupKind::AnisoTorus, Level::Fp | Level::Fq) => Ok(()),
            (SubgroupKind::AnisoTorus, _) => Err(Error::UnsupportedSubgroup(format!(
                "no distinguished anisotropic torus at level {:?}",
                self.level
            ))),
            _ => Ok(()),
        }
    }

    /// Exact order of the subgroup.
    pub fn order(&self, tower: &FieldTower) -> u64 {
        let s = tower.field(self.level).size() as u64;
        let p = tower.p() as u64;
        match self.kind {
            SubgroupKind::Full => (s * s - 1) * (s * s - s),
            SubgroupKind::Borel => s * (s - 1) * (s - 1),
            SubgroupKind::AnisoTorus => s * s - 1,
            SubgroupKind::SplitTorus => (p - 1) * (p - 1),
            SubgroupKind::Center => p - 1,
        }
    }
}

/// The element `δ` with the anisotropic torus of `level` equal to `[[a,b],[bδ,a]]`.
pub fn torus_square(tower: &FieldTower, level: Level) -> Elem {
    let k = tower.top();
    let root = match level {
        Level::Fp => tower.eta_top(),
        _ => tower.epsilon_top(),
    };
    k.mul(root, root)
}

/// Exact, sorted, duplicate-free element list of a subgroup.
pub fn enumerate(tower: &FieldTower, spec: SubgroupSpec, budget: u64) -> Result<Vec<Mat2>> {
    spec.validate()?;
    let estimate = spec.order(tower);
    if estimate > budget {
        return Err(Error::EnumerationBudget {
            what: spec.name(),
            estimate,
            budget,
        });
    }
    let k = tower.top();
    let elems = tower.level_elements(spec.level);
    let units: Vec<Elem> = elems.iter().copied().filter(|x| !x.is_zero()).collect();
    let fp_units: Vec<Elem> = tower
        .level_elements(Level::Fp)
        .into_iter()
        .filter(|x| !x.is_zero())
        .collect();
    let mut out = Vec::with_capacity(estimate as usize);
    match spec.kind {
        SubgroupKind::Full => {
            for &a in &elems {
                for &b in &elems {
                    for &c in &elems {
                        for &d in &elems {
                            let g = Mat2::new(a, b, c, d);
                            if !g.det(k).is_zero() {
                                out.push(g);
                            }
                        }
                    }
                }
            }
        }
        SubgroupKind::Borel => {
            for &a in &units {
                for &b in &elems {
                    for &d in &units {
                        out.push(Mat2::new(a, b, Elem::ZERO, d));
                    }
                }
            }
        }
        SubgroupKind::AnisoTorus => {
            let delta = torus_square(tower, spec.level);
            for &a in &elems {
                for &b in &elems {
                    if a.is_zero() && b.is_zero() {
                        continue;
                    }
                    out.push(Mat2::new(a, b, k.mul(b, delta), a));
                }
            }
        }
        SubgroupKind::SplitTorus => {
            for &a in &fp_units {
                for &d in &fp_units {
                    out.push(Mat2::diag(a, d));
                }
            }
        }
        SubgroupKind::Center => {
            for &a in &fp_units {
                out.push(Mat2::scalar(a));
            }
        }
    }
    out.sort();
    debug_assert_eq!(out.len() as u64, estimate);
    Ok(out)
}

/// Exact membership by entry shape. `g` may have entries anywhere in the
/// ambient field; entries outside the spec's level mean "not a member".
pub fn contains(tower: &FieldTower, spec: SubgroupSpec, g: &Mat2) -> Result<bool> {
    spec.validate()?;
    let k = tower.top();
    if g.det(k).is_zero() || !g.has_entries_in(tower, spec.level) {
        return Ok(false);
    }
    let z = Elem::ZERO;
    Ok(match spec.kind {
        SubgroupKind::Full => true,
        SubgroupKind::Borel => g.c == z,
        SubgroupKind::AnisoTorus => {
            g.a == g.d && g.c == k.mul(g.b, torus_square(tower, spec.level))
        }
        SubgroupKind::SplitTorus => g.b == z && g.c == z,
        SubgroupKind::Center => g.b == z && g.c == z && g.a == g.d,
    })
}

/// A subgroup given as an explicit element list, with the named subgroup it
/// coincides with (as a set), if any.
#[derive(Clone, Debug)]
pub struct ExplicitSubgroup {
    pub elements: Vec<Mat2>,
    pub kind: Option<SubgroupSpec>,
}

impl ExplicitSubgroup {
    pub fn label(&self) -> String {
        match self.kind {
            Some(s) => s.name(),
            None => format!("explicit({})", self.elements.len()),
        }
    }
}

/// Named subgroups tried by [`classify`], most specific first.
pub const CLASSIFY_CANDIDATES: [SubgroupSpec; 7] = [
    SubgroupSpec::ZP,
    SubgroupSpec::SP,
    SubgroupSpec::TP,
    SubgroupSpec::BP,
    SubgroupSpec::GP,
    SubgroupSpec::TQ,
    SubgroupSpec::BQ,
];

/// Finds the named subgroup equal (as a set) to `elements`, if any.
pub fn classify(tower: &FieldTower, elements: &[Mat2]) -> Option<SubgroupSpec> {
    let distinct: HashSet<&Mat2> = elements.iter().collect();
    CLASSIFY_CANDIDATES.into_iter().find(|spec| {
        spec.order(tower) == distinct.len() as u64
            && distinct
                .iter()
                .all(|g| contains(tower, *spec, g).unwrap_or(false))
    })
}

pub fn explicit(tower: &FieldTower, mut elements: Vec<Mat2>) -> ExplicitSubgroup {
    elements.sort();
    elements.dedup();
    let kind = classify(tower, &elements);
    ExplicitSubgroup { elements, kind }
}

/// `T_q ∩ G_p`, computed by filtering the enumerated torus.
pub fn intersect_with_gp(tower: &FieldTower, spec: SubgroupSpec) -> Result<ExplicitSubgroup> {
    if spec != SubgroupSpec::TQ {
        return Err(Error::UnsupportedSubgroup(format!(
            "intersection with G_p is implemented for T_q, got {}",
            spec.name()
        )));
    }
    let tq = enumerate(tower, spec, u64::MAX)?;
    let inside: Vec<Mat2> = tq
        .into_iter()
        .filter(|g| g.has_entries_in(tower, Level::Fp))
        .collect();
    Ok(explicit(tower, inside))
}

/// Closure of `gens` under multiplication (a finite group).
pub fn closure(k: &Field, gens: &[Mat2]) -> Vec<Mat2> {
    let id = Mat2::identity(k);
    let mut seen: HashSet<Mat2> = HashSet::from([id]);
    let mut queue = VecDeque::from([id]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = x.mul(g, k);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<Mat2> = seen.into_iter().collect();
    v.sort();
    v
}

/// Least integer in `1..p` generating `F_p^*`, as an ambient element.
pub fn fp_primitive(tower: &FieldTower) -> Elem {
    let k = tower.top();
    let p = tower.p();
    (1..p as i64)
        .map(|u| k.from_int(u))
        .find(|&u| (1..p - 1).all(|e| k.pow(u, e as i64) != k.one()))
        .expect("F_p^* is cyclic")
}

/// `[[1,1],[0,1]]`, `[[1,0],[1,1]]`, `[[u,0],[0,1]]` with `u` primitive mod p.
pub fn generators(tower: &FieldTower) -> Vec<Mat2> {
    let k = tower.top();
    let (o, z) = (k.one(), Elem::ZERO);
    vec![
        Mat2::new(o, o, z, o),
        Mat2::new(o, z, o, o),
        Mat2::new(fp_primitive(tower), z, z, o),
    ]
}

/// Generators of `G_q`: elementary matrices over an `F_p`-basis of `F_q`
/// plus `diag(u, 1)` for a generator `u` of `F_q^*`.
pub fn gq_generators(tower: &FieldTower) -> Vec<Mat2> {
    let k = tower.top();
    let (o, z) = (k.one(), Elem::ZERO);
    let fq = tower.field(Level::Fq);
    let mut gens = Vec::new();
    for i in 0..tower.f() {
        let mut c = vec![0u32; tower.f() as usize];
        c[i as usize] = 1;
        let x = tower.lift(tower.elem_from_coeffs(Level::Fq, &c));
        gens.push(Mat2::new(o, x, z, o));
        gens.push(Mat2::new(o, z, x, o));
    }
    let u = tower.lift(tower.elem(Level::Fq, fq.generator()));
    gens.push(Mat2::new(u, z, z, o));
    gens
}

/// A conjugacy class of `G_p`.
#[derive(Clone, Debug)]
pub struct ConjugacyClass {
    /// Least element of the class.
    pub rep: Mat2,
    pub size: usize,
    pub order: u64,
}

/// All conjugacy classes of `G_p` by orbit-of-conjugation enumeration,
/// sorted by representative.
pub fn conjugacy_classes(tower: &FieldTower) -> Vec<ConjugacyClass> {
    let k = tower.top();
    let group = enumerate(tower, SubgroupSpec::GP, u64::MAX).expect("G_p is small");
    let inverses: Vec<Mat2> = group.iter().map(|g| g.inv(k)).collect();
    let mut class_of: HashMap<Mat2, usize> = HashMap::new();
    let mut classes = Vec::new();
    for x in &group {
        if class_of.contains_key(x) {
            continue;
        }
        let idx = classes.len();
        let mut members: HashSet<Mat2> = HashSet::new();
        for (g, gi) in group.iter().zip(&inverses) {
            members.insert(g.mul(x, k).mul(gi, k));
        }
        let rep = *members.iter().min().expect("nonempty");
        for m in &members {
            class_of.insert(*m, idx);
        }
        classes.push(ConjugacyClass {
            rep,
            size: members.len(),
            order: rep.order(k),
        });
    }
    classes.sort_by_key(|c| c.rep);
    classes
}

/// One representative per conjugacy class of `G_p` of order prime to `p`.
pub fn p_regular_class_reps(tower: &FieldTower) -> Vec<Mat2> {
    let p = tower.p() as u64;
    conjugacy_classes(tower)
        .into_iter()
        .filter(|c| c.order % p != 0)
        .map(|c| c.rep)
        .collect()
}

/// Whether the named subgroup `a` lies inside `b`, by enumerating `a`.
pub fn is_subgroup(
    tower: &FieldTower,
    a: SubgroupSpec,
    b: SubgroupSpec,
    budget: u64,
) -> Result<bool> {
    if a == b || (b.kind == SubgroupKind::Full && a.level == Level::Fp) {
        return Ok(true);
    }
    if b == SubgroupSpec::GQ {
        return Ok(true);
    }
    for g in enumerate(tower, a, budget)? {
        if !contains(tower, b, &g)? {
            return Ok(false);
        }
    }
    Ok(true)
}
