//! Projective lines over tower levels and the `GL_2` action on them.

use std::collections::{HashSet, VecDeque};

use serde::Serialize;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{Elem, Field, FieldTower, Level};
use crate::grp::{self, ExplicitSubgroup, Mat2, SubgroupKind, SubgroupSpec};

/// A normalized point of `P^1`: `Finite(x)` is `[1 : x]`, `Infinity` is `[0 : 1]`.
/// Finite points sort before infinity, and among themselves by element order.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ProjPoint {
    Finite(Elem),
    Infinity,
}

impl ProjPoint {
    /// Normalizes `[u : v]`; `None` for `[0 : 0]`.
    pub fn from_coords(k: &Field, u: Elem, v: Elem) -> Option<Self> {
        if !u.is_zero() {
            Some(ProjPoint::Finite(k.div(v, u)))
        } else if !v.is_zero() {
            Some(ProjPoint::Infinity)
        } else {
            None
        }
    }

    /// Slot in a dense table indexed by ambient elements, infinity last.
    pub fn slot(&self, k: &Field) -> usize {
        match *self {
            ProjPoint::Finite(x) => x.index() as usize,
            ProjPoint::Infinity => k.size() as usize,
        }
    }

    pub fn to_json(&self, tower: &FieldTower) -> Value {
        match *self {
            ProjPoint::Finite(x) => render_elem(tower, x),
            ProjPoint::Infinity => json!("inf"),
        }
    }
}

/// JSON rendering of an ambient element: an integer for prime-field
/// elements, otherwise its coefficient vector in `F_{q^2}` coordinates.
pub fn render_elem(tower: &FieldTower, x: Elem) -> Value {
    let k = tower.top();
    match k.to_int(x) {
        Some(n) => json!(n),
        None => json!(k.coeffs(x)),
    }
}

pub fn render_mat(tower: &FieldTower, g: &Mat2) -> Value {
    json!([
        [render_elem(tower, g.a), render_elem(tower, g.b)],
        [render_elem(tower, g.c), render_elem(tower, g.d)]
    ])
}

/// `g · [u : v] = [au + bv : cu + dv]`.
pub fn act(k: &Field, g: &Mat2, pt: ProjPoint) -> ProjPoint {
    let (u, v) = match pt {
        ProjPoint::Finite(x) => (
            k.add(g.a, k.mul(g.b, x)),
            k.add(g.c, k.mul(g.d, x)),
        ),
        ProjPoint::Infinity => (g.b, g.d),
    };
    ProjPoint::from_coords(k, u, v).expect("invertible matrices act on P^1")
}

/// All points of `P^1(level)`, sorted.
pub fn points(tower: &FieldTower, level: Level) -> Vec<ProjPoint> {
    let mut v: Vec<ProjPoint> = tower
        .level_elements(level)
        .into_iter()
        .map(ProjPoint::Finite)
        .collect();
    v.push(ProjPoint::Infinity);
    v.sort();
    v
}

pub fn in_line(tower: &FieldTower, pt: ProjPoint, level: Level) -> bool {
    match pt {
        ProjPoint::Finite(x) => tower.in_level(x, level),
        ProjPoint::Infinity => true,
    }
}

/// Orbit of `pt` under the group generated by `gens`, by breadth-first search.
pub fn orbit(k: &Field, gens: &[Mat2], pt: ProjPoint) -> Vec<ProjPoint> {
    let mut seen = HashSet::from([pt]);
    let mut queue = VecDeque::from([pt]);
    while let Some(x) = queue.pop_front() {
        for g in gens {
            let y = act(k, g, x);
            if seen.insert(y) {
                queue.push_back(y);
            }
        }
    }
    let mut v: Vec<ProjPoint> = seen.into_iter().collect();
    v.sort();
    v
}

/// Exhaustive stabilizer of `pt` in a named subgroup, classified against the
/// named subgroups. Full groups are scanned without materializing them.
pub fn stabilizer(
    tower: &FieldTower,
    spec: SubgroupSpec,
    pt: ProjPoint,
    budget: u64,
) -> Result<ExplicitSubgroup> {
    let k = tower.top();
    let order = spec.order(tower);
    if order > budget {
        return Err(Error::EnumerationBudget {
            what: format!("Stab_{}", spec.name()),
            estimate: order,
            budget,
        });
    }
    let fixers = if spec.kind == SubgroupKind::Full {
        let elems = tower.level_elements(spec.level);
        let mut out = Vec::new();
        for &a in &elems {
            for &b in &elems {
                for &c in &elems {
                    for &d in &elems {
                        let g = Mat2::new(a, b, c, d);
                        if !g.det(k).is_zero() && act(k, &g, pt) == pt {
                            out.push(g);
                        }
                    }
                }
            }
        }
        out
    } else {
        grp::enumerate(tower, spec, budget)?
            .into_iter()
            .filter(|g| act(k, g, pt) == pt)
            .collect()
    };
    Ok(grp::explicit(tower, fixers))
}

#[derive(Clone, Debug, Serialize)]
pub struct OrbitInfo {
    #[serde(skip)]
    pub rep: ProjPoint,
    #[serde(skip)]
    pub points: Vec<ProjPoint>,
    pub size: usize,
    /// `|acting group| / size`.
    pub stabilizer_order: u64,
    /// Named subgroup equal to the stabilizer of `rep`, when it was computed
    /// exhaustively and matched one.
    pub stabilizer_kind: Option<SubgroupSpec>,
}

#[derive(Clone, Debug)]
pub struct OrbitDecomposition {
    pub acting: SubgroupSpec,
    pub space: Level,
    pub orbits: Vec<OrbitInfo>,
}

impl OrbitDecomposition {
    pub fn total(&self) -> usize {
        self.orbits.iter().map(|o| o.size).sum()
    }

    pub fn sizes(&self) -> Vec<usize> {
        self.orbits.iter().map(|o| o.size).collect()
    }

    pub fn find(&self, pt: ProjPoint) -> Option<&OrbitInfo> {
        self.orbits.iter().find(|o| o.points.binary_search(&pt).is_ok())
    }

    pub fn to_json(&self, tower: &FieldTower) -> Value {
        json!({
            "acting": self.acting.name(),
            "space": space_name(self.space),
            "orbits": self.orbits.iter().map(|o| json!({
                "rep": o.rep.to_json(tower),
                "size": o.size,
                "stab": match o.stabilizer_kind {
                    Some(s) => json!(s.name()),
                    None => json!(format!("order {}", o.stabilizer_order)),
                },
            })).collect::<Vec<_>>(),
        })
    }
}

pub fn space_name(level: Level) -> &'static str {
    match level {
        Level::Fp => "P1(p)",
        Level::Fp2 => "P1(p2)",
        Level::Fq => "P1(q)",
        Level::Fq2 => "P1(q2)",
    }
}

/// Points used as orbit representatives ahead of the least-point rule:
/// `0̂`, then `η̂`, then `ε̂`, when they lie in the space.
fn distinguished(tower: &FieldTower) -> [ProjPoint; 3] {
    [
        ProjPoint::Finite(Elem::ZERO),
        ProjPoint::Finite(tower.eta_top()),
        ProjPoint::Finite(tower.epsilon_top()),
    ]
}

fn pick_rep(tower: &FieldTower, orbit: &[ProjPoint]) -> ProjPoint {
    distinguished(tower)
        .into_iter()
        .find(|pt| orbit.binary_search(pt).is_ok())
        .unwrap_or(orbit[0])
}

/// Splits `space_points` (a union of orbits) into orbits of the group
/// generated by `gens`, ordered by representative.
pub fn split_into_orbits(
    tower: &FieldTower,
    gens: &[Mat2],
    space_points: &[ProjPoint],
) -> Vec<(ProjPoint, Vec<ProjPoint>)> {
    let k = tower.top();
    let mut covered = vec![false; k.size() as usize + 1];
    let mut out = Vec::new();
    for &pt in space_points {
        if covered[pt.slot(k)] {
            continue;
        }
        let orb = orbit(k, gens, pt);
        for x in &orb {
            covered[x.slot(k)] = true;
        }
        out.push((pick_rep(tower, &orb), orb));
    }
    out.sort_by_key(|(rep, _)| {
        let rank = distinguished(tower)
            .iter()
            .position(|d| d == rep)
            .unwrap_or(3);
        (rank, *rep)
    });
    out
}

fn generators_of(tower: &FieldTower, acting: SubgroupSpec) -> Result<Vec<Mat2>> {
    match acting {
        SubgroupSpec::GP => Ok(grp::generators(tower)),
        SubgroupSpec::GQ => Ok(grp::gq_generators(tower)),
        other => Err(Error::UnsupportedSubgroup(format!(
            "orbit decompositions are for G_p or G_q, got {}",
            other.name()
        ))),
    }
}

fn decompose(
    tower: &FieldTower,
    acting: SubgroupSpec,
    space: Level,
    space_points: &[ProjPoint],
    stab_budget: u64,
) -> Result<OrbitDecomposition> {
    let gens = generators_of(tower, acting)?;
    if !tower.degree_of(space).is_multiple_of(tower.degree_of(acting.level)) {
        return Err(Error::Config(format!(
            "{} does not preserve {}",
            acting.name(),
            space_name(space)
        )));
    }
    let group_order = acting.order(tower);
    let exhaustive = group_order <= stab_budget;
    let mut orbits = Vec::new();
    for (rep, pts) in split_into_orbits(tower, &gens, space_points) {
        let stabilizer_kind = if exhaustive {
            stabilizer(tower, acting, rep, stab_budget)?.kind
        } else {
            None
        };
        orbits.push(OrbitInfo {
            rep,
            size: pts.len(),
            stabilizer_order: group_order / pts.len() as u64,
            stabilizer_kind,
            points: pts,
        });
    }
    Ok(OrbitDecomposition {
        acting,
        space,
        orbits,
    })
}

/// Orbits of `G_p` or `G_q` on `P^1(space)`. Stabilizers of orbit
/// representatives are computed exhaustively and classified when the acting
/// group fits the enumeration budget.
pub fn orbit_decomposition(
    tower: &FieldTower,
    acting: SubgroupSpec,
    space: Level,
) -> Result<OrbitDecomposition> {
    let pts = points(tower, space);
    decompose(tower, acting, space, &pts, grp::DEFAULT_ENUM_BUDGET)
}

/// The `G_q`-orbit of `ε̂` in `P^1(F_{q^2})`, split into `G_p`-orbits.
pub fn split_epsilon_orbit(tower: &FieldTower) -> Result<OrbitDecomposition> {
    let k = tower.top();
    let eps_orbit = orbit(
        k,
        &grp::gq_generators(tower),
        ProjPoint::Finite(tower.epsilon_top()),
    );
    decompose(
        tower,
        SubgroupSpec::GP,
        Level::Fq2,
        &eps_orbit,
        grp::DEFAULT_ENUM_BUDGET,
    )
}

/// `X = F_q \ F_p` for odd `f`, `F_q \ F_{p^2}` for even `f`.
pub fn generic_set(tower: &FieldTower) -> Vec<Elem> {
    let excluded = if tower.f() % 2 == 1 { Level::Fp } else { Level::Fp2 };
    tower
        .level_elements(Level::Fq)
        .into_iter()
        .filter(|&x| !tower.in_level(x, excluded))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn tower(p: u32, f: u32) -> FieldTower {
        FieldTower::build(p, f).unwrap()
    }

    #[test]
    fn named_actions() {
        let t = tower(3, 2);
        let k = t.top();
        let (o, z) = (k.one(), Elem::ZERO);
        let zero = ProjPoint::Finite(z);
        for x in t.level_elements(Level::Fq) {
            let gx = Mat2::new(o, z, x, o);
            assert_eq!(act(k, &gx, zero), ProjPoint::Finite(x));
        }
        let w = Mat2::new(z, o, o, z);
        assert_eq!(act(k, &w, zero), ProjPoint::Infinity);
        let eps = t.epsilon_top();
        for a in t.level_elements(Level::Fq) {
            for b in t.level_elements(Level::Fq).into_iter().filter(|b| !b.is_zero()) {
                let gab = Mat2::new(o, z, a, b);
                let image = act(k, &gab, ProjPoint::Finite(eps));
                assert_eq!(image, ProjPoint::Finite(k.add(a, k.mul(b, eps))));
            }
        }
    }

    #[test]
    fn action_axioms() {
        let t = tower(3, 2);
        let k = t.top();
        let g = grp::enumerate(&t, SubgroupSpec::GP, u64::MAX).unwrap();
        let pts = points(&t, Level::Fq2);
        let id = Mat2::identity(k);
        for pt in &pts {
            assert_eq!(act(k, &id, *pt), *pt);
        }
        for a in g.iter().step_by(5) {
            for b in g.iter().step_by(7) {
                for pt in pts.iter().step_by(3) {
                    assert_eq!(act(k, &a.mul(b, k), *pt), act(k, a, act(k, b, *pt)));
                }
            }
        }
    }

    #[test]
    fn line_sizes() {
        let t = tower(3, 2);
        for (level, s) in [(Level::Fp, 3), (Level::Fq, 9), (Level::Fq2, 81)] {
            assert_eq!(points(&t, level).len(), s + 1);
        }
    }

    #[test]
    fn gq_orbits_on_big_line() {
        let t = tower(3, 2);
        let d = orbit_decomposition(&t, SubgroupSpec::GQ, Level::Fq2).unwrap();
        assert_eq!(d.sizes(), vec![10, 72]);
        assert_eq!(d.orbits[0].rep, ProjPoint::Finite(Elem::ZERO));
        assert_eq!(d.orbits[1].rep, ProjPoint::Finite(t.epsilon_top()));
    }

    #[test]
    fn stabilizers_of_named_points() {
        let t = tower(3, 2);
        let b = grp::DEFAULT_ENUM_BUDGET;
        let s0 = stabilizer(&t, SubgroupSpec::GQ, ProjPoint::Finite(Elem::ZERO), b).unwrap();
        assert_eq!(s0.kind, Some(SubgroupSpec::BQ));
        let se = stabilizer(&t, SubgroupSpec::GQ, ProjPoint::Finite(t.epsilon_top()), b).unwrap();
        assert_eq!(se.kind, Some(SubgroupSpec::TQ));
    }

    #[test]
    fn gp_orbits_on_fq_line() {
        let t = tower(3, 2);
        let d = orbit_decomposition(&t, SubgroupSpec::GP, Level::Fq).unwrap();
        assert_eq!(d.sizes(), vec![4, 6]);
        assert_eq!(d.orbits[1].rep, ProjPoint::Finite(t.eta_top()));
        assert_eq!(d.orbits[1].stabilizer_kind, Some(SubgroupSpec::TP));
        let t = tower(3, 3);
        let d = orbit_decomposition(&t, SubgroupSpec::GP, Level::Fq).unwrap();
        assert_eq!(d.sizes(), vec![4, 24]);
        assert_eq!(d.orbits[1].stabilizer_kind, Some(SubgroupSpec::ZP));
    }

    #[test]
    fn epsilon_orbit_splits() {
        let t = tower(3, 2);
        let d = split_epsilon_orbit(&t).unwrap();
        assert_eq!(d.sizes(), vec![24, 24, 24]);
        let t = tower(3, 3);
        let d = split_epsilon_orbit(&t).unwrap();
        assert_eq!(d.orbits.len(), 30);
        assert_eq!(d.orbits[0].size, 6);
        assert_eq!(d.orbits[0].stabilizer_kind, Some(SubgroupSpec::TP));
        assert!(d.orbits[1..].iter().all(|o| o.size == 24));
        assert_eq!(d.total(), 702);
    }

    // Orbits through exhaustive group application agree with generator BFS.
    #[test]
    fn bfs_matches_exhaustive() {
        let t = tower(3, 2);
        let k = t.top();
        let g = grp::enumerate(&t, SubgroupSpec::GP, u64::MAX).unwrap();
        for pt in points(&t, Level::Fq2) {
            let mut full: Vec<ProjPoint> = g.iter().map(|x| act(k, x, pt)).collect();
            full.sort();
            full.dedup();
            assert_eq!(full, orbit(k, &grp::generators(&t), pt));
        }
    }
}
