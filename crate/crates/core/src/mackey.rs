//! Coset and double-coset machinery for `G_p \ G_q / H` with `H` the Borel
//! or the anisotropic torus of `G_q`.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTower, Level};
use crate::grp::{self, ExplicitSubgroup, Mat2, SubgroupSpec};
use crate::projline::{self, OrbitDecomposition, ProjPoint};
use crate::reps::CharacterSpec;

/// Left coset representatives of `small` in `G_q`, each tagged with the
/// point it sends the base point to.
#[derive(Clone, Debug)]
pub struct CosetSystem {
    pub small: SubgroupSpec,
    /// `0̂` for the Borel, `ε̂` for the torus.
    pub base: ProjPoint,
    pub reps: Vec<Mat2>,
    pub rep_invs: Vec<Mat2>,
    pub points: Vec<ProjPoint>,
    slot_index: Vec<u32>,
}

/// `g_x = [[1,0],[x,1]]`.
pub fn g_x(tower: &FieldTower, x: Elem) -> Mat2 {
    let k = tower.top();
    Mat2::new(k.one(), Elem::ZERO, x, k.one())
}

/// `w = [[0,1],[1,0]]`.
pub fn w(tower: &FieldTower) -> Mat2 {
    let k = tower.top();
    Mat2::new(Elem::ZERO, k.one(), k.one(), Elem::ZERO)
}

/// `g_{a,b} = [[1,0],[a,b]]`.
pub fn g_ab(tower: &FieldTower, a: Elem, b: Elem) -> Mat2 {
    Mat2::new(tower.top().one(), Elem::ZERO, a, b)
}

/// The coset representatives `{g_x} ∪ {w}` of `G_q / B_q` or
/// `{g_{a,b} : b ≠ 0}` of `G_q / T_q`, in point order.
pub fn coset_reps(tower: &FieldTower, small: SubgroupSpec) -> Result<CosetSystem> {
    let k = tower.top();
    let fq = tower.level_elements(Level::Fq);
    let (base, mut pairs) = match small {
        SubgroupSpec::BQ => {
            let mut v: Vec<(ProjPoint, Mat2)> = fq
                .iter()
                .map(|&x| (ProjPoint::Finite(x), g_x(tower, x)))
                .collect();
            v.push((ProjPoint::Infinity, w(tower)));
            (ProjPoint::Finite(Elem::ZERO), v)
        }
        SubgroupSpec::TQ => {
            let eps = tower.epsilon_top();
            let mut v = Vec::with_capacity(fq.len() * (fq.len() - 1));
            for &a in &fq {
                for &b in fq.iter().filter(|b| !b.is_zero()) {
                    let pt = ProjPoint::Finite(k.add(a, k.mul(b, eps)));
                    v.push((pt, g_ab(tower, a, b)));
                }
            }
            (ProjPoint::Finite(eps), v)
        }
        other => {
            return Err(Error::UnsupportedSubgroup(format!(
                "coset systems exist for B_q and T_q, got {}",
                other.name()
            )))
        }
    };
    pairs.sort_by_key(|pr| pr.0);
    let mut slot_index = vec![u32::MAX; k.size() as usize + 1];
    for (i, (pt, _)) in pairs.iter().enumerate() {
        slot_index[pt.slot(k)] = i as u32;
    }
    let reps: Vec<Mat2> = pairs.iter().map(|pr| pr.1).collect();
    Ok(CosetSystem {
        small,
        base,
        rep_invs: reps.iter().map(|g| g.inv(k)).collect(),
        reps,
        points: pairs.into_iter().map(|pr| pr.0).collect(),
        slot_index,
    })
}

impl CosetSystem {
    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn index_of(&self, tower: &FieldTower, pt: ProjPoint) -> Option<usize> {
        let i = *self.slot_index.get(pt.slot(tower.top()))?;
        (i != u32::MAX).then_some(i as usize)
    }

    /// `g = reps[i] * h` with `h` in `small`, without the membership check.
    pub fn factor_unchecked(&self, tower: &FieldTower, g: &Mat2) -> (usize, Mat2) {
        let k = tower.top();
        let pt = projline::act(k, g, self.base);
        let i = self.index_of(tower, pt).expect("coset system covers the orbit");
        (i, self.rep_invs[i].mul(g, k))
    }

    /// Index of the coset of `g * reps[j]`, and the `small` part, using the
    /// stored point of `reps[j]`.
    pub(crate) fn translate(&self, tower: &FieldTower, g: &Mat2, j: usize) -> (usize, Mat2) {
        let k = tower.top();
        let pt = projline::act(k, g, self.points[j]);
        let i = self.index_of(tower, pt).expect("coset system covers the orbit");
        (i, self.rep_invs[i].mul(g, k).mul(&self.reps[j], k))
    }

    /// `g = rep * h` with `rep` among the representatives and `h ∈ small`.
    pub fn factor(&self, tower: &FieldTower, g: &Mat2) -> Result<(Mat2, Mat2)> {
        if !grp::contains(tower, SubgroupSpec::GQ, g)? {
            return Err(Error::OutsideDomain(format!("{g:?}"), "G_q".into()));
        }
        let (i, h) = self.factor_unchecked(tower, g);
        if !grp::contains(tower, self.small, &h)? {
            return Err(Error::Internal(format!(
                "factor of {g:?} left {h:?} outside {}",
                self.small.name()
            )));
        }
        Ok((self.reps[i], h))
    }
}

/// One double coset `G_p γ H`.
#[derive(Clone, Debug)]
pub struct DoubleCoset {
    pub gamma: Mat2,
    /// `γ · base`, the representative of the matching `G_p`-orbit.
    pub point: ProjPoint,
    pub orbit_size: usize,
    /// `γ H γ^{-1} ∩ G_p`.
    pub intersection: ExplicitSubgroup,
}

#[derive(Clone, Debug)]
pub struct DoubleCosetData {
    pub small: SubgroupSpec,
    pub system: CosetSystem,
    pub orbits: OrbitDecomposition,
    pub cosets: Vec<DoubleCoset>,
}

/// One `γ` per `G_p`-orbit on `G_q / H`, taken as the coset representative of
/// the orbit's canonical point.
pub fn double_coset_reps(tower: &FieldTower, small: SubgroupSpec) -> Result<DoubleCosetData> {
    let system = coset_reps(tower, small)?;
    let orbits = match small {
        SubgroupSpec::BQ => projline::orbit_decomposition(tower, SubgroupSpec::GP, Level::Fq)?,
        _ => projline::split_epsilon_orbit(tower)?,
    };
    let mut cosets = Vec::with_capacity(orbits.orbits.len());
    for o in &orbits.orbits {
        let i = system
            .index_of(tower, o.rep)
            .ok_or_else(|| Error::Internal(format!("orbit point {:?} has no coset", o.rep)))?;
        let gamma = system.reps[i];
        cosets.push(DoubleCoset {
            gamma,
            point: o.rep,
            orbit_size: o.size,
            intersection: conjugated_intersection(tower, &gamma, small)?,
        });
    }
    Ok(DoubleCosetData {
        small,
        system,
        orbits,
        cosets,
    })
}

/// `γ H γ^{-1} ∩ G_p`, by filtering `G_p`.
pub fn conjugated_intersection(
    tower: &FieldTower,
    gamma: &Mat2,
    small: SubgroupSpec,
) -> Result<ExplicitSubgroup> {
    let k = tower.top();
    let gi = gamma.inv(k);
    let mut inside = Vec::new();
    for g in grp::enumerate(tower, SubgroupSpec::GP, u64::MAX)? {
        if grp::contains(tower, small, &gi.conjugate(&g, k))? {
            inside.push(g);
        }
    }
    Ok(grp::explicit(tower, inside))
}

/// `χ^γ(h) = χ(γ^{-1} h γ)` on `γ H γ^{-1} ∩ G_p`, after checking that every
/// element of `intersection` conjugates into the domain of `χ`.
pub fn twist_character(
    tower: &FieldTower,
    chi: &CharacterSpec,
    gamma: &Mat2,
    intersection: &ExplicitSubgroup,
) -> Result<CharacterSpec> {
    let twisted = chi.twist(*gamma);
    for h in &intersection.elements {
        twisted.eval(tower, h).map_err(|e| {
            Error::Internal(format!("twist by {gamma:?} is ill-defined at {h:?}: {e}"))
        })?;
    }
    Ok(twisted)
}

/// Brute-force audit of `G_q = ⊔ G_p γ H`.
#[derive(Clone, Debug)]
pub struct DoubleCosetAudit {
    pub piece_sizes: Vec<usize>,
    /// First element found in two pieces, if any.
    pub overlap: Option<Mat2>,
    pub covered: usize,
    /// Points `x · base` for `x` in each piece, sorted.
    pub piece_points: Vec<Vec<ProjPoint>>,
}

/// Materializes every `G_p γ H` as a set of matrices.
pub fn brute_force_double_cosets(
    tower: &FieldTower,
    small: SubgroupSpec,
    base: ProjPoint,
    gammas: &[Mat2],
    budget: u64,
) -> Result<DoubleCosetAudit> {
    let k = tower.top();
    let gq_order = SubgroupSpec::GQ.order(tower);
    if gq_order > budget {
        return Err(Error::EnumerationBudget {
            what: "double coset partition".into(),
            estimate: gq_order,
            budget,
        });
    }
    let gp = grp::enumerate(tower, SubgroupSpec::GP, u64::MAX)?;
    let h = grp::enumerate(tower, small, budget)?;
    let mut owner: HashMap<Mat2, u32> = HashMap::with_capacity(gq_order as usize);
    let mut overlap = None;
    let mut piece_sizes = vec![0usize; gammas.len()];
    let mut piece_points = vec![Vec::new(); gammas.len()];
    for (idx, gamma) in gammas.iter().enumerate() {
        let gh: Vec<Mat2> = h.iter().map(|x| gamma.mul(x, k)).collect();
        for g in &gp {
            for y in &gh {
                let x = g.mul(y, k);
                match owner.get(&x) {
                    None => {
                        owner.insert(x, idx as u32);
                        piece_sizes[idx] += 1;
                        piece_points[idx].push(projline::act(k, &x, base));
                    }
                    Some(&o) if o as usize != idx => {
                        overlap.get_or_insert(x);
                    }
                    _ => {}
                }
            }
        }
        piece_points[idx].sort();
        piece_points[idx].dedup();
    }
    Ok(DoubleCosetAudit {
        piece_sizes,
        overlap,
        covered: owner.len(),
        piece_points,
    })
}

/// `G_p x H` as a sorted element list.
pub fn double_coset(
    tower: &FieldTower,
    small: SubgroupSpec,
    x: &Mat2,
    budget: u64,
) -> Result<Vec<Mat2>> {
    let k = tower.top();
    let gp = grp::enumerate(tower, SubgroupSpec::GP, u64::MAX)?;
    let h = grp::enumerate(tower, small, budget)?;
    let mut out: Vec<Mat2> = gp
        .iter()
        .flat_map(|g| {
            let gx = g.mul(x, k);
            h.iter().map(move |y| gx.mul(y, k))
        })
        .collect();
    out.sort();
    out.dedup();
    Ok(out)
}
