//! Brauer fingerprints (characteristic polynomials on `p`-regular classes),
//! intertwiner spaces, and randomized isomorphism certificates.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTower};
use crate::grp::{self, Mat2, SubgroupSpec};
use crate::linalg::{upoly, Matrix, SparseSystem};
use crate::projline::{render_elem, render_mat};
use crate::reps::{CharacterSpec, Cosets, Rep};

pub const DEFAULT_HOM_BUDGET: u64 = 40_000;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BrauerFingerprint {
    pub dim: usize,
    pub class_reps: Vec<Mat2>,
    /// Monic characteristic polynomial per class, little-endian.
    pub polys: Vec<Vec<Elem>>,
}

impl BrauerFingerprint {
    pub fn to_json(&self, tower: &FieldTower) -> Value {
        json!({
            "dim": self.dim,
            "classes": self.class_reps.iter().zip(&self.polys).map(|(g, poly)| json!({
                "rep": render_mat(tower, g),
                "poly": poly.iter().map(|&c| render_elem(tower, c)).collect::<Vec<_>>(),
            })).collect::<Vec<_>>(),
        })
    }
}

/// Characteristic polynomial of `g`, by cycles for monomial pieces and by
/// Hessenberg reduction for dense ones.
pub fn charpoly_at(tower: &FieldTower, rep: &Rep, g: &Mat2) -> Vec<Elem> {
    let k = tower.top();
    match rep {
        Rep::Monomial(m) => {
            let (perm, scalars) = m.action(tower, g);
            let mut seen = vec![false; perm.len()];
            let mut poly = vec![k.one()];
            for start in 0..perm.len() {
                if seen[start] {
                    continue;
                }
                let (mut j, mut len, mut c) = (start, 0usize, k.one());
                while !seen[j] {
                    seen[j] = true;
                    c = k.mul(c, scalars[j]);
                    j = perm[j] as usize;
                    len += 1;
                }
                poly = upoly::mul(k, &poly, &upoly::binomial(k, len, c));
            }
            poly
        }
        Rep::Sum { parts, .. } => parts.iter().fold(vec![k.one()], |acc, (r, m)| {
            upoly::mul(k, &acc, &upoly::pow(k, &charpoly_at(tower, r, g), *m))
        }),
        _ => rep.matrix_unchecked(tower, g).charpoly(k),
    }
}

/// Fingerprint on the given class representatives of `G_p`.
pub fn fingerprint(tower: &FieldTower, rep: &Rep, class_reps: &[Mat2]) -> Result<BrauerFingerprint> {
    for g in class_reps {
        if !grp::contains(tower, rep.group(), g)? {
            return Err(Error::OutsideDomain(format!("{g:?}"), rep.group().name()));
        }
    }
    let polys = class_reps
        .par_iter()
        .map(|g| charpoly_at(tower, rep, g))
        .collect();
    Ok(BrauerFingerprint {
        dim: rep.dim(),
        class_reps: class_reps.to_vec(),
        polys,
    })
}

/// Fingerprint through dense matrices only; for cross-checks.
pub fn fingerprint_dense(tower: &FieldTower, rep: &Rep, class_reps: &[Mat2]) -> Result<BrauerFingerprint> {
    let k = tower.top();
    let mut polys = Vec::with_capacity(class_reps.len());
    for g in class_reps {
        polys.push(rep.matrix(tower, g)?.charpoly(k));
    }
    Ok(BrauerFingerprint {
        dim: rep.dim(),
        class_reps: class_reps.to_vec(),
        polys,
    })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Comparison {
    Equal,
    DimMismatch { left: usize, right: usize },
    PolyMismatch { class_rep: Mat2, left: Vec<Elem>, right: Vec<Elem> },
}

impl Comparison {
    pub fn is_equal(&self) -> bool {
        *self == Comparison::Equal
    }

    pub fn witness(&self, tower: &FieldTower) -> Value {
        let poly = |p: &[Elem]| p.iter().map(|&c| render_elem(tower, c)).collect::<Vec<_>>();
        match self {
            Comparison::Equal => Value::Null,
            Comparison::DimMismatch { left, right } => json!({"dimension": [left, right]}),
            Comparison::PolyMismatch { class_rep, left, right } => json!({
                "class_rep": render_mat(tower, class_rep),
                "left": poly(left),
                "right": poly(right),
            }),
        }
    }
}

pub fn compare(a: &BrauerFingerprint, b: &BrauerFingerprint) -> Comparison {
    if a.dim != b.dim {
        return Comparison::DimMismatch { left: a.dim, right: b.dim };
    }
    for ((g, x), y) in a.class_reps.iter().zip(&a.polys).zip(&b.polys) {
        if x != y {
            return Comparison::PolyMismatch {
                class_rep: *g,
                left: x.clone(),
                right: y.clone(),
            };
        }
    }
    Comparison::Equal
}

/// An induced summand `ind_H^{G} χ` of the source, used through Frobenius
/// reciprocity: `Hom_G(ind χ, V) ≅ {v : h v = χ(h) v for h ∈ H}`.
#[derive(Clone, Debug)]
struct InducedPart {
    coset_reps: Vec<Mat2>,
    copies: u64,
    basis: Vec<Vec<Elem>>,
}

#[derive(Clone, Debug)]
enum HomBasis {
    Reciprocity(Vec<InducedPart>),
    /// Flattened `dst x src` matrices.
    Generic(Vec<Vec<Elem>>),
}

/// A basis of `Hom_G(src, dst)`.
#[derive(Clone, Debug)]
pub struct HomSpace {
    pub src_dim: usize,
    pub dst_dim: usize,
    basis: HomBasis,
}

impl HomSpace {
    pub fn dim(&self) -> usize {
        match &self.basis {
            HomBasis::Reciprocity(parts) => parts
                .iter()
                .map(|p| p.basis.len() * p.copies as usize)
                .sum(),
            HomBasis::Generic(b) => b.len(),
        }
    }

    pub fn method(&self) -> &'static str {
        match self.basis {
            HomBasis::Reciprocity(_) => "reciprocity",
            HomBasis::Generic(_) => "generic",
        }
    }

    /// A uniformly random element as a `dst x src` matrix.
    pub fn random_element(&self, tower: &FieldTower, dst: &Rep, rng: &mut ChaCha8Rng) -> Matrix {
        let k = tower.top();
        let mut m = Matrix::zeros(self.dst_dim, self.src_dim);
        let mut coeff = || Elem(rng.gen_range(0..k.size()));
        match &self.basis {
            HomBasis::Generic(basis) => {
                for b in basis {
                    let c = coeff();
                    for (x, &y) in m.data.iter_mut().zip(b) {
                        *x = k.add(*x, k.mul(c, y));
                    }
                }
            }
            HomBasis::Reciprocity(parts) => {
                let mut col = 0;
                for part in parts {
                    let images: Vec<Matrix> = part
                        .coset_reps
                        .iter()
                        .map(|g| dst.matrix_unchecked(tower, g))
                        .collect();
                    for _ in 0..part.copies {
                        let mut v = vec![Elem::ZERO; self.dst_dim];
                        for b in &part.basis {
                            let c = coeff();
                            for (x, &y) in v.iter_mut().zip(b) {
                                *x = k.add(*x, k.mul(c, y));
                            }
                        }
                        for img in &images {
                            for (i, x) in img.mul_vec(&v, k).into_iter().enumerate() {
                                m.set(i, col, x);
                            }
                            col += 1;
                        }
                    }
                }
            }
        }
        m
    }
}

/// Flattens `rep` into induced pieces acting on the full group they were
/// induced into, or `None` if some piece is not of that form.
fn induced_parts(rep: &Rep, out: &mut Vec<(Vec<Mat2>, Vec<Mat2>, CharacterSpec, u64)>, mult: u64) -> bool {
    match rep {
        Rep::Monomial(m) if m.group == m.parent => match &m.cosets {
            Cosets::Table(t) => {
                out.push((t.reps.clone(), t.sub_elements.clone(), m.character.clone(), mult));
                true
            }
            Cosets::Point(_) => false,
        },
        Rep::Sum { parts, .. } => parts.iter().all(|(r, m)| induced_parts(r, out, mult * m)),
        _ => false,
    }
}

fn group_generators(tower: &FieldTower, group: SubgroupSpec, budget: u64) -> Result<Vec<Mat2>> {
    Ok(match group {
        SubgroupSpec::GP => grp::generators(tower),
        SubgroupSpec::GQ => grp::gq_generators(tower),
        other => grp::enumerate(tower, other, budget)?,
    })
}

/// A basis of `Hom(src, dst)`, through Frobenius reciprocity when `src` is a
/// sum of inductions from subgroups of its acting group, and otherwise by
/// solving `M ρ_src(g) = ρ_dst(g) M` on generators.
pub fn hom_space(tower: &FieldTower, src: &Rep, dst: &Rep, budget: u64) -> Result<HomSpace> {
    solve_hom(tower, src, dst, budget, false)
}

/// Same as [`hom_space`] but always through the generic solver.
pub fn hom_space_generic(tower: &FieldTower, src: &Rep, dst: &Rep, budget: u64) -> Result<HomSpace> {
    solve_hom(tower, src, dst, budget, true)
}

fn solve_hom(tower: &FieldTower, src: &Rep, dst: &Rep, budget: u64, generic: bool) -> Result<HomSpace> {
    if src.group() != dst.group() {
        return Err(Error::Incompatible(format!(
            "Hom between representations of {} and {}",
            src.group().name(),
            dst.group().name()
        )));
    }
    let (n, m) = (src.dim(), dst.dim());
    let estimate = (n * m) as u64;
    if estimate > budget {
        return Err(Error::HomBudget { estimate, budget });
    }
    let k = tower.top();
    let mut pieces = Vec::new();
    if !generic && induced_parts(src, &mut pieces, 1) {
        let mut parts = Vec::with_capacity(pieces.len());
        for (coset_reps, sub, chi, copies) in pieces {
            let mut sys = SparseSystem::new(m);
            for h in &sub {
                let c = chi.value(tower, h);
                for (i, row) in dst.sparse_rows(tower, h).into_iter().enumerate() {
                    sys.add_equation(row.into_iter().chain([(i, k.neg(c))]), k);
                }
            }
            parts.push(InducedPart {
                coset_reps,
                copies,
                basis: sys.nullspace(k),
            });
        }
        return Ok(HomSpace {
            src_dim: n,
            dst_dim: m,
            basis: HomBasis::Reciprocity(parts),
        });
    }
    // Unknown M[i][l] sits at i * n + l.
    let mut sys = SparseSystem::new(n * m);
    for g in group_generators(tower, src.group(), budget)? {
        let a_rows = src.sparse_rows(tower, &g);
        let mut a_cols: Vec<Vec<(usize, Elem)>> = vec![Vec::new(); n];
        for (l, row) in a_rows.iter().enumerate() {
            for &(j, v) in row {
                a_cols[j].push((l, v));
            }
        }
        let b_rows = dst.sparse_rows(tower, &g);
        for i in 0..m {
            for j in 0..n {
                let lhs = a_cols[j].iter().map(|&(l, v)| (i * n + l, v));
                let rhs = b_rows[i].iter().map(|&(l, v)| (l * n + j, k.neg(v)));
                sys.add_equation(lhs.chain(rhs), k);
            }
        }
    }
    Ok(HomSpace {
        src_dim: n,
        dst_dim: m,
        basis: HomBasis::Generic(sys.nullspace(k)),
    })
}

pub fn hom_dim(tower: &FieldTower, src: &Rep, dst: &Rep, budget: u64) -> Result<usize> {
    Ok(hom_space(tower, src, dst, budget)?.dim())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum IsoVerdict {
    Iso,
    Inconclusive,
    /// Different dimensions or fingerprints.
    NotIso(String),
}

/// Samples random intertwiners and reports `Iso` if one is invertible.
/// Never claims non-isomorphism from sampling alone.
pub fn iso_probable(
    tower: &FieldTower,
    class_reps: &[Mat2],
    a: &Rep,
    b: &Rep,
    trials: usize,
    seed: u64,
    budget: u64,
) -> Result<IsoVerdict> {
    if a.dim() != b.dim() {
        return Ok(IsoVerdict::NotIso(format!("dimensions {} and {}", a.dim(), b.dim())));
    }
    let cmp = compare(
        &fingerprint(tower, a, class_reps)?,
        &fingerprint(tower, b, class_reps)?,
    );
    if !cmp.is_equal() {
        return Ok(IsoVerdict::NotIso("fingerprints differ".into()));
    }
    // Prefer the direction in which reciprocity applies.
    let mut probe = Vec::new();
    let (src, dst) = if induced_parts(b, &mut probe, 1) { (b, a) } else { (a, b) };
    let hom = hom_space(tower, src, dst, budget)?;
    if hom.dim() == 0 {
        return Ok(IsoVerdict::Inconclusive);
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let k = tower.top();
    for _ in 0..trials {
        if hom.random_element(tower, dst, &mut rng).is_invertible(k) {
            return Ok(IsoVerdict::Iso);
        }
    }
    Ok(IsoVerdict::Inconclusive)
}
