//! Mod p characters of the named subgroups and the representations built
//! from them: monomial inductions, the symmetric-power Steinberg model,
//! determinant twists, tensor products and direct sums.

use std::collections::HashMap;
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTower};
use crate::grp::{self, Mat2, SubgroupKind, SubgroupSpec};
use crate::linalg::{Matrix, SparseRow};
use crate::mackey::{self, CosetSystem};

/// A multiplicative character with values in `F_{q^2}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum CharacterSpec {
    /// `χ_{r,s}(B) = a^r d^s` on upper-triangular matrices.
    ChiRS { r: i64, s: i64, domain: SubgroupSpec },
    /// `ω_{2f}^r([[a,b],[bε²,a]]) = (a + bε)^r`.
    Omega { r: i64, domain: SubgroupSpec },
    /// `ω_2^r([[a,b],[bη²,a]]) = (a + bη)^r`.
    OmegaP { r: i64, domain: SubgroupSpec },
    /// `det^s`.
    DetPow { s: i64, domain: SubgroupSpec },
    /// `χ^γ(h) = χ(γ^{-1} h γ)`, defined where the conjugate lands in the
    /// domain of `base`.
    Twisted { base: Box<CharacterSpec>, gamma: Mat2 },
}

impl CharacterSpec {
    pub fn chi_r(r: i64) -> Self {
        CharacterSpec::ChiRS { r, s: 0, domain: SubgroupSpec::BQ }
    }

    pub fn chi_rs(r: i64, s: i64, domain: SubgroupSpec) -> Self {
        CharacterSpec::ChiRS { r, s, domain }
    }

    pub fn omega_2f(r: i64) -> Self {
        CharacterSpec::Omega { r, domain: SubgroupSpec::TQ }
    }

    pub fn omega_2(r: i64) -> Self {
        CharacterSpec::OmegaP { r, domain: SubgroupSpec::TP }
    }

    pub fn twist(&self, gamma: Mat2) -> Self {
        CharacterSpec::Twisted {
            base: Box::new(self.clone()),
            gamma,
        }
    }

    /// Named domain; `None` for twists.
    pub fn domain(&self) -> Option<SubgroupSpec> {
        match self {
            CharacterSpec::ChiRS { domain, .. }
            | CharacterSpec::Omega { domain, .. }
            | CharacterSpec::OmegaP { domain, .. }
            | CharacterSpec::DetPow { domain, .. } => Some(*domain),
            CharacterSpec::Twisted { .. } => None,
        }
    }

    /// The same formula on a smaller named subgroup.
    pub fn restrict(&self, tower: &FieldTower, to: SubgroupSpec) -> Result<Self> {
        let mut out = self.clone();
        match &mut out {
            CharacterSpec::ChiRS { domain, .. }
            | CharacterSpec::Omega { domain, .. }
            | CharacterSpec::OmegaP { domain, .. }
            | CharacterSpec::DetPow { domain, .. } => {
                if !grp::is_subgroup(tower, to, *domain, grp::DEFAULT_ENUM_BUDGET)? {
                    return Err(Error::NotASubgroup(to.name(), domain.name()));
                }
                *domain = to;
            }
            CharacterSpec::Twisted { .. } => {
                return Err(Error::Incompatible(
                    "restrict a twist by inducing from its explicit domain".into(),
                ))
            }
        }
        Ok(out)
    }

    /// Value at `g`, assuming `g` lies in the domain.
    pub fn value(&self, tower: &FieldTower, g: &Mat2) -> Elem {
        let k = tower.top();
        match self {
            CharacterSpec::ChiRS { r, s, .. } => k.mul(k.pow(g.a, *r), k.pow(g.d, *s)),
            CharacterSpec::Omega { r, .. } => {
                k.pow(k.add(g.a, k.mul(g.b, tower.epsilon_top())), *r)
            }
            CharacterSpec::OmegaP { r, .. } => k.pow(k.add(g.a, k.mul(g.b, tower.eta_top())), *r),
            CharacterSpec::DetPow { s, .. } => k.pow(g.det(k), *s),
            CharacterSpec::Twisted { base, gamma } => {
                base.value(tower, &gamma.inv(k).conjugate(g, k))
            }
        }
    }

    /// Value at `g` after checking that `g` lies in the domain.
    pub fn eval(&self, tower: &FieldTower, g: &Mat2) -> Result<Elem> {
        match self {
            CharacterSpec::Twisted { base, gamma } => {
                let k = tower.top();
                base.eval(tower, &gamma.inv(k).conjugate(g, k))
            }
            _ => {
                let d = self.domain().expect("named domain");
                if !grp::contains(tower, d, g)? {
                    return Err(Error::OutsideDomain(format!("{g:?}"), d.name()));
                }
                Ok(self.value(tower, g))
            }
        }
    }
}

impl fmt::Display for CharacterSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CharacterSpec::ChiRS { r, s: 0, .. } => write!(f, "chi_{r}"),
            CharacterSpec::ChiRS { r, s, .. } => write!(f, "chi_{{{r},{s}}}"),
            CharacterSpec::Omega { r, .. } => write!(f, "omega_2f^{r}"),
            CharacterSpec::OmegaP { r, .. } => write!(f, "omega_2^{r}"),
            CharacterSpec::DetPow { s, .. } => write!(f, "det^{s}"),
            CharacterSpec::Twisted { base, .. } => write!(f, "({base})^gamma"),
        }
    }
}

/// Left cosets of a subgroup of `G_p` inside an enumerable group, with the
/// least element of each coset as representative.
#[derive(Debug)]
pub struct CosetTable {
    pub sub: SubgroupSpec,
    pub into: SubgroupSpec,
    pub sub_elements: Vec<Mat2>,
    pub reps: Vec<Mat2>,
    pub rep_invs: Vec<Mat2>,
    label: HashMap<Mat2, u32>,
}

impl CosetTable {
    pub fn build(tower: &FieldTower, sub: SubgroupSpec, into: SubgroupSpec, budget: u64) -> Result<Self> {
        let k = tower.top();
        if !grp::is_subgroup(tower, sub, into, budget)? {
            return Err(Error::NotASubgroup(sub.name(), into.name()));
        }
        let big = grp::enumerate(tower, into, budget)?;
        let sub_elements = grp::enumerate(tower, sub, budget)?;
        let mut label = HashMap::with_capacity(big.len());
        let mut reps = Vec::new();
        for x in &big {
            if label.contains_key(x) {
                continue;
            }
            let idx = reps.len() as u32;
            for h in &sub_elements {
                label.insert(x.mul(h, k), idx);
            }
            reps.push(*x);
        }
        Ok(CosetTable {
            sub,
            into,
            sub_elements,
            rep_invs: reps.iter().map(|g| g.inv(k)).collect(),
            reps,
            label,
        })
    }

    pub fn len(&self) -> usize {
        self.reps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.reps.is_empty()
    }

    pub fn coset_of(&self, g: &Mat2) -> Option<usize> {
        self.label.get(g).map(|&i| i as usize)
    }
}

#[derive(Clone, Debug)]
pub enum Cosets {
    /// `G_q / B_q` or `G_q / T_q` through points of a projective line.
    Point(Arc<CosetSystem>),
    Table(Arc<CosetTable>),
}

/// `ind_H^G χ` on the basis `e_j = γ_j ⊗ 1`; `g e_j = χ(h) e_i` where
/// `g γ_j = γ_i h`.
#[derive(Clone, Debug)]
pub struct MonomialRep {
    /// The group acting; smaller than `parent` after restriction.
    pub group: SubgroupSpec,
    pub parent: SubgroupSpec,
    pub sub: SubgroupSpec,
    pub cosets: Cosets,
    pub character: CharacterSpec,
}

impl MonomialRep {
    pub fn dim(&self) -> usize {
        match &self.cosets {
            Cosets::Point(s) => s.len(),
            Cosets::Table(t) => t.len(),
        }
    }

    /// `g e_j = scalars[j] e_{perm[j]}`.
    pub fn action(&self, tower: &FieldTower, g: &Mat2) -> (Vec<u32>, Vec<Elem>) {
        let k = tower.top();
        let n = self.dim();
        let mut perm = Vec::with_capacity(n);
        let mut scalars = Vec::with_capacity(n);
        for j in 0..n {
            let (i, h) = match &self.cosets {
                Cosets::Point(s) => s.translate(tower, g, j),
                Cosets::Table(t) => {
                    let x = g.mul(&t.reps[j], k);
                    let i = t.coset_of(&x).expect("coset table covers the group");
                    (i, t.rep_invs[i].mul(&x, k))
                }
            };
            perm.push(i as u32);
            scalars.push(self.character.value(tower, &h));
        }
        (perm, scalars)
    }

    /// Coset representatives as group elements.
    pub fn coset_reps(&self) -> &[Mat2] {
        match &self.cosets {
            Cosets::Point(s) => &s.reps,
            Cosets::Table(t) => &t.reps,
        }
    }

    pub fn name(&self) -> String {
        let base = format!("ind({}, {})", self.sub.name(), self.character);
        if self.group == self.parent {
            base
        } else {
            format!("{base} | {}", self.group.name())
        }
    }
}

/// Representations given by an explicit matrix formula.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum MatrixKind {
    /// `Sym^n` of the standard representation on `X^{n-k} Y^k`, with
    /// `(g P)(X, Y) = P(aX + cY, bX + dY)`.
    SymPower(u32),
    /// The one-dimensional `det^s`.
    Det(i64),
}

#[derive(Clone, Debug)]
pub struct MatrixRep {
    pub group: SubgroupSpec,
    pub kind: MatrixKind,
}

impl MatrixRep {
    pub fn dim(&self) -> usize {
        match self.kind {
            MatrixKind::SymPower(n) => n as usize + 1,
            MatrixKind::Det(_) => 1,
        }
    }

    pub fn matrix(&self, tower: &FieldTower, g: &Mat2) -> Matrix {
        let k = tower.top();
        match self.kind {
            MatrixKind::Det(s) => Matrix {
                rows: 1,
                cols: 1,
                data: vec![k.pow(g.det(k), s)],
            },
            MatrixKind::SymPower(n) => {
                let n = n as usize;
                let lin = |u: Elem, v: Elem, e: usize| {
                    let mut out = vec![k.one()];
                    for _ in 0..e {
                        out = crate::linalg::upoly::mul(k, &out, &[u, v]);
                    }
                    out
                };
                let mut m = Matrix::zeros(n + 1, n + 1);
                for col in 0..=n {
                    // coefficients in Y of (a + cY)^{n-col} (b + dY)^col
                    let poly = crate::linalg::upoly::mul(
                        k,
                        &lin(g.a, g.c, n - col),
                        &lin(g.b, g.d, col),
                    );
                    for (row, &c) in poly.iter().enumerate() {
                        m.set(row, col, c);
                    }
                }
                m
            }
        }
    }

    pub fn name(&self) -> String {
        match self.kind {
            MatrixKind::SymPower(n) => format!("Sym^{n}"),
            MatrixKind::Det(s) => format!("det^{s}"),
        }
    }
}

/// A finite-dimensional representation over `F_{q^2}`.
#[derive(Clone, Debug)]
pub enum Rep {
    Monomial(MonomialRep),
    Matrix(MatrixRep),
    Tensor(Box<Rep>, Box<Rep>),
    /// Direct sum with literal multiplicities.
    Sum {
        group: SubgroupSpec,
        parts: Vec<(Rep, u64)>,
    },
}

impl Rep {
    pub fn dim(&self) -> usize {
        match self {
            Rep::Monomial(m) => m.dim(),
            Rep::Matrix(m) => m.dim(),
            Rep::Tensor(a, b) => a.dim() * b.dim(),
            Rep::Sum { parts, .. } => parts.iter().map(|(r, m)| r.dim() * *m as usize).sum(),
        }
    }

    pub fn group(&self) -> SubgroupSpec {
        match self {
            Rep::Monomial(m) => m.group,
            Rep::Matrix(m) => m.group,
            Rep::Tensor(a, _) => a.group(),
            Rep::Sum { group, .. } => *group,
        }
    }

    pub fn name(&self) -> String {
        match self {
            Rep::Monomial(m) => m.name(),
            Rep::Matrix(m) => m.name(),
            Rep::Tensor(a, b) => format!("{} (x) {}", a.name(), b.name()),
            Rep::Sum { parts, .. } if parts.is_empty() => "0".into(),
            Rep::Sum { parts, .. } => parts
                .iter()
                .map(|(r, m)| if *m == 1 { r.name() } else { format!("{m}*[{}]", r.name()) })
                .collect::<Vec<_>>()
                .join(" + "),
        }
    }

    fn check_member(&self, tower: &FieldTower, g: &Mat2) -> Result<()> {
        let group = self.group();
        if grp::contains(tower, group, g)? {
            Ok(())
        } else {
            Err(Error::OutsideDomain(format!("{g:?}"), group.name()))
        }
    }

    /// Dense matrix of `g`. Direct sums are materialized block by block.
    pub fn matrix(&self, tower: &FieldTower, g: &Mat2) -> Result<Matrix> {
        self.check_member(tower, g)?;
        Ok(self.matrix_unchecked(tower, g))
    }

    pub(crate) fn matrix_unchecked(&self, tower: &FieldTower, g: &Mat2) -> Matrix {
        let k = tower.top();
        match self {
            Rep::Monomial(m) => {
                let (perm, scalars) = m.action(tower, g);
                Matrix::monomial(&perm, &scalars)
            }
            Rep::Matrix(m) => m.matrix(tower, g),
            Rep::Tensor(a, b) => a
                .matrix_unchecked(tower, g)
                .kron(&b.matrix_unchecked(tower, g), k),
            Rep::Sum { parts, .. } => {
                let mats: Vec<(Matrix, u64)> = parts
                    .iter()
                    .map(|(r, m)| (r.matrix_unchecked(tower, g), *m))
                    .collect();
                let blocks: Vec<&Matrix> = mats
                    .iter()
                    .flat_map(|(x, m)| std::iter::repeat_n(x, *m as usize))
                    .collect();
                Matrix::block_diag(&blocks)
            }
        }
    }

    /// Rows of the matrix of `g` as sparse rows.
    pub fn sparse_rows(&self, tower: &FieldTower, g: &Mat2) -> Vec<SparseRow> {
        match self {
            Rep::Monomial(m) => {
                let (perm, scalars) = m.action(tower, g);
                let mut rows = vec![Vec::new(); perm.len()];
                for (j, (&i, &s)) in perm.iter().zip(&scalars).enumerate() {
                    rows[i as usize].push((j, s));
                }
                rows
            }
            Rep::Sum { parts, .. } => {
                let mut rows = Vec::with_capacity(self.dim());
                let mut offset = 0;
                for (r, m) in parts {
                    let block = r.sparse_rows(tower, g);
                    for _ in 0..*m {
                        rows.extend(
                            block
                                .iter()
                                .map(|row| row.iter().map(|&(j, v)| (j + offset, v)).collect()),
                        );
                        offset += r.dim();
                    }
                }
                rows
            }
            _ => {
                let m = self.matrix_unchecked(tower, g);
                (0..m.rows)
                    .map(|i| {
                        (0..m.cols)
                            .filter_map(|j| {
                                let v = m.get(i, j);
                                (!v.is_zero()).then_some((j, v))
                            })
                            .collect()
                    })
                    .collect()
            }
        }
    }

    /// The same space with the action limited to `to`.
    pub fn restrict(&self, tower: &FieldTower, to: SubgroupSpec) -> Result<Rep> {
        if !grp::is_subgroup(tower, to, self.group(), grp::DEFAULT_ENUM_BUDGET)? {
            return Err(Error::NotASubgroup(to.name(), self.group().name()));
        }
        Ok(self.with_group(to))
    }

    fn with_group(&self, to: SubgroupSpec) -> Rep {
        match self {
            Rep::Monomial(m) => Rep::Monomial(MonomialRep { group: to, ..m.clone() }),
            Rep::Matrix(m) => Rep::Matrix(MatrixRep { group: to, ..m.clone() }),
            Rep::Tensor(a, b) => Rep::Tensor(Box::new(a.with_group(to)), Box::new(b.with_group(to))),
            Rep::Sum { parts, .. } => Rep::Sum {
                group: to,
                parts: parts.iter().map(|(r, m)| (r.with_group(to), *m)).collect(),
            },
        }
    }
}

/// `ind_{sub}^{into} χ`. Point-based cosets for `B_q, T_q ≤ G_q`, enumerated
/// coset tables for subgroups of `G_p`.
pub fn induce(
    tower: &FieldTower,
    sub: SubgroupSpec,
    chi: CharacterSpec,
    into: SubgroupSpec,
    budget: u64,
) -> Result<Rep> {
    let cosets = if into == SubgroupSpec::GQ && matches!(sub, SubgroupSpec::BQ | SubgroupSpec::TQ) {
        if chi.domain() != Some(sub) {
            return Err(Error::Incompatible(format!(
                "character {chi} is not declared on {}",
                sub.name()
            )));
        }
        Cosets::Point(Arc::new(mackey::coset_reps(tower, sub)?))
    } else {
        if into.level != crate::ffield::Level::Fp {
            return Err(Error::UnsupportedSubgroup(format!(
                "induction from {} to {}",
                sub.name(),
                into.name()
            )));
        }
        let table = CosetTable::build(tower, sub, into, budget)?;
        for h in &table.sub_elements {
            chi.eval(tower, h)?;
        }
        Cosets::Table(Arc::new(table))
    };
    Ok(Rep::Monomial(MonomialRep {
        group: into,
        parent: into,
        sub,
        cosets,
        character: chi,
    }))
}

/// `Sym^{p-1}` of the standard representation of `G_p`, the model for the
/// reduction of the Steinberg representation.
pub fn steinberg_model(tower: &FieldTower) -> Rep {
    Rep::Matrix(MatrixRep {
        group: SubgroupSpec::GP,
        kind: MatrixKind::SymPower(tower.p() - 1),
    })
}

pub fn det_power(group: SubgroupSpec, s: i64) -> Rep {
    Rep::Matrix(MatrixRep {
        group,
        kind: MatrixKind::Det(s),
    })
}

pub fn tensor(a: Rep, b: Rep) -> Result<Rep> {
    if a.group() != b.group() {
        return Err(Error::Incompatible(format!(
            "tensor of representations of {} and {}",
            a.group().name(),
            b.group().name()
        )));
    }
    Ok(Rep::Tensor(Box::new(a), Box::new(b)))
}

/// Direct sum with multiplicities; zero multiplicities are dropped.
pub fn direct_sum(group: SubgroupSpec, parts: Vec<(Rep, u64)>) -> Result<Rep> {
    if let Some((r, _)) = parts.iter().find(|(r, _)| r.group() != group) {
        return Err(Error::Incompatible(format!(
            "summand {} is not a representation of {}",
            r.name(),
            group.name()
        )));
    }
    Ok(Rep::Sum {
        group,
        parts: parts.into_iter().filter(|(_, m)| *m > 0).collect(),
    })
}

/// Whether two characters of a subgroup agree on every element.
pub fn same_character(
    tower: &FieldTower,
    elements: &[Mat2],
    a: &CharacterSpec,
    b: &CharacterSpec,
) -> bool {
    elements
        .iter()
        .all(|g| a.value(tower, g) == b.value(tower, g))
}

/// The characters `χ_{i,j}` of `S_p`, `0 ≤ i, j < p-1`.
pub fn split_torus_characters(tower: &FieldTower) -> Vec<CharacterSpec> {
    let n = tower.p() as i64 - 1;
    (0..n)
        .flat_map(|i| (0..n).map(move |j| CharacterSpec::chi_rs(i, j, SubgroupSpec::SP)))
        .collect()
}

/// The characters `ω_2^k` of `T_p`, `0 ≤ k < p^2-1`.
pub fn aniso_torus_characters(tower: &FieldTower) -> Vec<CharacterSpec> {
    let n = (tower.p() as i64).pow(2) - 1;
    (0..n).map(CharacterSpec::omega_2).collect()
}

/// Multiset decomposition of a representation of an abelian group of order
/// prime to `p` into the given candidate characters, by common eigenspaces.
/// Returns `(index into candidates, multiplicity)` for nonzero multiplicities
/// and the total dimension accounted for.
pub fn diagonalize(
    tower: &FieldTower,
    rep: &Rep,
    candidates: &[CharacterSpec],
    budget: u64,
) -> Result<(Vec<(usize, usize)>, usize)> {
    let group = rep.group();
    if !matches!(group.kind, SubgroupKind::SplitTorus | SubgroupKind::AnisoTorus | SubgroupKind::Center) {
        return Err(Error::UnsupportedSubgroup(format!(
            "diagonalization needs an abelian group of order prime to p, got {}",
            group.name()
        )));
    }
    let k = tower.top();
    let elements = grp::enumerate(tower, group, budget)?;
    let mats: Vec<Matrix> = elements
        .iter()
        .map(|g| rep.matrix_unchecked(tower, g))
        .collect();
    let n = rep.dim();
    let mut found = Vec::new();
    let mut total = 0;
    for (idx, chi) in candidates.iter().enumerate() {
        let mut ech = crate::linalg::Echelon::new(n);
        for (g, m) in elements.iter().zip(&mats) {
            let c = chi.value(tower, g);
            for i in 0..n {
                let mut row: Vec<Elem> = (0..n).map(|j| m.get(i, j)).collect();
                row[i] = k.sub(row[i], c);
                ech.insert(row, k);
            }
        }
        let mult = n - ech.rank();
        if mult > 0 {
            found.push((idx, mult));
            total += mult;
        }
    }
    Ok((found, total))
}
