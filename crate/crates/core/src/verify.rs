//! Verification suites. Each check rebuilds the objects of one statement,
//! compares them against an independent computation, and reports PASS, FAIL
//! with a witness, or SKIPPED with a reason.

use std::collections::BTreeSet;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Map, Value};

use crate::brauer::{self, IsoVerdict};
use crate::error::{Error, Result};
use crate::ffield::{Elem, FieldTower, Level};
use crate::grp::{self, Mat2, SubgroupSpec};
use crate::linalg::Matrix;
use crate::mackey;
use crate::projline::{self, ProjPoint};
use crate::reps::{self, CharacterSpec, Rep};

/// Closed-form counts of orbit representatives.
pub mod formulas {
    fn exact(num: u64, den: u64) -> Option<u64> {
        num.is_multiple_of(den).then(|| num / den)
    }

    /// `|I_1| = (p^{f-1} - 1) / (p^2 - 1)`.
    pub fn i1(p: u64, f: u32) -> Option<u64> {
        exact(p.pow(f - 1) - 1, p * p - 1)
    }

    /// `|I_2| = p (p^{f-2} - 1) / (p^2 - 1)`, for `f >= 2`.
    pub fn i2(p: u64, f: u32) -> Option<u64> {
        (f >= 2).then(|| exact(p * (p.pow(f - 2) - 1), p * p - 1))?
    }

    /// `|J| = p^{f-1} (p^f - 1) / (p^2 - 1)`.
    pub fn j(p: u64, f: u32) -> Option<u64> {
        exact(p.pow(f - 1) * (p.pow(f) - 1), p * p - 1)
    }

    /// `|J'| = (p^{f-1} - 1)(p^f + p - 1) / (p^2 - 1)`.
    pub fn j_prime(p: u64, f: u32) -> Option<u64> {
        exact((p.pow(f - 1) - 1) * (p.pow(f) + p - 1), p * p - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum Status {
    #[serde(rename = "PASS")]
    Pass,
    #[serde(rename = "FAIL")]
    Fail,
    #[serde(rename = "SKIPPED")]
    Skipped,
}

impl Status {
    pub fn as_str(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub id: String,
    pub params: Map<String, Value>,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reason: Option<String>,
    pub details: Map<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Value>,
    pub elapsed_ms: u64,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

struct Builder {
    id: String,
    params: Map<String, Value>,
    details: Map<String, Value>,
    witness: Option<Value>,
    skipped: Option<String>,
    start: Instant,
}

impl Builder {
    fn new(id: &str, params: Value) -> Self {
        Builder {
            id: id.to_string(),
            params: params.as_object().cloned().unwrap_or_default(),
            details: Map::new(),
            witness: None,
            skipped: None,
            start: Instant::now(),
        }
    }

    fn detail(&mut self, key: &str, v: impl Serialize) {
        self.details.insert(key.into(), json!(v));
    }

    /// Records the first failure; returns `ok`.
    fn expect(&mut self, ok: bool, witness: impl FnOnce() -> Value) -> bool {
        if !ok && self.witness.is_none() {
            self.witness = Some(witness());
        }
        ok
    }

    fn failed(&self) -> bool {
        self.witness.is_some()
    }

    fn skip(&mut self, reason: impl Into<String>) {
        self.skipped.get_or_insert(reason.into());
    }

    fn finish(self) -> CheckReport {
        let (status, reason) = match (&self.witness, self.skipped) {
            (Some(_), _) => (Status::Fail, None),
            (None, Some(r)) => (Status::Skipped, Some(r)),
            (None, None) => (Status::Pass, None),
        };
        CheckReport {
            id: self.id,
            params: self.params,
            status,
            reason,
            details: self.details,
            witness: self.witness,
            elapsed_ms: self.start.elapsed().as_millis() as u64,
        }
    }
}

fn is_budget(e: &Error) -> bool {
    matches!(e, Error::EnumerationBudget { .. } | Error::HomBudget { .. })
}

/// Runs `body`, turning budget errors into SKIPPED.
fn guarded(id: &str, params: Value, body: impl FnOnce(&mut Builder) -> Result<()>) -> Result<CheckReport> {
    let mut b = Builder::new(id, params);
    match body(&mut b) {
        Ok(()) => Ok(b.finish()),
        Err(e) if is_budget(&e) => {
            b.skip(e.to_string());
            Ok(b.finish())
        }
        Err(e) => Err(e),
    }
}

#[derive(Clone, Copy, Debug)]
pub struct Budgets {
    pub enumeration: u64,
    pub hom: u64,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            enumeration: grp::DEFAULT_ENUM_BUDGET,
            hom: brauer::DEFAULT_HOM_BUDGET,
        }
    }
}

/// Shared state for checks at one `(p, f)`.
pub struct Context {
    pub tower: FieldTower,
    pub classes: Vec<Mat2>,
    pub budgets: Budgets,
    pub seed: u64,
    pub iso_trials: usize,
}

impl Context {
    pub fn new(p: u32, f: u32, budgets: Budgets, seed: u64) -> Result<Self> {
        Self::from_tower(FieldTower::build(p, f)?, budgets, seed)
    }

    pub fn from_tower(tower: FieldTower, budgets: Budgets, seed: u64) -> Result<Self> {
        let classes = grp::p_regular_class_reps(&tower);
        Ok(Context {
            tower,
            classes,
            budgets,
            seed,
            iso_trials: 8,
        })
    }

    fn p(&self) -> u64 {
        self.tower.p() as u64
    }

    fn f(&self) -> u32 {
        self.tower.f()
    }

    fn q(&self) -> u64 {
        self.tower.q() as u64
    }

    fn pf(&self) -> Value {
        json!({"p": self.p(), "f": self.f()})
    }

    fn pfr(&self, r: i64) -> Value {
        json!({"p": self.p(), "f": self.f(), "r": r})
    }

    fn pt_json(&self, pt: ProjPoint) -> Value {
        pt.to_json(&self.tower)
    }
}

/// Exhaustive `G_p`-orbit of a point, independent of the generator BFS.
fn brute_orbit(ctx: &Context, gp: &[Mat2], pt: ProjPoint) -> Vec<ProjPoint> {
    let k = ctx.tower.top();
    let mut v: Vec<ProjPoint> = gp.iter().map(|g| projline::act(k, g, pt)).collect();
    v.sort();
    v.dedup();
    v
}

/// Whether `elements` is exactly `spec`; labels coincide for `f = 1`.
fn same_group(ctx: &Context, elements: &[Mat2], spec: SubgroupSpec) -> Result<bool> {
    let n = grp::enumerate(&ctx.tower, spec, ctx.budgets.enumeration)?.len();
    if n != elements.len() {
        return Ok(false);
    }
    for g in elements {
        if !grp::contains(&ctx.tower, spec, g)? {
            return Ok(false);
        }
    }
    Ok(true)
}

pub fn check_l1(ctx: &Context) -> Result<CheckReport> {
    guarded("L1", ctx.pf(), |b| {
        let t = &ctx.tower;
        let q = ctx.q();
        let d = projline::orbit_decomposition(t, SubgroupSpec::GQ, Level::Fq2)?;
        b.detail("sizes", d.sizes());
        let want = vec![(q + 1) as usize, (q * q - q) as usize];
        b.expect(d.sizes() == want, || json!({"sizes": d.sizes(), "expected": want}));
        let eps = ProjPoint::Finite(t.epsilon_top());
        let zero = ProjPoint::Finite(Elem::ZERO);
        let reps: Vec<ProjPoint> = d.orbits.iter().map(|o| o.rep).collect();
        b.expect(reps == vec![zero, eps], || json!({"reps": reps.iter().map(|p| ctx.pt_json(*p)).collect::<Vec<_>>()}));
        b.expect(d.total() as u64 == q * q + 1, || json!({"total": d.total()}));
        let budget = ctx.budgets.enumeration;
        for (pt, want) in [(zero, SubgroupSpec::BQ), (eps, SubgroupSpec::TQ)] {
            let s = projline::stabilizer(t, SubgroupSpec::GQ, pt, budget)?;
            b.detail(&format!("stab_{}", if pt == zero { "0" } else { "eps" }), s.label());
            let same = s.kind == Some(want) || same_group(ctx, &s.elements, want)?;
            b.expect(same, || json!({"point": ctx.pt_json(pt), "stabilizer": s.label(), "expected": want.name()}));
        }
        Ok(())
    })
}

/// Coordinates of `(1, x, x^2)` over `F_p` have rank 3 for every `x ∈ X`.
pub fn check_l2(ctx: &Context) -> Result<CheckReport> {
    guarded("L2", ctx.pf(), |b| {
        let t = &ctx.tower;
        let k = t.top();
        let xs = projline::generic_set(t);
        b.detail("set_size", xs.len());
        for &x in &xs {
            let rows: Vec<Vec<u32>> = [k.one(), x, k.mul(x, x)].iter().map(|&v| k.coeffs(v)).collect();
            let n = rows[0].len();
            let m = Matrix {
                rows: 3,
                cols: n,
                data: rows.iter().flatten().map(|&c| k.from_int(c as i64)).collect(),
            };
            if !b.expect(m.rank(k) == 3, || json!({"x": projline::render_elem(t, x)})) {
                break;
            }
        }
        Ok(())
    })
}

pub fn check_l3(ctx: &Context) -> Result<CheckReport> {
    guarded("L3", ctx.pf(), |b| {
        let t = &ctx.tower;
        let k = t.top();
        let eta = ProjPoint::Finite(t.eta_top());
        let gp_orbit = projline::orbit(k, &grp::generators(t), eta);
        let target = if ctx.f().is_multiple_of(2) {
            ProjPoint::Finite(Elem::ZERO)
        } else {
            b.expect(t.eta_top() == t.epsilon_top(), || json!({"epsilon_equals_eta": false}));
            ProjPoint::Finite(t.epsilon_top())
        };
        let gq_orbit = projline::orbit(k, &grp::gq_generators(t), target);
        b.detail("orbit_size", gp_orbit.len());
        b.detail("container", if ctx.f().is_multiple_of(2) { "O_Gq(0)" } else { "O_Gq(eps)" });
        let outside = gp_orbit.iter().find(|x| gq_orbit.binary_search(x).is_err());
        b.expect(outside.is_none(), || json!({"point": ctx.pt_json(*outside.unwrap())}));
        if ctx.f().is_multiple_of(2) {
            b.expect(gq_orbit == projline::points(t, Level::Fq), || json!({"O_Gq(0)": "differs from P1(F_q)"}));
        }
        Ok(())
    })
}

/// `Stab_{G_p}(x̂) = Z_p` for every `x ∈ X`.
pub fn check_l4(ctx: &Context) -> Result<CheckReport> {
    guarded("L4", ctx.pf(), |b| {
        let t = &ctx.tower;
        let xs = projline::generic_set(t);
        b.detail("set_size", xs.len());
        for &x in &xs {
            let s = projline::stabilizer(t, SubgroupSpec::GP, ProjPoint::Finite(x), ctx.budgets.enumeration)?;
            if !b.expect(s.kind == Some(SubgroupSpec::ZP), || {
                json!({"x": projline::render_elem(t, x), "stabilizer": s.label()})
            }) {
                break;
            }
        }
        Ok(())
    })
}

/// For odd `f`, `η` works as `ε`.
pub fn check_l5(ctx: &Context) -> Result<CheckReport> {
    guarded("L5", ctx.pf(), |b| {
        let t = &ctx.tower;
        let k = t.top();
        let eta = t.eta_top();
        let sq = k.mul(eta, eta);
        let in_fq = t.in_level(eta, Level::Fq);
        let sq_in_fq = t.in_level(sq, Level::Fq);
        b.detail("eta_in_Fq", in_fq);
        b.detail("eta_sq_in_Fq", sq_in_fq);
        if ctx.f() % 2 == 1 {
            b.expect(!in_fq && sq_in_fq, || json!({"eta_in_Fq": in_fq, "eta_sq_in_Fq": sq_in_fq}));
            b.expect(t.epsilon_top() == eta, || json!({"epsilon_equals_eta": false}));
        } else {
            // F_{p^2} ⊆ F_q, so η itself is in F_q and ε must differ.
            b.expect(in_fq, || json!({"eta_in_Fq": in_fq}));
            b.expect(t.epsilon_top() != eta, || json!({"epsilon_equals_eta": true}));
        }
        Ok(())
    })
}

pub fn check_p1(ctx: &Context) -> Result<CheckReport> {
    guarded("P1", ctx.pf(), |b| {
        let t = &ctx.tower;
        let (p, f) = (ctx.p(), ctx.f());
        let generic = p * (p * p - 1);
        let d = projline::orbit_decomposition(t, SubgroupSpec::GP, Level::Fq)?;
        let gp = grp::enumerate(t, SubgroupSpec::GP, ctx.budgets.enumeration)?;
        b.detail("sizes", d.sizes());
        let mut expected: Vec<(ProjPoint, u64, SubgroupSpec)> =
            vec![(ProjPoint::Finite(Elem::ZERO), p + 1, SubgroupSpec::BP)];
        let count = if f % 2 == 1 {
            let i1 = formulas::i1(p, f);
            b.detail("I1", i1);
            b.expect(i1.is_some(), || json!({"I1": "formula is not an integer"}));
            i1.unwrap_or(0)
        } else {
            expected.push((ProjPoint::Finite(t.eta_top()), p * p - p, SubgroupSpec::TP));
            let i2 = formulas::i2(p, f);
            b.detail("I2", i2);
            b.expect(i2.is_some(), || json!({"I2": "formula is not an integer"}));
            i2.unwrap_or(0)
        };
        b.expect(d.orbits.len() as u64 == expected.len() as u64 + count, || {
            json!({"orbits": d.orbits.len(), "expected": expected.len() as u64 + count})
        });
        for (i, o) in d.orbits.iter().enumerate() {
            let (want_size, want_stab) = match expected.get(i) {
                Some((pt, s, st)) => {
                    b.expect(o.rep == *pt, || json!({"orbit": i, "rep": ctx.pt_json(o.rep)}));
                    (*s, *st)
                }
                None => (generic, SubgroupSpec::ZP),
            };
            b.expect(o.size as u64 == want_size && o.stabilizer_kind == Some(want_stab), || {
                json!({"rep": ctx.pt_json(o.rep), "size": o.size, "stab": o.stabilizer_kind.map(|s| s.name())})
            });
            b.expect(o.size as u64 * o.stabilizer_order == gp.len() as u64, || json!({"orbit_stabilizer": ctx.pt_json(o.rep)}));
            let full = brute_orbit(ctx, &gp, o.rep);
            b.expect(full == o.points, || json!({"bfs_vs_exhaustive": ctx.pt_json(o.rep)}));
        }
        b.expect(d.total() as u64 == ctx.q() + 1, || json!({"total": d.total()}));
        Ok(())
    })
}

pub fn check_p2(ctx: &Context) -> Result<CheckReport> {
    guarded("P2", ctx.pf(), |b| {
        let t = &ctx.tower;
        let (p, f, q) = (ctx.p(), ctx.f(), ctx.q());
        let generic = p * (p * p - 1);
        let d = projline::split_epsilon_orbit(t)?;
        let gp = grp::enumerate(t, SubgroupSpec::GP, ctx.budgets.enumeration)?;
        let (special, count) = if f % 2 == 0 {
            let j = formulas::j(p, f);
            b.detail("J", j);
            b.expect(j.is_some(), || json!({"J": "formula is not an integer"}));
            (0usize, j.unwrap_or(0))
        } else {
            let jp = formulas::j_prime(p, f);
            b.detail("J_prime", jp);
            b.expect(jp.is_some(), || json!({"J_prime": "formula is not an integer"}));
            (1usize, jp.unwrap_or(0))
        };
        b.detail("orbits", d.orbits.len());
        b.expect(d.orbits.len() as u64 == special as u64 + count, || {
            json!({"orbits": d.orbits.len(), "expected": special as u64 + count})
        });
        for (i, o) in d.orbits.iter().enumerate() {
            let (size, stab) = if i < special {
                b.expect(o.rep == ProjPoint::Finite(t.epsilon_top()), || json!({"first_rep": ctx.pt_json(o.rep)}));
                (p * p - p, SubgroupSpec::TP)
            } else {
                (generic, SubgroupSpec::ZP)
            };
            b.expect(o.size as u64 == size && o.stabilizer_kind == Some(stab), || {
                json!({"rep": ctx.pt_json(o.rep), "size": o.size, "stab": o.stabilizer_kind.map(|s| s.name())})
            });
            let full = brute_orbit(ctx, &gp, o.rep);
            b.expect(full == o.points, || json!({"bfs_vs_exhaustive": ctx.pt_json(o.rep)}));
        }
        b.detail("total", d.total());
        b.expect(d.total() as u64 == q * q - q, || json!({"total": d.total()}));
        Ok(())
    })
}

/// `G_p`-orbits of `P^1(F_{q^2})` sorted into the two `G_q`-orbits.
pub fn check_summary(ctx: &Context) -> Result<CheckReport> {
    guarded("SUMMARY", ctx.pf(), |b| {
        let t = &ctx.tower;
        let k = t.top();
        let (p, f) = (ctx.p(), ctx.f());
        let all = projline::orbit_decomposition(t, SubgroupSpec::GP, Level::Fq2)?;
        let i2_big = formulas::i2(p, 2 * f);
        b.detail("orbits", all.orbits.len());
        b.detail("I2_of_2f", i2_big);
        b.expect(Some(all.orbits.len() as u64) == i2_big.map(|x| x + 2), || {
            json!({"orbits": all.orbits.len(), "expected": i2_big.map(|x| x + 2)})
        });
        let zero_side = projline::orbit(k, &grp::gq_generators(t), ProjPoint::Finite(Elem::ZERO));
        let mut eps_side_count = 0u64;
        for o in &all.orbits {
            let inside = o.points.iter().filter(|x| zero_side.binary_search(x).is_ok()).count();
            if !b.expect(inside == 0 || inside == o.size, || json!({"straddles": ctx.pt_json(o.rep)})) {
                break;
            }
            if inside == 0 {
                eps_side_count += 1;
            }
        }
        let expected = if f % 2 == 0 { formulas::j(p, f) } else { formulas::j_prime(p, f).map(|x| x + 1) };
        b.detail("eps_side", eps_side_count);
        b.expect(Some(eps_side_count) == expected, || json!({"eps_side": eps_side_count, "expected": expected}));
        let eta_on_zero_side = zero_side.binary_search(&ProjPoint::Finite(t.eta_top())).is_ok();
        b.expect(eta_on_zero_side == (f % 2 == 0), || json!({"eta_on_zero_side": eta_on_zero_side}));
        Ok(())
    })
}

pub fn check_r6(ctx: &Context) -> Result<CheckReport> {
    guarded("R6", ctx.pf(), |b| {
        let t = &ctx.tower;
        let inter = grp::intersect_with_gp(t, SubgroupSpec::TQ)?;
        let want = if ctx.f().is_multiple_of(2) { SubgroupSpec::ZP } else { SubgroupSpec::TP };
        b.detail("intersection", inter.label());
        b.expect(inter.kind == Some(want), || json!({"intersection": inter.label(), "expected": want.name()}));
        let mut contained = true;
        for g in grp::enumerate(t, SubgroupSpec::TP, ctx.budgets.enumeration)? {
            contained &= grp::contains(t, SubgroupSpec::TQ, &g)?;
        }
        b.detail("Tp_in_Tq", contained);
        b.expect(contained == (ctx.f() % 2 == 1), || json!({"Tp_in_Tq": contained}));
        Ok(())
    })
}

/// Mackey data for `B_q` or `T_q` against the orbit decompositions, with a
/// brute-force double-coset partition when `G_q` fits the budget.
pub fn check_mackey(ctx: &Context, small: SubgroupSpec) -> Result<CheckReport> {
    let id = if small == SubgroupSpec::BQ { "MACKEY.B" } else { "MACKEY.T" };
    guarded(id, ctx.pf(), |b| {
        let t = &ctx.tower;
        let k = t.top();
        let (p, f, q) = (ctx.p(), ctx.f(), ctx.q());
        let d = mackey::double_coset_reps(t, small)?;
        let index = if small == SubgroupSpec::BQ { q + 1 } else { q * q - q };
        b.expect(d.system.len() as u64 == index, || json!({"coset_reps": d.system.len(), "expected": index}));
        let mut distinct = d.system.points.clone();
        distinct.dedup();
        b.expect(distinct.len() == d.system.len(), || json!({"coset_points": "not distinct"}));
        let mut expected_kinds = Vec::new();
        let count = match (small == SubgroupSpec::BQ, f % 2 == 0) {
            (true, false) => {
                expected_kinds.push(SubgroupSpec::BP);
                1 + formulas::i1(p, f).unwrap_or(0)
            }
            (true, true) => {
                expected_kinds.extend([SubgroupSpec::BP, SubgroupSpec::TP]);
                2 + formulas::i2(p, f).unwrap_or(0)
            }
            (false, true) => formulas::j(p, f).unwrap_or(0),
            (false, false) => {
                expected_kinds.push(SubgroupSpec::TP);
                1 + formulas::j_prime(p, f).unwrap_or(0)
            }
        };
        b.detail("gammas", d.cosets.len());
        b.expect(d.cosets.len() as u64 == count, || json!({"gammas": d.cosets.len(), "expected": count}));
        let gp = grp::enumerate(t, SubgroupSpec::GP, ctx.budgets.enumeration)?;
        let mut kinds = Vec::new();
        for (i, c) in d.cosets.iter().enumerate() {
            let stab = projline::stabilizer(t, SubgroupSpec::GP, c.point, ctx.budgets.enumeration)?;
            b.expect(stab.elements == c.intersection.elements, || {
                json!({"gamma": projline::render_mat(t, &c.gamma), "intersection": c.intersection.label(), "stabilizer": stab.label()})
            });
            let want = expected_kinds.get(i).copied().unwrap_or(SubgroupSpec::ZP);
            b.expect(c.intersection.kind == Some(want), || {
                json!({"gamma": projline::render_mat(t, &c.gamma), "intersection": c.intersection.label(), "expected": want.name()})
            });
            b.expect(projline::act(k, &c.gamma, d.system.base) == c.point, || json!({"gamma_point": ctx.pt_json(c.point)}));
            kinds.push(c.intersection.label());
        }
        b.detail("intersections", kinds);
        let gammas: Vec<Mat2> = d.cosets.iter().map(|c| c.gamma).collect();
        match mackey::brute_force_double_cosets(t, small, d.system.base, &gammas, ctx.budgets.enumeration) {
            Ok(audit) => {
                let gq = SubgroupSpec::GQ.order(t);
                b.detail("brute_force", "run");
                b.expect(audit.overlap.is_none(), || json!({"overlap": projline::render_mat(t, &audit.overlap.unwrap())}));
                b.expect(audit.covered as u64 == gq, || json!({"covered": audit.covered, "group_order": gq}));
                let h = small.order(t);
                for ((c, size), pts) in d.cosets.iter().zip(&audit.piece_sizes).zip(&audit.piece_points) {
                    let law = gp.len() as u64 * h / c.intersection.elements.len() as u64;
                    b.expect(*size as u64 == law, || json!({"gamma": projline::render_mat(t, &c.gamma), "size": size, "expected": law}));
                    let orbit = &d.orbits.find(c.point).expect("orbit of gamma").points;
                    b.expect(pts == orbit, || json!({"gamma": projline::render_mat(t, &c.gamma), "points": "differ from orbit"}));
                }
                if small == SubgroupSpec::BQ {
                    let a = mackey::double_coset(t, small, &mackey::w(t), ctx.budgets.enumeration)?;
                    let c = mackey::double_coset(t, small, &Mat2::identity(k), ctx.budgets.enumeration)?;
                    b.detail("GpwBq_eq_Gpg0Bq", a == c);
                    b.expect(a == c, || json!({"GpwBq_eq_Gpg0Bq": false}));
                }
            }
            Err(e) if is_budget(&e) => b.detail("brute_force", format!("not run: {e}")),
            Err(e) => return Err(e),
        }
        Ok(())
    })
}

fn fp_induce(ctx: &Context, sub: SubgroupSpec, chi: CharacterSpec) -> Result<Rep> {
    reps::induce(&ctx.tower, sub, chi, SubgroupSpec::GP, ctx.budgets.enumeration)
}

/// `restrict(ind_{B_q}^{G_q} χ_{r,s}, G_p)`.
pub fn principal_series_lhs(ctx: &Context, r: i64, s: i64) -> Result<Rep> {
    let t = &ctx.tower;
    reps::induce(t, SubgroupSpec::BQ, CharacterSpec::chi_rs(r, s, SubgroupSpec::BQ), SubgroupSpec::GQ, ctx.budgets.enumeration)?
        .restrict(t, SubgroupSpec::GP)
}

/// `restrict(ind_{T_q}^{G_q} ω_{2f}^r, G_p)`.
pub fn torus_lhs(ctx: &Context, r: i64) -> Result<Rep> {
    let t = &ctx.tower;
    reps::induce(t, SubgroupSpec::TQ, CharacterSpec::omega_2f(r), SubgroupSpec::GQ, ctx.budgets.enumeration)?
        .restrict(t, SubgroupSpec::GP)
}

/// Right side of the Mackey decomposition: inductions from `B_p`, `T_p`
/// and `Z_p` with the closed-form multiplicities.
pub fn mackey_rhs(ctx: &Context, small: SubgroupSpec, chi: &CharacterSpec) -> Result<Rep> {
    let t = &ctx.tower;
    let (p, f) = (ctx.p(), ctx.f());
    let mut parts = Vec::new();
    let z = chi.restrict(t, SubgroupSpec::ZP)?;
    if small == SubgroupSpec::BQ {
        parts.push((fp_induce(ctx, SubgroupSpec::BP, chi.restrict(t, SubgroupSpec::BP)?)?, 1));
        if f % 2 == 0 {
            let gamma = mackey::g_x(t, t.eta_top());
            let inter = mackey::conjugated_intersection(t, &gamma, small)?;
            let twisted = mackey::twist_character(t, chi, &gamma, &inter)?;
            let sub = inter.kind.ok_or_else(|| Error::Internal("g_eta intersection is unnamed".into()))?;
            parts.push((fp_induce(ctx, sub, twisted)?, 1));
            parts.push((fp_induce(ctx, SubgroupSpec::ZP, z)?, formulas::i2(p, f).unwrap_or(0)));
        } else {
            parts.push((fp_induce(ctx, SubgroupSpec::ZP, z)?, formulas::i1(p, f).unwrap_or(0)));
        }
    } else if f % 2 == 0 {
        parts.push((fp_induce(ctx, SubgroupSpec::ZP, z)?, formulas::j(p, f).unwrap_or(0)));
    } else {
        parts.push((fp_induce(ctx, SubgroupSpec::TP, chi.restrict(t, SubgroupSpec::TP)?)?, 1));
        parts.push((fp_induce(ctx, SubgroupSpec::ZP, z)?, formulas::j_prime(p, f).unwrap_or(0)));
    }
    reps::direct_sum(SubgroupSpec::GP, parts)
}

/// `⊕_{i=1}^{p-1} ind_{B_p} χ_{i,(r-i)} ⊗ St̄` (part 1) or
/// `⊕_{i=0}^{p} ind_{T_p} ω_2^{r+i(p-1)}` (part 2).
pub fn z_block(ctx: &Context, r: i64, part: u8) -> Result<Rep> {
    let t = &ctx.tower;
    let p = ctx.p() as i64;
    let mut parts = Vec::new();
    if part == 1 {
        for i in 1..p {
            let b = fp_induce(ctx, SubgroupSpec::BP, CharacterSpec::chi_rs(i, r - i, SubgroupSpec::BP))?;
            parts.push((reps::tensor(b, reps::steinberg_model(t))?, 1));
        }
    } else {
        for i in 0..=p {
            parts.push((fp_induce(ctx, SubgroupSpec::TP, CharacterSpec::omega_2(r + i * (p - 1)))?, 1));
        }
    }
    reps::direct_sum(SubgroupSpec::GP, parts)
}

pub fn t1_rhs(ctx: &Context, r: i64, part: u8) -> Result<Rep> {
    let (p, f) = (ctx.p(), ctx.f());
    let mut parts = vec![(fp_induce(ctx, SubgroupSpec::BP, CharacterSpec::chi_rs(r, 0, SubgroupSpec::BP))?, 1)];
    let m = if f % 2 == 0 {
        parts.push((fp_induce(ctx, SubgroupSpec::TP, CharacterSpec::omega_2(r))?, 1));
        formulas::i2(p, f).unwrap_or(0)
    } else {
        formulas::i1(p, f).unwrap_or(0)
    };
    parts.push((z_block(ctx, r, part)?, m));
    reps::direct_sum(SubgroupSpec::GP, parts)
}

pub fn t2_rhs(ctx: &Context, r: i64, part: u8) -> Result<Rep> {
    let (p, f) = (ctx.p(), ctx.f());
    let mut parts = Vec::new();
    let m = if f % 2 == 0 {
        formulas::j(p, f).unwrap_or(0)
    } else {
        parts.push((fp_induce(ctx, SubgroupSpec::TP, CharacterSpec::omega_2(r))?, 1));
        formulas::j_prime(p, f).unwrap_or(0)
    };
    parts.push((z_block(ctx, r, part)?, m));
    reps::direct_sum(SubgroupSpec::GP, parts)
}

/// Dimension audit, then fingerprint comparison. Returns whether both held.
fn compare_sides(ctx: &Context, b: &mut Builder, lhs: &Rep, rhs: &Rep) -> Result<bool> {
    b.detail("dim", json!({"lhs": lhs.dim(), "rhs": rhs.dim()}));
    if !b.expect(lhs.dim() == rhs.dim(), || json!({"dimension": [lhs.dim(), rhs.dim()]})) {
        return Ok(false);
    }
    let fl = brauer::fingerprint(&ctx.tower, lhs, &ctx.classes)?;
    let fr = brauer::fingerprint(&ctx.tower, rhs, &ctx.classes)?;
    let cmp = brauer::compare(&fl, &fr);
    b.detail("fingerprint", if cmp.is_equal() { "equal" } else { "differ" });
    Ok(b.expect(cmp.is_equal(), || cmp.witness(&ctx.tower)))
}

fn run_iso(ctx: &Context, b: &mut Builder, lhs: &Rep, rhs: &Rep) -> Result<()> {
    match brauer::iso_probable(&ctx.tower, &ctx.classes, lhs, rhs, ctx.iso_trials, ctx.seed, ctx.budgets.hom) {
        Ok(IsoVerdict::Iso) => b.detail("iso", "ISO"),
        Ok(IsoVerdict::Inconclusive) => {
            b.detail("iso", "INCONCLUSIVE");
            b.expect(false, || json!({"iso": format!("no invertible intertwiner in {} samples", ctx.iso_trials)}));
        }
        Ok(IsoVerdict::NotIso(why)) => {
            b.detail("iso", "NOT-ISO");
            b.expect(false, || json!({"iso": why}));
        }
        Err(e) if is_budget(&e) => b.detail("iso", format!("SKIPPED: {e}")),
        Err(e) => return Err(e),
    }
    Ok(())
}

fn check_range(r: i64, bound: u64, what: &str) -> Result<()> {
    if r < 0 || r as u64 >= bound {
        return Err(Error::Config(format!("{what} needs 0 <= r < {bound}, got {r}")));
    }
    Ok(())
}

/// The Mackey decomposition of the restriction, for `χ_{r,s}` (Borel) or
/// `ω_{2f}^r` (torus).
pub fn check_e(ctx: &Context, small: SubgroupSpec, r: i64, s: i64) -> Result<CheckReport> {
    let q = ctx.q();
    let (id, params) = if small == SubgroupSpec::BQ {
        ("E1", json!({"p": ctx.p(), "f": ctx.f(), "r": r, "s": s}))
    } else {
        ("E5", ctx.pfr(r))
    };
    if small == SubgroupSpec::BQ {
        check_range(r, q - 1, "E1")?;
        check_range(s, q - 1, "E1")?;
    } else {
        check_range(r, q * q - 1, "E5")?;
    }
    guarded(id, params, |b| {
        let (lhs, chi) = if small == SubgroupSpec::BQ {
            (principal_series_lhs(ctx, r, s)?, CharacterSpec::chi_rs(r, s, SubgroupSpec::BQ))
        } else {
            (torus_lhs(ctx, r)?, CharacterSpec::omega_2f(r))
        };
        let rhs = mackey_rhs(ctx, small, &chi)?;
        b.detail("rhs", rhs.name());
        if compare_sides(ctx, b, &lhs, &rhs)? {
            run_iso(ctx, b, &lhs, &rhs)?;
        }
        Ok(())
    })
}

pub fn check_t1(ctx: &Context, r: i64, part: u8) -> Result<CheckReport> {
    check_range(r, ctx.q() - 1, "T1")?;
    let id = format!("T1.{part}");
    guarded(&id, json!({"p": ctx.p(), "f": ctx.f(), "r": r, "part": part}), |b| {
        let pre = check_e(ctx, SubgroupSpec::BQ, r, 0)?;
        b.detail("prerequisite", json!({"E1": pre.status.as_str()}));
        if !b.expect(pre.status == Status::Pass, || json!({"prerequisite": "E1", "status": pre.status.as_str()})) {
            return Ok(());
        }
        let lhs = principal_series_lhs(ctx, r, 0)?;
        let rhs = t1_rhs(ctx, r, part)?;
        b.detail("rhs", rhs.name());
        if compare_sides(ctx, b, &lhs, &rhs)? {
            run_iso(ctx, b, &lhs, &rhs)?;
        }
        Ok(())
    })
}

pub fn check_t2(ctx: &Context, r: i64, part: u8) -> Result<CheckReport> {
    let q = ctx.q();
    check_range(r, q * q - 1, "T2")?;
    let id = format!("T2.{part}");
    guarded(&id, json!({"p": ctx.p(), "f": ctx.f(), "r": r, "part": part}), |b| {
        let pre = check_e(ctx, SubgroupSpec::TQ, r, 0)?;
        b.detail("prerequisite", json!({"E5": pre.status.as_str()}));
        if !b.expect(pre.status == Status::Pass, || json!({"prerequisite": "E5", "status": pre.status.as_str()})) {
            return Ok(());
        }
        let lhs = torus_lhs(ctx, r)?;
        let rhs = t2_rhs(ctx, r, part)?;
        b.detail("rhs", rhs.name());
        compare_sides(ctx, b, &lhs, &rhs)?;
        let src = fp_induce(ctx, SubgroupSpec::TP, CharacterSpec::omega_2(r))?;
        match brauer::hom_dim(&ctx.tower, &src, &lhs, ctx.budgets.hom) {
            Ok(h) => {
                b.detail("embedding_hom_dim", h);
                b.expect(h >= 1, || json!({"embedding_hom_dim": h}));
            }
            Err(e) if is_budget(&e) => b.detail("embedding_hom_dim", format!("SKIPPED: {e}")),
            Err(e) => return Err(e),
        }
        Ok(())
    })
}

/// `ind_{S_p}^{G_p} χ ≅ ind_{B_p}^{G_p} χ ⊗ St̄` for every character of `S_p`.
pub fn check_gj(ctx: &Context) -> Result<CheckReport> {
    guarded("GJ", json!({"p": ctx.p()}), |b| {
        let t = &ctx.tower;
        let chars = reps::split_torus_characters(t);
        b.detail("characters", chars.len());
        let mut iso = 0;
        for chi in &chars {
            let CharacterSpec::ChiRS { r, s, .. } = *chi else { unreachable!() };
            let lhs = fp_induce(ctx, SubgroupSpec::SP, chi.clone())?;
            let rhs = reps::tensor(
                fp_induce(ctx, SubgroupSpec::BP, CharacterSpec::chi_rs(r, s, SubgroupSpec::BP))?,
                reps::steinberg_model(t),
            )?;
            let mut sub = Builder::new("GJ", Value::Null);
            if !compare_sides(ctx, &mut sub, &lhs, &rhs)? {
                b.expect(false, || json!({"character": chi.to_string(), "witness": sub.witness}));
                break;
            }
            run_iso(ctx, &mut sub, &lhs, &rhs)?;
            if sub.failed() {
                b.expect(false, || json!({"character": chi.to_string(), "witness": sub.witness}));
                break;
            }
            if sub.details.get("iso") == Some(&json!("ISO")) {
                iso += 1;
            }
        }
        b.detail("iso_certified", iso);
        b.detail("dim", (ctx.p() + 1) * ctx.p());
        if iso < chars.len() && !b.failed() {
            b.skip("iso_probable over budget for some characters");
        }
        Ok(())
    })
}

/// `ind_{Z_p}^{S_p}` and `ind_{Z_p}^{T_p}` of `χ_r|_{Z_p}` split into the
/// expected distinct characters.
pub fn check_splittings(ctx: &Context, r: i64) -> Result<CheckReport> {
    guarded("SPLIT", json!({"p": ctx.p(), "r": r}), |b| {
        let t = &ctx.tower;
        let p = ctx.p() as i64;
        let budget = ctx.budgets.enumeration;
        let z_chi = CharacterSpec::chi_rs(r, 0, SubgroupSpec::ZP);
        let zp = grp::enumerate(t, SubgroupSpec::ZP, budget)?;
        for (into, cands, want) in [
            (
                SubgroupSpec::SP,
                reps::split_torus_characters(t),
                (1..p).map(|i| CharacterSpec::chi_rs(i, r - i, SubgroupSpec::SP)).collect::<Vec<_>>(),
            ),
            (
                SubgroupSpec::TP,
                reps::aniso_torus_characters(t),
                (0..=p).map(|i| CharacterSpec::omega_2(r + i * (p - 1))).collect(),
            ),
        ] {
            let elems = grp::enumerate(t, into, budget)?;
            let v = reps::induce(t, SubgroupSpec::ZP, z_chi.clone(), into, budget)?;
            let (found, total) = reps::diagonalize(t, &v, &cands, budget)?;
            let names: Vec<String> = found.iter().map(|(i, m)| format!("{}x{}", m, cands[*i])).collect();
            b.detail(&into.name(), &names);
            b.expect(total == v.dim() && found.len() == want.len() && found.iter().all(|(_, m)| *m == 1), || {
                json!({"group": into.name(), "found": names})
            });
            let mut seen = BTreeSet::new();
            for w in &want {
                b.expect(reps::same_character(t, &zp, w, &z_chi), || {
                    json!({"restriction_to_Zp_differs": w.to_string()})
                });
                let hit = found
                    .iter()
                    .position(|(i, _)| reps::same_character(t, &elems, &cands[*i], w));
                b.expect(hit.is_some(), || json!({"missing": w.to_string(), "group": into.name()}));
                if let Some(h) = hit {
                    b.expect(seen.insert(h), || json!({"not_distinct": w.to_string()}));
                }
            }
        }
        Ok(())
    })
}

/// Which values of `r` a sweep covers.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RPolicy {
    All,
    Sample,
    /// `All` at `(3,1)` and `(3,2)`, `Sample` elsewhere.
    Auto,
    Explicit(Vec<i64>),
}

/// Values of `r` in `0..bound` under the policy. Samples always contain
/// `0`, `1`, `bound - 1`; for the torus range they also contain multiples of
/// `q + 1` and reach at least eight values.
pub fn r_values(ctx: &Context, policy: &RPolicy, bound: u64, torus: bool) -> Vec<i64> {
    let (p, f, q) = (ctx.p(), ctx.f(), ctx.q() as i64);
    let policy = match policy {
        RPolicy::Auto if p == 3 && f <= 2 => &RPolicy::All,
        RPolicy::Auto => &RPolicy::Sample,
        other => other,
    };
    let b = bound as i64;
    let mut v: BTreeSet<i64> = BTreeSet::new();
    match policy {
        RPolicy::All => v.extend(0..b),
        RPolicy::Explicit(rs) => v.extend(rs.iter().copied().filter(|r| (0..b).contains(r))),
        _ => {
            let mut rng = ChaCha8Rng::seed_from_u64(ctx.seed ^ bound);
            v.extend([0, 1, b - 1].into_iter().filter(|r| (0..b).contains(r)));
            if torus {
                v.extend([q - 1, q + 1, 2 * (q + 1)].into_iter().filter(|r| (0..b).contains(r)));
                let target = 8.min(b as usize);
                while v.len() < target {
                    v.insert(rng.gen_range(0..b));
                }
            } else if b > 0 {
                v.insert(rng.gen_range(0..b));
            }
        }
    }
    v.into_iter().collect()
}

pub const CHECK_IDS: [&str; 19] = [
    "L1", "L2", "L3", "L4", "L5", "P1", "P2", "SUMMARY", "R6", "MACKEY.B", "MACKEY.T", "E1", "E5",
    "T1.1", "T1.2", "T2.1", "T2.2", "GJ", "SPLIT",
];

/// One unit of work in a suite.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Task {
    pub id: &'static str,
    pub r: Option<i64>,
}

pub fn plan(ctx: &Context, ids: &[&'static str], policy: &RPolicy) -> Vec<Task> {
    let q = ctx.q();
    let mut tasks = Vec::new();
    for &id in ids {
        let rs = match id {
            "E1" | "T1.1" | "T1.2" | "SPLIT" => Some(r_values(ctx, policy, q - 1, false)),
            "E5" | "T2.1" | "T2.2" => Some(r_values(ctx, policy, q * q - 1, true)),
            _ => None,
        };
        match rs {
            Some(rs) => tasks.extend(rs.into_iter().map(|r| Task { id, r: Some(r) })),
            None => tasks.push(Task { id, r: None }),
        }
    }
    tasks
}

pub fn run_task(ctx: &Context, task: &Task) -> Result<CheckReport> {
    let r = task.r.unwrap_or(0);
    match task.id {
        "L1" => check_l1(ctx),
        "L2" => check_l2(ctx),
        "L3" => check_l3(ctx),
        "L4" => check_l4(ctx),
        "L5" => check_l5(ctx),
        "P1" => check_p1(ctx),
        "P2" => check_p2(ctx),
        "SUMMARY" => check_summary(ctx),
        "R6" => check_r6(ctx),
        "MACKEY.B" => check_mackey(ctx, SubgroupSpec::BQ),
        "MACKEY.T" => check_mackey(ctx, SubgroupSpec::TQ),
        "E1" => check_e(ctx, SubgroupSpec::BQ, r, 0),
        "E5" => check_e(ctx, SubgroupSpec::TQ, r, 0),
        "T1.1" => check_t1(ctx, r, 1),
        "T1.2" => check_t1(ctx, r, 2),
        "T2.1" => check_t2(ctx, r, 1),
        "T2.2" => check_t2(ctx, r, 2),
        "GJ" => check_gj(ctx),
        "SPLIT" => check_splittings(ctx, r),
        other => Err(Error::Config(format!("unknown check id {other}"))),
    }
}

/// Runs the tasks, in parallel unless `sequential`; reports keep task order.
pub fn run_tasks(ctx: &Context, tasks: &[Task], sequential: bool) -> Result<Vec<CheckReport>> {
    use rayon::prelude::*;
    if sequential {
        tasks.iter().map(|t| run_task(ctx, t)).collect()
    } else {
        tasks.par_iter().map(|t| run_task(ctx, t)).collect()
    }
}

#[derive(Clone, Copy, Debug, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

pub fn summarize(reports: &[CheckReport]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        match r.status {
            Status::Pass => s.pass += 1,
            Status::Fail => s.fail += 1,
            Status::Skipped => s.skipped += 1,
        }
    }
    s
}
