//! The tower `F_p ⊂ F_{p^2}, F_q ⊂ F_{q^2}` with `q = p^f`.
//!
//! Every level is a separate [`Field`] with its own defining polynomial
//! (the lexicographically least monic irreducible of that degree). Each level
//! embeds into the top level `F_{q^2}` by sending its generator to the least
//! root of its defining polynomial there; every other embedding is induced
//! through the top level, so all embedding diagrams commute.

mod field;
pub mod poly;

use std::collections::{BTreeMap, HashMap};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
pub use field::{Elem, Field, TABLE_LIMIT};

/// Default upper bound on `f`.
pub const F_MAX: u32 = 4;

/// Named rungs of the tower. Several may coincide (`f = 1` or `f = 2`).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Level {
    Fp,
    Fp2,
    Fq,
    Fq2,
}

/// An element of one tower level, in that level's polynomial coordinates.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct FieldElem {
    degree: u32,
    value: Elem,
}

impl FieldElem {
    /// Degree over `F_p` of the level this element lives in.
    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn value(&self) -> Elem {
        self.value
    }
}

#[derive(Debug)]
pub struct FieldTower {
    p: u32,
    f: u32,
    fields: BTreeMap<u32, Field>,
    to_top: BTreeMap<u32, Vec<Elem>>,
    from_top: BTreeMap<u32, HashMap<Elem, Elem>>,
    eta: Elem,
    epsilon: Elem,
}

/// JSON description of a tower: `{ p, f, polys: {deg: [c0..cd]}, eta, epsilon }`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerDescription {
    pub p: u32,
    pub f: u32,
    pub polys: BTreeMap<u32, Vec<u32>>,
    pub eta: Vec<u32>,
    pub epsilon: Vec<u32>,
}

impl FieldTower {
    /// Builds the tower for an odd prime `p` and `1 <= f <= F_MAX`.
    pub fn build(p: u32, f: u32) -> Result<Self> {
        Self::build_with_max(p, f, F_MAX)
    }

    pub fn build_with_max(p: u32, f: u32, f_max: u32) -> Result<Self> {
        if p == 2 || !poly::is_prime(p) {
            return Err(Error::EvenOrCompositeCharacteristic(p));
        }
        if f == 0 || f > f_max {
            return Err(Error::DegreeOutOfRange { f, max: f_max });
        }
        let top_size = (p as u64).saturating_pow(2 * f);
        if top_size > TABLE_LIMIT {
            return Err(Error::FieldTooLarge {
                size: top_size,
                limit: TABLE_LIMIT,
            });
        }
        let mut fields = BTreeMap::new();
        for d in [1, 2, f, 2 * f] {
            if let std::collections::btree_map::Entry::Vacant(e) = fields.entry(d) {
                e.insert(Field::new(p, poly::least_irreducible(p, d))?);
            }
        }
        let top = &fields[&(2 * f)];

        let mut to_top = BTreeMap::new();
        let mut from_top = BTreeMap::new();
        for (&d, field) in &fields {
            let table: Vec<Elem> = if d == 2 * f {
                top.elements().collect()
            } else {
                let mod_in_top: Vec<Elem> =
                    field.modulus().iter().map(|&c| top.from_int(c as i64)).collect();
                let root = top
                    .elements()
                    .find(|&x| top.eval(&mod_in_top, x).is_zero())
                    .ok_or_else(|| Error::Internal(format!("no root of degree-{d} modulus")))?;
                let powers: Vec<Elem> = (0..d).map(|i| top.pow(root, i as i64)).collect();
                field
                    .elements()
                    .map(|x| {
                        field
                            .coeffs(x)
                            .iter()
                            .zip(&powers)
                            .fold(Elem::ZERO, |acc, (&c, &rp)| {
                                top.add(acc, top.mul(top.from_int(c as i64), rp))
                            })
                    })
                    .collect()
            };
            let inverse: HashMap<Elem, Elem> =
                table.iter().enumerate().map(|(i, &y)| (y, Elem(i as u32))).collect();
            to_top.insert(d, table);
            from_top.insert(d, inverse);
        }

        let mut tower = FieldTower {
            p,
            f,
            fields,
            to_top,
            from_top,
            eta: Elem::ZERO,
            epsilon: Elem::ZERO,
        };
        tower.eta = tower.find_eta();
        tower.epsilon = tower.find_epsilon_value();
        Ok(tower)
    }

    // Least element of F_{p^2} (own coordinates) outside F_p whose square is in F_p.
    fn find_eta(&self) -> Elem {
        let k = &self.fields[&2];
        k.elements()
            .find(|&x| !k.in_subfield(x, 1) && k.in_subfield(k.mul(x, x), 1))
            .expect("odd p has a non-square in F_p")
    }

    fn find_epsilon_value(&self) -> Elem {
        let top = self.top();
        if self.f % 2 == 1 {
            return self.to_top[&2][self.eta.0 as usize];
        }
        let fq = &self.fields[&self.f];
        let nonsquare = fq
            .elements()
            .find(|&x| !x.is_zero() && !fq.is_square(x))
            .expect("odd q has non-squares");
        let lifted = self.to_top[&self.f][nonsquare.0 as usize];
        top.square_roots(lifted)[0]
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    pub fn f(&self) -> u32 {
        self.f
    }

    pub fn q(&self) -> u32 {
        self.p.pow(self.f)
    }

    pub fn degree_of(&self, level: Level) -> u32 {
        match level {
            Level::Fp => 1,
            Level::Fp2 => 2,
            Level::Fq => self.f,
            Level::Fq2 => 2 * self.f,
        }
    }

    pub fn field(&self, level: Level) -> &Field {
        &self.fields[&self.degree_of(level)]
    }

    /// The ambient field `F_{q^2}` in which all group computations happen.
    pub fn top(&self) -> &Field {
        &self.fields[&(2 * self.f)]
    }

    pub fn levels(&self) -> impl Iterator<Item = (u32, &Field)> {
        self.fields.iter().map(|(&d, k)| (d, k))
    }

    pub fn elem(&self, level: Level, value: Elem) -> FieldElem {
        let degree = self.degree_of(level);
        debug_assert!(value.0 < self.fields[&degree].size());
        FieldElem { degree, value }
    }

    pub fn elem_from_coeffs(&self, level: Level, coeffs: &[u32]) -> FieldElem {
        let degree = self.degree_of(level);
        FieldElem {
            degree,
            value: self.fields[&degree].from_coeffs(coeffs),
        }
    }

    pub fn coeffs(&self, x: FieldElem) -> Vec<u32> {
        self.fields[&x.degree].coeffs(x.value)
    }

    /// `η ∈ F_{p^2} \ F_p` with `η^2 ∈ F_p`, in `F_{p^2}` coordinates.
    pub fn eta(&self) -> FieldElem {
        FieldElem {
            degree: 2,
            value: self.eta,
        }
    }

    /// `ε ∈ F_{q^2} \ F_q` with `ε^2 ∈ F_q`; equals the image of `η` when `f` is odd.
    pub fn epsilon(&self) -> FieldElem {
        FieldElem {
            degree: 2 * self.f,
            value: self.epsilon,
        }
    }

    /// `η` as an element of the top level.
    pub fn eta_top(&self) -> Elem {
        self.to_top[&2][self.eta.0 as usize]
    }

    pub fn epsilon_top(&self) -> Elem {
        self.epsilon
    }

    /// Image of `x` in the level of degree `target`.
    pub fn embed_to_degree(&self, x: FieldElem, target: u32) -> Result<FieldElem> {
        if !self.fields.contains_key(&target) || !target.is_multiple_of(x.degree) {
            return Err(Error::NoEmbedding {
                from: x.degree,
                to: target,
            });
        }
        let up = self.to_top[&x.degree][x.value.0 as usize];
        let value = *self.from_top[&target]
            .get(&up)
            .ok_or_else(|| Error::Internal("embedding image outside target level".into()))?;
        Ok(FieldElem {
            degree: target,
            value,
        })
    }

    pub fn embed(&self, x: FieldElem, target: Level) -> Result<FieldElem> {
        self.embed_to_degree(x, self.degree_of(target))
    }

    /// `x` as an element of `F_{q^2}`.
    pub fn lift(&self, x: FieldElem) -> Elem {
        self.to_top[&x.degree][x.value.0 as usize]
    }

    /// Preimage of a top-level element in `level`, if it lies in that subfield.
    pub fn descend(&self, x: Elem, level: Level) -> Result<FieldElem> {
        let degree = self.degree_of(level);
        self.from_top[&degree]
            .get(&x)
            .map(|&value| FieldElem { degree, value })
            .ok_or(Error::NotInSubfield(degree))
    }

    /// Whether a top-level element lies in the image of `level`.
    pub fn in_level(&self, x: Elem, level: Level) -> bool {
        self.top().in_subfield(x, self.degree_of(level))
    }

    /// Image of `level` inside `F_{q^2}`, sorted.
    pub fn level_elements(&self, level: Level) -> Vec<Elem> {
        let mut v = self.top().subfield_elements(self.degree_of(level));
        v.sort();
        v
    }

    /// `x^(p^k)` computed in `x`'s own level.
    pub fn frobenius(&self, x: FieldElem, k: u32) -> FieldElem {
        FieldElem {
            degree: x.degree,
            value: self.fields[&x.degree].frobenius(x.value, k),
        }
    }

    pub fn describe(&self) -> TowerDescription {
        TowerDescription {
            p: self.p,
            f: self.f,
            polys: self
                .fields
                .iter()
                .map(|(&d, k)| (d, k.modulus().to_vec()))
                .collect(),
            eta: self.coeffs(self.eta()),
            epsilon: self.coeffs(self.epsilon()),
        }
    }
}
