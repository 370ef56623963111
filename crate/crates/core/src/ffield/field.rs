use std::fmt;

use serde::{Deserialize, Serialize};

use super::poly;
use crate::error::{Error, Result};

/// Largest field for which log/antilog tables are built.
pub const TABLE_LIMIT: u64 = 1 << 24;

/// An element of some [`Field`], packed as a base-`p` integer whose most
/// significant digit is the constant coefficient. Numeric order on the packed
/// value is therefore lexicographic order on `(c_0, c_1, ..., c_{d-1})`.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Elem(pub(crate) u32);

impl Elem {
    pub const ZERO: Elem = Elem(0);

    pub fn index(self) -> u32 {
        self.0
    }

    pub fn is_zero(self) -> bool {
        self.0 == 0
    }
}

impl fmt::Debug for Elem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// `F_p[x] / (m(x))` for a monic irreducible `m`, with log tables.
#[derive(Clone)]
pub struct Field {
    p: u32,
    degree: u32,
    size: u32,
    modulus: Vec<u32>,
    place: Vec<u32>,
    exp: Vec<u32>,
    log: Vec<u32>,
    generator: Elem,
}

impl fmt::Debug for Field {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Field")
            .field("p", &self.p)
            .field("degree", &self.degree)
            .field("modulus", &self.modulus)
            .finish()
    }
}

impl Field {
    /// Builds the field from a monic irreducible `modulus` (length `degree + 1`).
    pub fn new(p: u32, modulus: Vec<u32>) -> Result<Self> {
        let degree = (modulus.len() - 1) as u32;
        let size64 = (p as u64).pow(degree);
        if size64 > TABLE_LIMIT {
            return Err(Error::FieldTooLarge {
                size: size64,
                limit: TABLE_LIMIT,
            });
        }
        if !poly::is_irreducible(&modulus, p) {
            return Err(Error::Internal(format!(
                "modulus {modulus:?} is reducible over F_{p}"
            )));
        }
        let size = size64 as u32;
        let place = (0..degree).map(|i| p.pow(degree - 1 - i)).collect();
        let mut field = Field {
            p,
            degree,
            size,
            modulus,
            place,
            exp: Vec::new(),
            log: Vec::new(),
            generator: Elem::ZERO,
        };
        field.build_tables();
        Ok(field)
    }

    fn build_tables(&mut self) {
        let order = (self.size - 1) as u64;
        let factors = poly::prime_factors(order);
        let generator = (1..self.size)
            .map(Elem)
            .find(|&g| {
                factors
                    .iter()
                    .all(|&l| self.pow_slow(g, order / l) != self.one())
            })
            .expect("multiplicative group of a finite field is cyclic");
        let mut exp = Vec::with_capacity(order as usize);
        let mut log = vec![u32::MAX; self.size as usize];
        let mut x = self.one();
        for k in 0..order as u32 {
            exp.push(x.0);
            log[x.0 as usize] = k;
            x = self.mul_slow(x, generator);
        }
        debug_assert_eq!(x, self.one());
        self.exp = exp;
        self.log = log;
        self.generator = generator;
    }

    fn mul_slow(&self, a: Elem, b: Elem) -> Elem {
        let prod = poly::mul(&self.coeffs(a), &self.coeffs(b), self.p);
        self.from_coeffs(&poly::rem(&prod, &self.modulus, self.p))
    }

    fn pow_slow(&self, a: Elem, mut e: u64) -> Elem {
        let mut r = self.one();
        let mut b = a;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul_slow(r, b);
            }
            b = self.mul_slow(b, b);
            e >>= 1;
        }
        r
    }

    pub fn characteristic(&self) -> u32 {
        self.p
    }

    pub fn degree(&self) -> u32 {
        self.degree
    }

    pub fn size(&self) -> u32 {
        self.size
    }

    /// Multiplicative group order, `size - 1`.
    pub fn unit_order(&self) -> u32 {
        self.size - 1
    }

    /// Defining polynomial, little-endian with the leading 1 included.
    pub fn modulus(&self) -> &[u32] {
        &self.modulus
    }

    pub fn generator(&self) -> Elem {
        self.generator
    }

    pub fn zero(&self) -> Elem {
        Elem::ZERO
    }

    pub fn one(&self) -> Elem {
        Elem(self.place[0])
    }

    /// Coefficients `(c_0, ..., c_{d-1})` in the polynomial basis `1, a, a^2, ...`.
    pub fn coeffs(&self, x: Elem) -> Vec<u32> {
        self.place.iter().map(|&w| (x.0 / w) % self.p).collect()
    }

    /// Packs a coefficient vector; missing high coefficients are zero and
    /// entries are reduced mod `p`. Longer inputs are reduced by the modulus.
    pub fn from_coeffs(&self, c: &[u32]) -> Elem {
        let reduced;
        let c = if c.len() > self.degree as usize {
            let v: Vec<u32> = c.iter().map(|x| x % self.p).collect();
            reduced = poly::rem(&v, &self.modulus, self.p);
            &reduced[..]
        } else {
            c
        };
        Elem(
            c.iter()
                .zip(&self.place)
                .map(|(&ci, &w)| (ci % self.p) * w)
                .sum(),
        )
    }

    /// Image of an integer under `Z -> F_p -> self`.
    pub fn from_int(&self, n: i64) -> Elem {
        let r = n.rem_euclid(self.p as i64) as u32;
        Elem(r * self.place[0])
    }

    /// Inverse of [`Field::from_int`] on the prime subfield.
    pub fn to_int(&self, x: Elem) -> Option<u32> {
        let w = self.place[0];
        x.0.is_multiple_of(w).then_some(x.0 / w)
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> + '_ {
        (0..self.size).map(Elem)
    }

    pub fn add(&self, a: Elem, b: Elem) -> Elem {
        let p = self.p;
        let (mut x, mut y, mut r, mut w) = (a.0, b.0, 0u32, 1u32);
        for _ in 0..self.degree {
            let s = x % p + y % p;
            r += if s >= p { s - p } else { s } * w;
            x /= p;
            y /= p;
            w *= p;
        }
        Elem(r)
    }

    pub fn neg(&self, a: Elem) -> Elem {
        let p = self.p;
        let (mut x, mut r, mut w) = (a.0, 0u32, 1u32);
        for _ in 0..self.degree {
            let d = x % p;
            r += if d == 0 { 0 } else { p - d } * w;
            x /= p;
            w *= p;
        }
        Elem(r)
    }

    pub fn sub(&self, a: Elem, b: Elem) -> Elem {
        self.add(a, self.neg(b))
    }

    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        if a.0 == 0 || b.0 == 0 {
            return Elem::ZERO;
        }
        let n = self.size - 1;
        let s = self.log[a.0 as usize] as u64 + self.log[b.0 as usize] as u64;
        Elem(self.exp[(s % n as u64) as usize])
    }

    /// # Panics
    /// On zero.
    pub fn inv(&self, a: Elem) -> Elem {
        assert!(!a.is_zero(), "inverse of zero");
        let n = self.size - 1;
        let l = self.log[a.0 as usize];
        Elem(self.exp[((n - l) % n) as usize])
    }

    pub fn div(&self, a: Elem, b: Elem) -> Elem {
        self.mul(a, self.inv(b))
    }

    /// `a^e` for any integer exponent; `0^0 = 1`, negative powers of zero panic.
    pub fn pow(&self, a: Elem, e: i64) -> Elem {
        if a.is_zero() {
            assert!(e >= 0, "negative power of zero");
            return if e == 0 { self.one() } else { Elem::ZERO };
        }
        let n = (self.size - 1) as i64;
        let l = self.log[a.0 as usize] as i64;
        let k = ((l % n) * e.rem_euclid(n)).rem_euclid(n);
        Elem(self.exp[k as usize])
    }

    /// Discrete logarithm to the base [`Field::generator`].
    pub fn log(&self, a: Elem) -> Option<u32> {
        (!a.is_zero()).then(|| self.log[a.0 as usize])
    }

    pub fn exp(&self, k: u64) -> Elem {
        Elem(self.exp[(k % (self.size as u64 - 1)) as usize])
    }

    /// `x^(p^k)`.
    pub fn frobenius(&self, x: Elem, k: u32) -> Elem {
        if x.is_zero() {
            return x;
        }
        let n = (self.size - 1) as u64;
        let mut e = 1u64;
        for _ in 0..k % self.degree {
            e = e * self.p as u64 % n;
        }
        self.pow(x, e as i64)
    }

    /// Whether `x` lies in the unique subfield of degree `d` (`d` must divide the degree).
    pub fn in_subfield(&self, x: Elem, d: u32) -> bool {
        debug_assert_eq!(self.degree % d, 0);
        match self.log(x) {
            None => true,
            Some(l) => {
                let step = (self.size - 1) / (self.p.pow(d) - 1);
                l % step == 0
            }
        }
    }

    /// Elements of the degree-`d` subfield, zero first, then by increasing log.
    pub fn subfield_elements(&self, d: u32) -> Vec<Elem> {
        let sub_order = self.p.pow(d) - 1;
        let step = (self.size - 1) / sub_order;
        std::iter::once(Elem::ZERO)
            .chain((0..sub_order).map(|k| Elem(self.exp[(k * step) as usize])))
            .collect()
    }

    pub fn is_square(&self, x: Elem) -> bool {
        match self.log(x) {
            None => true,
            Some(l) => l % 2 == 0,
        }
    }

    /// Roots of `x^2 = a` in this field, in increasing order.
    pub fn square_roots(&self, a: Elem) -> Vec<Elem> {
        if a.is_zero() {
            return vec![Elem::ZERO];
        }
        let l = self.log[a.0 as usize];
        if l % 2 == 1 {
            return Vec::new();
        }
        let r = Elem(self.exp[(l / 2) as usize]);
        let mut roots = vec![r, self.neg(r)];
        roots.sort();
        roots
    }

    /// Evaluates a polynomial with coefficients in `self` at `x`.
    pub fn eval(&self, coeffs: &[Elem], x: Elem) -> Elem {
        coeffs
            .iter()
            .rev()
            .fold(Elem::ZERO, |acc, &c| self.add(self.mul(acc, x), c))
    }
}
