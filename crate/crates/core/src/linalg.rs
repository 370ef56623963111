//! Dense and sparse linear algebra over a single finite field.

use std::collections::HashMap;

use crate::ffield::{Elem, Field};

/// Polynomials over a field, little-endian, not necessarily trimmed.
pub mod upoly {
    use super::*;

    pub fn trim(mut v: Vec<Elem>) -> Vec<Elem> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }

    pub fn mul(k: &Field, a: &[Elem], b: &[Elem]) -> Vec<Elem> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut out = vec![Elem::ZERO; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                out[i + j] = k.add(out[i + j], k.mul(x, y));
            }
        }
        out
    }

    pub fn pow(k: &Field, a: &[Elem], mut e: u64) -> Vec<Elem> {
        let mut r = vec![k.one()];
        let mut b = a.to_vec();
        while e > 0 {
            if e & 1 == 1 {
                r = mul(k, &r, &b);
            }
            e >>= 1;
            if e > 0 {
                b = mul(k, &b, &b);
            }
        }
        r
    }

    /// `x^l - c`.
    pub fn binomial(k: &Field, l: usize, c: Elem) -> Vec<Elem> {
        let mut v = vec![Elem::ZERO; l + 1];
        v[0] = k.neg(c);
        v[l] = k.add(v[l], k.one());
        v
    }

    pub fn eval(k: &Field, a: &[Elem], x: Elem) -> Elem {
        k.eval(a, x)
    }
}

/// Row-major dense matrix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<Elem>,
}

impl Matrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![Elem::ZERO; rows * cols],
        }
    }

    pub fn identity(k: &Field, n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, k.one());
        }
        m
    }

    /// The matrix sending `e_j` to `scalars[j] * e_{perm[j]}`.
    pub fn monomial(perm: &[u32], scalars: &[Elem]) -> Self {
        let n = perm.len();
        let mut m = Self::zeros(n, n);
        for j in 0..n {
            m.set(perm[j] as usize, j, scalars[j]);
        }
        m
    }

    pub fn get(&self, i: usize, j: usize) -> Elem {
        self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: Elem) {
        self.data[i * self.cols + j] = v;
    }

    pub fn mul(&self, rhs: &Matrix, k: &Field) -> Matrix {
        assert_eq!(self.cols, rhs.rows);
        let mut out = Matrix::zeros(self.rows, rhs.cols);
        for i in 0..self.rows {
            for l in 0..self.cols {
                let x = self.get(i, l);
                if x.is_zero() {
                    continue;
                }
                for j in 0..rhs.cols {
                    let y = rhs.get(l, j);
                    if !y.is_zero() {
                        let idx = i * out.cols + j;
                        out.data[idx] = k.add(out.data[idx], k.mul(x, y));
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, v: &[Elem], k: &Field) -> Vec<Elem> {
        (0..self.rows)
            .map(|i| {
                (0..self.cols).fold(Elem::ZERO, |acc, j| k.add(acc, k.mul(self.get(i, j), v[j])))
            })
            .collect()
    }

    pub fn kron(&self, rhs: &Matrix, k: &Field) -> Matrix {
        let (r, c) = (self.rows * rhs.rows, self.cols * rhs.cols);
        let mut out = Matrix::zeros(r, c);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let x = self.get(i, j);
                if x.is_zero() {
                    continue;
                }
                for u in 0..rhs.rows {
                    for v in 0..rhs.cols {
                        out.set(i * rhs.rows + u, j * rhs.cols + v, k.mul(x, rhs.get(u, v)));
                    }
                }
            }
        }
        out
    }

    /// Block-diagonal matrix of the given blocks.
    pub fn block_diag(blocks: &[&Matrix]) -> Matrix {
        let n: usize = blocks.iter().map(|b| b.rows).sum();
        let m: usize = blocks.iter().map(|b| b.cols).sum();
        let mut out = Matrix::zeros(n, m);
        let (mut r0, mut c0) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    out.set(r0 + i, c0 + j, b.get(i, j));
                }
            }
            r0 += b.rows;
            c0 += b.cols;
        }
        out
    }

    pub fn rank(&self, k: &Field) -> usize {
        let mut e = Echelon::new(self.cols);
        for i in 0..self.rows {
            e.insert(self.data[i * self.cols..(i + 1) * self.cols].to_vec(), k);
        }
        e.rank()
    }

    pub fn is_invertible(&self, k: &Field) -> bool {
        self.rows == self.cols && self.rank(k) == self.rows
    }

    pub fn det(&self, k: &Field) -> Elem {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut a = self.clone();
        let mut det = k.one();
        for c in 0..n {
            let Some(piv) = (c..n).find(|&r| !a.get(r, c).is_zero()) else {
                return Elem::ZERO;
            };
            if piv != c {
                for j in 0..n {
                    a.data.swap(piv * n + j, c * n + j);
                }
                det = k.neg(det);
            }
            let pv = a.get(c, c);
            det = k.mul(det, pv);
            let inv = k.inv(pv);
            for r in c + 1..n {
                let u = k.mul(a.get(r, c), inv);
                if u.is_zero() {
                    continue;
                }
                for j in c..n {
                    let v = k.sub(a.get(r, j), k.mul(u, a.get(c, j)));
                    a.set(r, j, v);
                }
            }
        }
        det
    }

    /// Characteristic polynomial `det(xI - A)`, monic, via reduction to
    /// upper Hessenberg form.
    pub fn charpoly(&self, k: &Field) -> Vec<Elem> {
        assert_eq!(self.rows, self.cols);
        let n = self.rows;
        let mut h = self.clone();
        for j in 0..n.saturating_sub(2) {
            let Some(piv) = (j + 1..n).find(|&i| !h.get(i, j).is_zero()) else {
                continue;
            };
            if piv != j + 1 {
                for c in 0..n {
                    h.data.swap(piv * n + c, (j + 1) * n + c);
                }
                for r in 0..n {
                    h.data.swap(r * n + piv, r * n + j + 1);
                }
            }
            let inv = k.inv(h.get(j + 1, j));
            for i in j + 2..n {
                let u = k.mul(h.get(i, j), inv);
                if u.is_zero() {
                    continue;
                }
                for c in 0..n {
                    let v = k.sub(h.get(i, c), k.mul(u, h.get(j + 1, c)));
                    h.set(i, c, v);
                }
                for r in 0..n {
                    let v = k.add(h.get(r, j + 1), k.mul(u, h.get(r, i)));
                    h.set(r, j + 1, v);
                }
            }
        }
        let mut polys: Vec<Vec<Elem>> = vec![vec![k.one()]];
        for m in 1..=n {
            let mut pm = upoly::mul(k, &[k.neg(h.get(m - 1, m - 1)), k.one()], &polys[m - 1]);
            let mut prod = k.one();
            for i in 1..m {
                prod = k.mul(prod, h.get(m - i, m - i - 1));
                if prod.is_zero() {
                    break;
                }
                let c = k.mul(h.get(m - 1 - i, m - 1), prod);
                for (d, &a) in polys[m - 1 - i].iter().enumerate() {
                    pm[d] = k.sub(pm[d], k.mul(c, a));
                }
            }
            polys.push(pm);
        }
        polys.pop().unwrap()
    }
}

/// Incrementally maintained reduced row echelon form over `n` columns.
pub struct Echelon {
    n: usize,
    rows: Vec<(usize, Vec<Elem>)>,
}

impl Echelon {
    pub fn new(n: usize) -> Self {
        Echelon { n, rows: Vec::new() }
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Adds a row; returns whether the rank grew.
    pub fn insert(&mut self, mut v: Vec<Elem>, k: &Field) -> bool {
        if self.rows.len() == self.n {
            return false;
        }
        for (c, row) in &self.rows {
            let x = v[*c];
            if !x.is_zero() {
                for (t, &y) in v.iter_mut().zip(row) {
                    *t = k.sub(*t, k.mul(x, y));
                }
            }
        }
        let Some(c) = v.iter().position(|x| !x.is_zero()) else {
            return false;
        };
        let inv = k.inv(v[c]);
        v.iter_mut().for_each(|t| *t = k.mul(*t, inv));
        for (_, row) in &mut self.rows {
            let x = row[c];
            if !x.is_zero() {
                for (t, &y) in row.iter_mut().zip(&v) {
                    *t = k.sub(*t, k.mul(x, y));
                }
            }
        }
        self.rows.push((c, v));
        true
    }

    /// Basis of the vectors orthogonal to every inserted row, i.e. the
    /// solution space of the homogeneous system.
    pub fn nullspace(&self, k: &Field) -> Vec<Vec<Elem>> {
        let pivots: HashMap<usize, usize> =
            self.rows.iter().enumerate().map(|(i, (c, _))| (*c, i)).collect();
        (0..self.n)
            .filter(|c| !pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![Elem::ZERO; self.n];
                v[free] = k.one();
                for (c, row) in &self.rows {
                    v[*c] = k.neg(row[free]);
                }
                v
            })
            .collect()
    }
}

/// Sparse row in increasing column order, no explicit zeros.
pub type SparseRow = Vec<(usize, Elem)>;

/// Homogeneous sparse system solved by elimination with pivots on the
/// leading column.
pub struct SparseSystem {
    n: usize,
    pivots: HashMap<usize, SparseRow>,
}

fn axpy(k: &Field, row: &SparseRow, c: Elem, piv: &SparseRow) -> SparseRow {
    // row - c * piv
    let mut out = Vec::with_capacity(row.len() + piv.len());
    let (mut i, mut j) = (0, 0);
    while i < row.len() || j < piv.len() {
        let ci = row.get(i).map_or(usize::MAX, |e| e.0);
        let cj = piv.get(j).map_or(usize::MAX, |e| e.0);
        if ci < cj {
            out.push(row[i]);
            i += 1;
        } else if cj < ci {
            out.push((cj, k.neg(k.mul(c, piv[j].1))));
            j += 1;
        } else {
            let v = k.sub(row[i].1, k.mul(c, piv[j].1));
            if !v.is_zero() {
                out.push((ci, v));
            }
            i += 1;
            j += 1;
        }
    }
    out
}

impl SparseSystem {
    pub fn new(n: usize) -> Self {
        SparseSystem {
            n,
            pivots: HashMap::new(),
        }
    }

    pub fn unknowns(&self) -> usize {
        self.n
    }

    pub fn rank(&self) -> usize {
        self.pivots.len()
    }

    /// Accumulates duplicate columns, drops zeros, and eliminates.
    pub fn add_equation(&mut self, terms: impl IntoIterator<Item = (usize, Elem)>, k: &Field) {
        let mut acc: Vec<(usize, Elem)> = terms.into_iter().collect();
        acc.sort_by_key(|t| t.0);
        let mut row: SparseRow = Vec::with_capacity(acc.len());
        for (c, v) in acc {
            match row.last_mut() {
                Some(last) if last.0 == c => last.1 = k.add(last.1, v),
                _ => row.push((c, v)),
            }
        }
        row.retain(|t| !t.1.is_zero());
        while let Some(&(c, v)) = row.first() {
            match self.pivots.get(&c) {
                Some(piv) => row = axpy(k, &row, v, piv),
                None => {
                    let inv = k.inv(v);
                    row.iter_mut().for_each(|t| t.1 = k.mul(t.1, inv));
                    self.pivots.insert(c, row);
                    return;
                }
            }
        }
    }

    pub fn nullity(&self) -> usize {
        self.n - self.pivots.len()
    }

    /// Basis of the solution space, one vector per free column.
    pub fn nullspace(&self, k: &Field) -> Vec<Vec<Elem>> {
        let mut order: Vec<usize> = self.pivots.keys().copied().collect();
        order.sort_unstable_by(|a, b| b.cmp(a));
        (0..self.n)
            .filter(|c| !self.pivots.contains_key(c))
            .map(|free| {
                let mut v = vec![Elem::ZERO; self.n];
                v[free] = k.one();
                for &c in &order {
                    let row = &self.pivots[&c];
                    let s = row[1..]
                        .iter()
                        .fold(Elem::ZERO, |acc, &(j, a)| k.add(acc, k.mul(a, v[j])));
                    v[c] = k.neg(s);
                }
                v
            })
            .collect()
    }
}
