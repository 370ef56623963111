//! Dense polynomials over a prime field `F_p`, stored little-endian
//! (`v[i]` is the coefficient of `x^i`) with no trailing zeros.

pub(crate) fn is_prime(n: u32) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2u32;
    while d.saturating_mul(d) <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            out.push(d);
            while n.is_multiple_of(d) {
                n /= d;
            }
        }
        d += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

fn trim(mut v: Vec<u32>) -> Vec<u32> {
    while v.last() == Some(&0) {
        v.pop();
    }
    v
}

fn inv_mod(a: u32, p: u32) -> u32 {
    pow_mod(a, p as u64 - 2, p)
}

pub(crate) fn pow_mod(a: u32, mut e: u64, p: u32) -> u32 {
    let mut r = 1u64;
    let mut b = (a % p) as u64;
    let m = p as u64;
    while e > 0 {
        if e & 1 == 1 {
            r = r * b % m;
        }
        b = b * b % m;
        e >>= 1;
    }
    r as u32
}

pub(crate) fn mul(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x as u64 * y as u64) % p as u64;
        }
    }
    trim(out.into_iter().map(|c| c as u32).collect())
}

/// Remainder of `a` modulo a nonzero `m`.
pub(crate) fn rem(a: &[u32], m: &[u32], p: u32) -> Vec<u32> {
    let mut r = trim(a.to_vec());
    let dm = m.len() - 1;
    let lead_inv = inv_mod(m[dm], p);
    while r.len() > dm {
        let dr = r.len() - 1;
        let c = r[dr] as u64 * lead_inv as u64 % p as u64;
        for (i, &mi) in m.iter().enumerate() {
            let k = dr - dm + i;
            r[k] = ((r[k] as u64 + (p as u64 - c) * mi as u64) % p as u64) as u32;
        }
        r = trim(r);
    }
    r
}

pub(crate) fn sub(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let n = a.len().max(b.len());
    let v = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(v)
}

pub(crate) fn gcd(a: &[u32], b: &[u32], p: u32) -> Vec<u32> {
    let mut a = trim(a.to_vec());
    let mut b = trim(b.to_vec());
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    if let Some(&lead) = a.last() {
        let li = inv_mod(lead, p) as u64;
        a.iter_mut()
            .for_each(|c| *c = (*c as u64 * li % p as u64) as u32);
    }
    a
}

fn pow_poly_mod(base: &[u32], mut e: u64, m: &[u32], p: u32) -> Vec<u32> {
    let mut r = vec![1u32];
    let mut b = rem(base, m, p);
    while e > 0 {
        if e & 1 == 1 {
            r = rem(&mul(&r, &b, p), m, p);
        }
        b = rem(&mul(&b, &b, p), m, p);
        e >>= 1;
    }
    r
}

/// `x^(p^k) mod m`.
fn x_frobenius(k: u32, m: &[u32], p: u32) -> Vec<u32> {
    let mut h = rem(&[0, 1], m, p);
    for _ in 0..k {
        h = pow_poly_mod(&h, p as u64, m, p);
    }
    h
}

/// Rabin's irreducibility test for a monic `m` of degree `n >= 1`.
pub fn is_irreducible(m: &[u32], p: u32) -> bool {
    let m = trim(m.to_vec());
    if m.len() < 2 {
        return false;
    }
    let n = (m.len() - 1) as u32;
    if n == 1 {
        return true;
    }
    let x = [0u32, 1];
    if sub(&x_frobenius(n, &m, p), &x, p) != Vec::<u32>::new() {
        return false;
    }
    prime_factors(n as u64).into_iter().all(|l| {
        let h = sub(&x_frobenius(n / l as u32, &m, p), &x, p);
        gcd(&h, &m, p) == vec![1]
    })
}

/// Least monic irreducible polynomial of degree `d` over `F_p`, ordering by
/// the coefficient vector `(c_0, ..., c_{d-1})` lexicographically. The result
/// has length `d + 1` with a trailing 1.
pub fn least_irreducible(p: u32, d: u32) -> Vec<u32> {
    let total = (p as u64).pow(d);
    for n in 0..total {
        // c_0 is the most significant digit of n.
        let mut coeffs = vec![0u32; d as usize + 1];
        let mut rest = n;
        for i in (0..d as usize).rev() {
            coeffs[i] = (rest % p as u64) as u32;
            rest /= p as u64;
        }
        coeffs[d as usize] = 1;
        if is_irreducible(&coeffs, p) {
            return coeffs;
        }
    }
    unreachable!("irreducible polynomials of every degree exist over F_p")
}
