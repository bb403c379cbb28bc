//! Dense polynomials over a prime field, stored lowest degree first with
//! coefficients in `[0, p)`. Only what the extension-field code needs.

use super::prime::mod_inv;

pub(crate) fn trim(a: &mut Vec<u64>) {
    while a.last() == Some(&0) {
        a.pop();
    }
}

pub(crate) fn degree(a: &[u64]) -> Option<usize> {
    a.iter().rposition(|&c| c != 0)
}

pub(crate) fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let n = a.len().max(b.len());
    let mut out: Vec<u64> = (0..n)
        .map(|i| {
            let x = a.get(i).copied().unwrap_or(0);
            let y = b.get(i).copied().unwrap_or(0);
            (x + p - y) % p
        })
        .collect();
    trim(&mut out);
    out
}

pub(crate) fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u128; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] += (x * y) as u128;
        }
    }
    let mut out: Vec<u64> = out.into_iter().map(|c| (c % p as u128) as u64).collect();
    trim(&mut out);
    out
}

/// Quotient and remainder of `a` by nonzero `b`.
pub(crate) fn divmod(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
    let db = degree(b).expect("division by zero polynomial");
    let mut r: Vec<u64> = a.to_vec();
    trim(&mut r);
    if r.len() <= db {
        return (Vec::new(), r);
    }
    let lead_inv = mod_inv(b[db], p);
    let mut q = vec![0u64; r.len() - db];
    for i in (db..r.len()).rev() {
        let c = r[i] * lead_inv % p;
        if c == 0 {
            continue;
        }
        q[i - db] = c;
        for j in 0..=db {
            let t = c * b[j] % p;
            r[i - db + j] = (r[i - db + j] + p - t) % p;
        }
    }
    trim(&mut r);
    trim(&mut q);
    (q, r)
}

pub(crate) fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    divmod(a, b, p).1
}

pub(crate) fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
    let mut x = a.to_vec();
    let mut y = b.to_vec();
    trim(&mut x);
    trim(&mut y);
    while !y.is_empty() {
        let r = rem(&x, &y, p);
        x = y;
        y = r;
    }
    if let Some(d) = degree(&x) {
        let inv = mod_inv(x[d], p);
        for c in x.iter_mut() {
            *c = *c * inv % p;
        }
    }
    x
}

pub(crate) fn mulmod(a: &[u64], b: &[u64], m: &[u64], p: u64) -> Vec<u64> {
    rem(&mul(a, b, p), m, p)
}

pub(crate) fn powmod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
    let mut acc = vec![1u64];
    let mut b = rem(base, m, p);
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mulmod(&acc, &b, m, p);
        }
        exp >>= 1;
        if exp > 0 {
            b = mulmod(&b, &b, m, p);
        }
    }
    acc
}

/// Irreducibility of a monic polynomial of degree `d ≥ 1`: no factor of
/// degree `i ≤ d/2` (trivial `gcd(x^(p^i) - x, f)`), and `x^(p^d) ≡ x`.
pub(crate) fn is_irreducible(f: &[u64], p: u64) -> bool {
    let d = match degree(f) {
        Some(d) if d >= 1 => d,
        _ => return false,
    };
    if d == 1 {
        return true;
    }
    let x = vec![0u64, 1];
    let mut h = x.clone();
    for i in 1..=d {
        h = powmod(&h, p, f, p);
        if i <= d / 2 {
            let g = gcd(&sub(&h, &x, p), f, p);
            if degree(&g).unwrap_or(0) > 0 {
                return false;
            }
        }
    }
    let mut xr = rem(&x, f, p);
    trim(&mut xr);
    h == xr
}
