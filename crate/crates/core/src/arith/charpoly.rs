//! Characteristic polynomials of integer matrices, computed modulo several
//! 31-bit primes (Hessenberg reduction) and lifted by the Chinese remainder
//! theorem. Used where evaluation–interpolation of a polynomial matrix would
//! be too slow.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::prime::{is_prime, mod_inv};

fn reduce(x: i64, p: u64) -> u64 {
    x.rem_euclid(p as i64) as u64
}

/// `det(xI − A) mod p`, lowest degree first, via reduction to upper
/// Hessenberg form by similarity transforms.
pub fn charpoly_mod(a: &[Vec<i64>], p: u64) -> Vec<u64> {
    let n = a.len();
    let mut h: Vec<Vec<u64>> = a.iter().map(|r| r.iter().map(|&x| reduce(x, p)).collect()).collect();
    for m in 1..n.saturating_sub(1) {
        let Some(i) = (m..n).find(|&i| h[i][m - 1] != 0) else {
            continue;
        };
        if i != m {
            h.swap(i, m);
            for row in h.iter_mut() {
                row.swap(i, m);
            }
        }
        let inv = mod_inv(h[m][m - 1], p);
        for i in m + 1..n {
            let u = h[i][m - 1] * inv % p;
            if u == 0 {
                continue;
            }
            // row_i −= u·row_m ; col_m += u·col_i
            for j in 0..n {
                let t = u * h[m][j] % p;
                h[i][j] = (h[i][j] + p - t) % p;
            }
            for row in h.iter_mut() {
                row[m] = (row[m] + u * row[i]) % p;
            }
        }
    }
    // p_k = (x − h_kk) p_{k−1} − Σ_{i<k} h_ik (Π_{j=i+1..k} h_{j,j−1}) p_{i−1}
    let mut polys: Vec<Vec<u64>> = vec![vec![1]];
    for k in 0..n {
        let prev = &polys[k];
        let mut next = vec![0u64; k + 2];
        for (d, &c) in prev.iter().enumerate() {
            next[d + 1] = (next[d + 1] + c) % p;
            next[d] = (next[d] + p - c * h[k][k] % p) % p;
        }
        let mut prod = 1u64;
        for i in (0..k).rev() {
            prod = prod * h[i + 1][i] % p;
            if prod == 0 {
                break;
            }
            let coef = prod * h[i][k] % p;
            if coef == 0 {
                continue;
            }
            for (d, &c) in polys[i].iter().enumerate() {
                next[d] = (next[d] + p - coef * c % p) % p;
            }
        }
        polys.push(next);
    }
    polys.pop().unwrap()
}

/// Exact characteristic polynomial `det(xI − A)` of an integer matrix,
/// lowest degree first (monic, length `n + 1`).
pub fn charpoly(a: &[Vec<i64>]) -> Vec<BigInt> {
    let n = a.len();
    assert!(a.iter().all(|r| r.len() == n), "matrix must be square");
    // |coefficients| ≤ (1 + ρ)^n with ρ the max absolute row sum.
    let rho: u64 = a
        .iter()
        .map(|r| r.iter().map(|x| x.unsigned_abs()).sum::<u64>())
        .max()
        .unwrap_or(0);
    let bound = BigInt::from(1 + rho).pow(n as u32);
    let need = bound * 2u32 + 1u32;
    let mut primes = Vec::new();
    let mut modulus = BigInt::one();
    let mut cand = (1u64 << 31) - 1;
    while modulus < need {
        if is_prime(cand) {
            modulus *= cand;
            primes.push(cand);
        }
        cand -= 2;
    }
    let residues: Vec<Vec<u64>> = primes.par_iter().map(|&p| charpoly_mod(a, p)).collect();
    let mut acc: Vec<BigInt> = vec![BigInt::zero(); n + 1];
    let mut m = BigInt::one();
    for (&p, res) in primes.iter().zip(&residues) {
        let pb = BigInt::from(p);
        let m_mod_p = (&m % &pb).to_u64_digits().1.first().copied().unwrap_or(0);
        let m_inv = if m.is_one() { 1 } else { mod_inv(m_mod_p, p) };
        for (c, &r) in acc.iter_mut().zip(res) {
            // c ← c + m·((r − c)·m⁻¹ mod p)
            let c_mod = c.mod_floor(&pb).to_u64_digits().1.first().copied().unwrap_or(0);
            let delta = (r + p - c_mod) % p * m_inv % p;
            *c += &m * delta;
        }
        m *= p;
    }
    let half = &m >> 1;
    for c in acc.iter_mut() {
        *c = c.mod_floor(&m);
        if *c > half {
            *c -= &m;
        }
        debug_assert!(c.abs() <= half);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::det::bareiss_det;
    use proptest::prelude::*;

    fn det_shift(a: &[Vec<i64>], x: i64) -> BigInt {
        let n = a.len();
        let m = (0..n)
            .map(|i| {
                (0..n)
                    .map(|j| BigInt::from(if i == j { x - a[i][j] } else { -a[i][j] }))
                    .collect()
            })
            .collect();
        bareiss_det(m)
    }

    #[test]
    fn known_polynomials() {
        let c = charpoly(&[vec![6]]);
        assert_eq!(c, vec![BigInt::from(-6), BigInt::one()]);
        let c = charpoly(&[vec![0, 1], vec![1, 0]]);
        assert_eq!(c, vec![BigInt::from(-1), BigInt::zero(), BigInt::one()]);
        assert_eq!(charpoly(&[]), vec![BigInt::one()]);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(48))]
        #[test]
        fn matches_shifted_determinants(
            n in 1usize..=7,
            seed in prop::collection::vec(-9i64..=9, 49),
        ) {
            let a: Vec<Vec<i64>> = (0..n).map(|i| seed[i * 7..i * 7 + n].to_vec()).collect();
            let c = charpoly(&a);
            for x in -3i64..=3 {
                let val = c.iter().rev().fold(BigInt::zero(), |acc, k| acc * x + k);
                prop_assert_eq!(val, det_shift(&a, x));
            }
        }
    }
}
