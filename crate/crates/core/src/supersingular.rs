//! Supersingular j-invariants for `p ≡ 1 (mod 12)` and one scalar-Frobenius
//! model per class.

use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigInt;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use thiserror::Error;

use crate::arith::prime::is_prime;
use crate::arith::{make_extension_field, ArithError, FieldElement, FieldRef, IntPolynomial};
use crate::curves::{
    curve_from_j, torsion_basis, twist_to_scalar_frobenius, velu_quotient, CurveError,
    EllipticCurve,
};

/// Default upper bound on `p` for the λ-scan, which costs `O(p³)` field
/// multiplications.
pub const DEFAULT_MAX_PRIME: u64 = 5000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SupersingularError {
    #[error("p = {0} must be a prime congruent to 1 mod 12")]
    BadPrime(u64),
    #[error("p = {p} exceeds the enumeration bound {bound}")]
    TooLarge { p: u64, bound: u64 },
    #[error("found {found} supersingular j-invariants, expected {expected}")]
    CountMismatch { found: usize, expected: usize },
    #[error("supersingular j-invariant {0} is 0 or 1728")]
    SpecialJ(String),
    #[error(transparent)]
    Curve(#[from] CurveError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// One isomorphism class: its j-invariant and a model over `F_{p²}` whose
/// `p²`-Frobenius is `−p`.
#[derive(Clone, Debug)]
pub struct SupersingularClass {
    pub j: FieldElement,
    pub model: EllipticCurve,
}

#[derive(Clone, Debug)]
pub struct SupersingularClassTable {
    p: u64,
    field: FieldRef,
    classes: Vec<SupersingularClass>,
}

impl SupersingularClassTable {
    pub fn p(&self) -> u64 {
        self.p
    }

    /// `F_{p²}`, the field of definition of every class model.
    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn classes(&self) -> &[SupersingularClass] {
        &self.classes
    }

    pub fn len(&self) -> usize {
        self.classes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty()
    }

    /// Index of the class with the given j-invariant.
    pub fn index_of(&self, j: &FieldElement) -> Option<usize> {
        self.classes.binary_search_by(|c| c.j.cmp(j)).ok()
    }
}

pub fn check_prime(p: u64) -> Result<(), SupersingularError> {
    if !is_prime(p) || p % 12 != 1 {
        return Err(SupersingularError::BadPrime(p));
    }
    Ok(())
}

fn binomial(n: u64, k: u64) -> BigInt {
    (0..k).fold(BigInt::from(1), |acc, i| acc * (n - i) / (i + 1))
}

/// `H_p(t) = Σ_{i=0}^{m} C(m,i)² tⁱ mod p`, `m = (p−1)/2`, coefficients in
/// `[0, p)`. `y² = x(x−1)(x−λ)` is supersingular iff `H_p(λ) = 0`.
pub fn hasse_witt_polynomial(p: u64) -> IntPolynomial {
    let m = (p - 1) / 2;
    let pb = BigInt::from(p);
    IntPolynomial::new(
        (0..=m)
            .map(|i| {
                let c = binomial(m, i);
                (&c * &c) % &pb
            })
            .collect(),
    )
}

/// `j(λ) = 256(λ²−λ+1)³ / (λ²(λ−1)²)`; `None` at λ ∈ {0, 1}.
pub fn legendre_j(lambda: &FieldElement) -> Option<FieldElement> {
    let f = lambda.field();
    let one = FieldElement::one(f);
    let l2 = lambda.square();
    let num = &l2 - lambda + &one;
    let den = &l2 * (lambda - &one).square();
    let inv = den.inv().ok()?;
    Some(num.square() * num * FieldElement::from_u64(f, 256) * inv)
}

/// Supersingular j-invariants over `F_{p²}` from the roots of `H_p`, sorted.
pub fn supersingular_j_invariants(p: u64) -> Result<Vec<FieldElement>, SupersingularError> {
    let f = make_extension_field(p, 2)?;
    let h: Vec<FieldElement> = hasse_witt_polynomial(p)
        .coeffs()
        .iter()
        .map(|c| FieldElement::from_u64(&f, c.try_into().expect("reduced mod p")))
        .collect();
    let js: BTreeSet<FieldElement> = (0..p * p)
        .into_par_iter()
        .filter_map(|n| {
            let lambda = FieldElement::from_index(&f, n);
            let val = h
                .iter()
                .rev()
                .fold(FieldElement::zero(&f), |acc, c| acc * &lambda + c);
            if val.is_zero() {
                legendre_j(&lambda)
            } else {
                None
            }
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect();
    Ok(js.into_iter().collect())
}

/// Enumerate the `(p−1)/12` classes, sorted by j, each with a normalized
/// model. `seed` drives the point sampling of the twist test only.
pub fn enumerate_supersingular(p: u64, seed: u64) -> Result<SupersingularClassTable, SupersingularError> {
    enumerate_supersingular_bounded(p, seed, DEFAULT_MAX_PRIME)
}

pub fn enumerate_supersingular_bounded(
    p: u64,
    seed: u64,
    bound: u64,
) -> Result<SupersingularClassTable, SupersingularError> {
    check_prime(p)?;
    if p > bound {
        return Err(SupersingularError::TooLarge { p, bound });
    }
    let field = make_extension_field(p, 2)?;
    let js = supersingular_j_invariants(p)?;
    let expected = ((p - 1) / 12) as usize;
    if js.len() != expected {
        return Err(SupersingularError::CountMismatch {
            found: js.len(),
            expected,
        });
    }
    let c1728 = FieldElement::from_u64(&field, 1728);
    let mut classes = Vec::with_capacity(js.len());
    for (i, j) in js.into_iter().enumerate() {
        if j.is_zero() || j == c1728 {
            return Err(SupersingularError::SpecialJ(format!("{j:?}")));
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ (0x5eed_0000 + i as u64));
        let model = twist_to_scalar_frobenius(&curve_from_j(&j)?, &mut rng)?;
        classes.push(SupersingularClass { j, model });
    }
    Ok(SupersingularClassTable { p, field, classes })
}

/// j-invariants reachable from `start` along 2-isogenies. The 2-isogeny
/// graph is connected, so this is the full supersingular set.
pub fn two_isogeny_closure(start: &FieldElement, seed: u64) -> Result<Vec<FieldElement>, SupersingularError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen: BTreeSet<FieldElement> = BTreeSet::new();
    let mut queue = VecDeque::new();
    seen.insert(start.clone());
    queue.push_back(start.clone());
    while let Some(j) = queue.pop_front() {
        let e = twist_to_scalar_frobenius(&curve_from_j(&j)?, &mut rng)?;
        let (gp, gq) = torsion_basis(&e, 2, &mut rng)?;
        for g in [gp.clone(), gq.clone(), e.add(&gp, &gq)] {
            let j2 = velu_quotient(&e, &g)?.codomain().j_invariant();
            if seen.insert(j2.clone()) {
                queue.push_back(j2);
            }
        }
    }
    Ok(seen.into_iter().collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curves::random_point;

    fn coeffs(p: u64) -> Vec<i64> {
        use num_traits::ToPrimitive;
        hasse_witt_polynomial(p)
            .coeffs()
            .iter()
            .map(|c| c.to_i64().unwrap())
            .collect()
    }

    #[test]
    fn hasse_witt_coefficients() {
        assert_eq!(coeffs(5), vec![1, 4, 1]);
        assert_eq!(coeffs(13), vec![1, 10, 4, 10, 4, 10, 1]);
        for p in [13u64, 37, 61] {
            assert_eq!(hasse_witt_polynomial(p).degree(), Some(((p - 1) / 2) as usize));
        }
    }

    #[test]
    fn rejects_bad_primes() {
        for p in [11u64, 17, 25, 2] {
            assert!(matches!(
                enumerate_supersingular(p, 0),
                Err(SupersingularError::BadPrime(_))
            ));
        }
    }

    #[test]
    fn unique_class_at_13_is_j_5() {
        let t = enumerate_supersingular(13, 0).unwrap();
        assert_eq!(t.len(), 1);
        assert_eq!(t.classes()[0].j.as_prime_field(), Some(5));
    }

    /// Brute-force oracle: j is supersingular iff one of the two quadratic
    /// twists of a model over F_{p²} has exactly (p+1)² points, counted here
    /// directly over F_{13²}.
    #[test]
    fn point_count_oracle_at_13() {
        let f = make_extension_field(13, 2).unwrap();
        let mut found = Vec::new();
        for j in FieldElement::enumerate(&f) {
            let Ok(e) = curve_from_j(&j) else { continue };
            let count = |e: &EllipticCurve| {
                1 + FieldElement::enumerate(&f)
                    .map(|x| {
                        let r = e.rhs(&x);
                        if r.is_zero() {
                            1
                        } else if r.is_square() {
                            2
                        } else {
                            0
                        }
                    })
                    .sum::<u64>()
            };
            let n = count(&e);
            let nt = count(&e.twist(&f.nonresidue()));
            if n == 196 || nt == 196 {
                found.push(j);
            }
        }
        let js = supersingular_j_invariants(13).unwrap();
        assert_eq!(found, js);
        assert_eq!(js.len(), 1);
    }

    #[test]
    fn class_counts() {
        for (p, n) in [(13u64, 1usize), (37, 3), (61, 5)] {
            let t = enumerate_supersingular(p, 0).unwrap();
            assert_eq!(t.len(), n);
            let mut js: Vec<_> = t.classes().iter().map(|c| c.j.clone()).collect();
            js.dedup();
            assert_eq!(js.len(), n);
        }
    }

    #[test]
    fn non_rational_classes_pair_under_frobenius() {
        for p in [37u64, 61, 73] {
            let t = enumerate_supersingular(p, 0).unwrap();
            for c in t.classes() {
                let conj = c.j.frobenius();
                assert!(t.index_of(&conj).is_some());
            }
        }
    }

    #[test]
    fn models_have_scalar_frobenius() {
        let t = enumerate_supersingular(37, 0).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for c in t.classes() {
            assert_eq!(c.model.j_invariant(), c.j);
            for _ in 0..5 {
                let pt = random_point(&c.model, &mut rng);
                assert!(c.model.mul_u64(38 * 38, &pt).is_infinity());
            }
        }
    }

    #[test]
    fn two_isogeny_bfs_agrees_with_scan() {
        for p in [13u64, 37, 61, 73, 97] {
            let t = enumerate_supersingular(p, 0).unwrap();
            let js: Vec<_> = t.classes().iter().map(|c| c.j.clone()).collect();
            assert_eq!(two_isogeny_closure(&js[0], 5).unwrap(), js);
        }
    }
}
