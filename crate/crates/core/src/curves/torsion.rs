//! Scalar-Frobenius models, random points, torsion bases and subgroup
//! signatures.
//!
//! On a model over `F_{p²}` whose `p²`-Frobenius is the scalar `−p`, the
//! `p^{2k}`-Frobenius is `(−p)^k`, so `E(F_{p^{2k}}) = E[m]` with
//! `m = |(−p)^k − 1|`. Every subgroup is then Galois-stable.

use std::collections::HashSet;

use num_bigint::BigUint;
use num_traits::Zero;
use rand::Rng;

use super::{CurveError, CurvePoint, EllipticCurve};
use crate::arith::FieldElement;

const BASIS_BUDGET: usize = 200;
const TWIST_SAMPLES: usize = 20;

/// `m = |(−p)^k − 1|`, the exponent of `E(F_{p^{2k}}) ≅ (Z/m)²`.
pub fn group_exponent_scalar_frobenius(p: u64, k: u32) -> BigUint {
    let pk = BigUint::from(p).pow(k);
    if k % 2 == 0 {
        pk - 1u32
    } else {
        pk + 1u32
    }
}

/// `#E(F_{p^{2k}}) = ((−p)^k − 1)²` on a scalar-Frobenius model.
pub fn group_order_scalar_frobenius(p: u64, k: u32) -> BigUint {
    let m = group_exponent_scalar_frobenius(p, k);
    &m * &m
}

/// Uniform-ish random affine point: random `x` until `x³ + ax + b` is a
/// square, then a random choice of sign for `y`.
pub fn random_point<R: Rng + ?Sized>(e: &EllipticCurve, rng: &mut R) -> CurvePoint {
    loop {
        let x = FieldElement::random(e.field(), rng);
        if let Some(y) = e.rhs(&x).sqrt() {
            let y = if rng.gen::<bool>() { -y } else { y };
            return CurvePoint::new(x, y);
        }
    }
}

fn annihilated_by<R: Rng + ?Sized>(e: &EllipticCurve, n: &BigUint, rng: &mut R) -> bool {
    (0..TWIST_SAMPLES).all(|_| e.mul(n, &random_point(e, rng)).is_infinity())
}

/// The quadratic twist of `e` (possibly `e` itself) over `F_{p²}` on which
/// the `p²`-Frobenius acts as `−p`, recognized by `(p+1)²` killing sampled
/// points.
pub fn twist_to_scalar_frobenius<R: Rng + ?Sized>(
    e: &EllipticCurve,
    rng: &mut R,
) -> Result<EllipticCurve, CurveError> {
    let f = e.field();
    assert_eq!(f.degree(), 2, "scalar-Frobenius models live over F_p^2");
    let p = f.characteristic();
    let n = group_order_scalar_frobenius(p, 1);
    if annihilated_by(e, &n, rng) {
        return Ok(e.clone());
    }
    let twisted = e.twist(&f.nonresidue());
    if annihilated_by(&twisted, &n, rng) {
        return Ok(twisted);
    }
    Err(CurveError::ScalarFrobeniusNotFound)
}

fn frobenius_p2(pt: &CurvePoint, p: u64) -> CurvePoint {
    match pt {
        CurvePoint::Infinity => CurvePoint::Infinity,
        CurvePoint::Affine { x, y } => CurvePoint::new(x.pow_u64(p * p), y.pow_u64(p * p)),
    }
}

/// A basis `(P, Q)` of `E[r]` over the field of `e`, which must be
/// `F_{p^{2k}}` with `r | (−p)^k − 1` and `e` a base change of a
/// scalar-Frobenius model. Independence is checked by listing `⟨P⟩`.
pub fn torsion_basis<R: Rng + ?Sized>(
    e: &EllipticCurve,
    r: u64,
    rng: &mut R,
) -> Result<(CurvePoint, CurvePoint), CurveError> {
    let f = e.field();
    let d = f.degree();
    let p = f.characteristic();
    let not_rational = CurveError::TorsionNotRational { r, degree: d };
    if d % 2 != 0 {
        return Err(not_rational);
    }
    let m = group_exponent_scalar_frobenius(p, (d / 2) as u32);
    let rb = BigUint::from(r);
    if !(&m % &rb).is_zero() {
        return Err(not_rational);
    }
    let mut cof = m;
    while (&cof % &rb).is_zero() {
        cof /= &rb;
    }

    let mut attempts = 0;
    let mut sample = |rng: &mut R| -> Option<CurvePoint> {
        while attempts < BASIS_BUDGET {
            attempts += 1;
            let mut pt = e.mul(&cof, &random_point(e, rng));
            if pt.is_infinity() {
                continue;
            }
            loop {
                let next = e.mul(&rb, &pt);
                if next.is_infinity() {
                    return Some(pt);
                }
                pt = next;
            }
        }
        None
    };
    let exhausted = CurveError::RetryBudgetExhausted {
        r,
        attempts: BASIS_BUDGET,
    };

    let gp = sample(rng).ok_or(exhausted.clone())?;
    let mut span: HashSet<CurvePoint> = HashSet::new();
    let mut acc = CurvePoint::Infinity;
    for _ in 0..r {
        span.insert(acc.clone());
        acc = e.add(&acc, &gp);
    }
    let gq = loop {
        let cand = sample(rng).ok_or(exhausted.clone())?;
        if !span.contains(&cand) {
            break cand;
        }
    };

    let scalar = (r - p % r) % r;
    for g in [&gp, &gq] {
        if frobenius_p2(g, p) != e.mul_u64(scalar, g) {
            return Err(CurveError::FrobeniusMismatch { r });
        }
    }
    Ok((gp, gq))
}

/// Canonical description of a cyclic subgroup of prime order `r`: the
/// sorted x-coordinates of `P, 2P, …, ((r−1)/2)P` (one per pair `±kP`), or
/// the single x-coordinate for `r = 2`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SubgroupSignature {
    pub order: u64,
    pub xs: Vec<FieldElement>,
}

impl SubgroupSignature {
    pub fn from_xs(order: u64, mut xs: Vec<FieldElement>) -> Self {
        xs.sort();
        Self { order, xs }
    }
}

pub fn subgroup_signature(e: &EllipticCurve, g: &CurvePoint, r: u64) -> SubgroupSignature {
    let count = if r == 2 { 1 } else { (r - 1) / 2 };
    let mut xs = Vec::with_capacity(count as usize);
    let mut acc = g.clone();
    for _ in 0..count {
        xs.push(acc.x().expect("multiple of a nonzero point of order r").clone());
        acc = e.add(&acc, g);
    }
    SubgroupSignature::from_xs(r, xs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_extension_field, Embedding};
    use crate::curves::curve_from_j;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn scalar_frobenius_orders() {
        assert_eq!(group_order_scalar_frobenius(13, 1), BigUint::from(196u32));
        assert_eq!(group_order_scalar_frobenius(13, 2), BigUint::from(28224u32));
        assert_eq!(group_order_scalar_frobenius(13, 3), BigUint::from(4831204u32));
    }

    fn model_13() -> EllipticCurve {
        let f = make_extension_field(13, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let e = curve_from_j(&FieldElement::from_u64(&f, 5)).unwrap();
        twist_to_scalar_frobenius(&e, &mut rng).unwrap()
    }

    #[test]
    fn normalized_model_is_killed_by_group_order() {
        let e = model_13();
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        for _ in 0..20 {
            let pt = random_point(&e, &mut rng);
            assert!(e.mul_u64(196, &pt).is_infinity());
        }
        let big = make_extension_field(13, 4).unwrap();
        let eb = e.base_change(&Embedding::new(e.field(), &big).unwrap());
        let n = group_order_scalar_frobenius(13, 2);
        for _ in 0..10 {
            assert!(eb.mul(&n, &random_point(&eb, &mut rng)).is_infinity());
        }
    }

    #[test]
    fn ordinary_curve_has_no_scalar_model() {
        let f = make_extension_field(13, 2).unwrap();
        let e = EllipticCurve::new(FieldElement::one(&f), FieldElement::zero(&f)).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        assert!(matches!(
            twist_to_scalar_frobenius(&e, &mut rng),
            Err(CurveError::ScalarFrobeniusNotFound)
        ));
    }

    #[test]
    fn three_torsion_basis_at_13() {
        let e = model_13();
        let big = make_extension_field(13, 4).unwrap();
        let eb = e.base_change(&Embedding::new(e.field(), &big).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (gp, gq) = torsion_basis(&eb, 3, &mut rng).unwrap();
        for g in [&gp, &gq] {
            assert!(!g.is_infinity());
            assert!(eb.mul_u64(3, g).is_infinity());
        }
        let mut sigs = vec![subgroup_signature(&eb, &gq, 3)];
        let mut acc = gp.clone();
        for _ in 0..3 {
            sigs.push(subgroup_signature(&eb, &acc, 3));
            acc = eb.add(&acc, &gq);
        }
        sigs.sort();
        sigs.dedup();
        assert_eq!(sigs.len(), 4);
        assert!(sigs.iter().all(|s| s.xs.len() == 1));
        // 3-torsion is not rational over F_13^2
        assert!(matches!(
            torsion_basis(&e, 3, &mut rng),
            Err(CurveError::TorsionNotRational { .. })
        ));
    }
}
