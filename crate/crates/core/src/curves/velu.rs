//! Vélu's formulas for quotients by subgroups of prime order.

use super::{CurveError, CurvePoint, EllipticCurve};
use crate::arith::prime::is_prime;
use crate::arith::{FieldElement, FieldPolynomial};

/// Per-representative Vélu data: for `Q` running over one point of each
/// pair `±Q` of nonzero kernel points (2-torsion points once),
/// `v_Q = 6x_Q² + 2a` (halved for 2-torsion) and `u_Q = 4y_Q²`.
#[derive(Clone, Debug)]
struct Term {
    x: FieldElement,
    v: FieldElement,
    u: FieldElement,
    two_torsion: bool,
}

/// The separable isogeny `E → E/⟨G⟩` in Vélu normal form.
#[derive(Clone, Debug)]
pub struct VeluIsogeny {
    domain: EllipticCurve,
    codomain: EllipticCurve,
    degree: u64,
    kernel: Vec<CurvePoint>,
    terms: Vec<Term>,
}

/// Quotient of `e` by the subgroup generated by `g`, which must have prime
/// order.
pub fn velu_quotient(e: &EllipticCurve, g: &CurvePoint) -> Result<VeluIsogeny, CurveError> {
    if g.is_infinity() {
        return Err(CurveError::TrivialKernel);
    }
    if !e.contains(g) {
        return Err(CurveError::NotOnCurve);
    }
    let mut kernel = vec![g.clone()];
    loop {
        let next = e.add(kernel.last().unwrap(), g);
        if next.is_infinity() {
            break;
        }
        kernel.push(next);
    }
    let r = kernel.len() as u64 + 1;
    if !is_prime(r) {
        return Err(CurveError::CompositeOrder(r));
    }
    let reps = if r == 2 { 1 } else { (r as usize - 1) / 2 };
    let f = e.field();
    let mut v_sum = FieldElement::zero(f);
    let mut w_sum = FieldElement::zero(f);
    let mut terms = Vec::with_capacity(reps);
    for q in &kernel[..reps] {
        let (x, y) = (q.x().unwrap(), q.y().unwrap());
        let gx = x.square().scale(3) + e.a();
        let two_torsion = y.is_zero();
        let v = if two_torsion { gx } else { gx.double() };
        let u = y.square().scale(4);
        v_sum = &v_sum + &v;
        w_sum = &w_sum + &u + x * &v;
        terms.push(Term {
            x: x.clone(),
            v,
            u,
            two_torsion,
        });
    }
    let codomain = EllipticCurve::new(e.a() - v_sum.scale(5), e.b() - w_sum.scale(7))?;
    Ok(VeluIsogeny {
        domain: e.clone(),
        codomain,
        degree: r,
        kernel,
        terms,
    })
}

impl VeluIsogeny {
    pub fn domain(&self) -> &EllipticCurve {
        &self.domain
    }

    pub fn codomain(&self) -> &EllipticCurve {
        &self.codomain
    }

    pub fn degree(&self) -> u64 {
        self.degree
    }

    /// Nonzero kernel points `G, 2G, …, (r−1)G`.
    pub fn kernel(&self) -> &[CurvePoint] {
        &self.kernel
    }

    /// `x(φ(P))` from `x(P)`; `None` on kernel x-coordinates.
    pub fn eval_x(&self, x: &FieldElement) -> Option<FieldElement> {
        let mut acc = x.clone();
        for t in &self.terms {
            let inv = (x - &t.x).inv().ok()?;
            acc = acc + &t.v * &inv + &t.u * inv.square();
        }
        Some(acc)
    }

    /// `φ(P) = (x_P + Σ (x_{P+Q} − x_Q), y_P + Σ (y_{P+Q} − y_Q))` over the
    /// nonzero kernel points `Q`.
    pub fn eval(&self, pt: &CurvePoint) -> CurvePoint {
        let (x, y) = match pt {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => (x, y),
        };
        let mut xo = x.clone();
        let mut yo = y.clone();
        for q in &self.kernel {
            match self.domain.add(pt, q) {
                CurvePoint::Infinity => return CurvePoint::Infinity,
                CurvePoint::Affine { x: xs, y: ys } => {
                    xo = xo + xs - q.x().unwrap();
                    yo = yo + ys - q.y().unwrap();
                }
            }
        }
        CurvePoint::new(xo, yo)
    }

    /// The x-map as a reduced fraction `num/den`: `den` is the square of the
    /// kernel polynomial (2-torsion factors to the first power), `deg num = r`.
    pub fn x_map(&self) -> (FieldPolynomial, FieldPolynomial) {
        let f = self.domain.field();
        let one = FieldPolynomial::constant(FieldElement::one(f));
        let factor = |t: &Term| {
            let lin = FieldPolynomial::linear(&t.x);
            if t.two_torsion {
                lin
            } else {
                lin.mul(&lin)
            }
        };
        let den = self.terms.iter().fold(one.clone(), |acc, t| acc.mul(&factor(t)));
        let mut num = FieldPolynomial::x(f).mul(&den);
        for (i, t) in self.terms.iter().enumerate() {
            let others = self
                .terms
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != i)
                .fold(one.clone(), |acc, (_, s)| acc.mul(&factor(s)));
            // v/(x−x_Q) + u/(x−x_Q)² = (v(x−x_Q) + u)/(x−x_Q)²
            let part = if t.two_torsion {
                FieldPolynomial::constant(t.v.clone())
            } else {
                FieldPolynomial::linear(&t.x)
                    .scale(&t.v)
                    .add(&FieldPolynomial::constant(t.u.clone()))
            };
            num = num.add(&part.mul(&others));
        }
        (num, den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{make_extension_field, Embedding};
    use crate::curves::{curve_from_j, random_point, torsion_basis, twist_to_scalar_frobenius};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    /// Classical modular polynomial of level 2.
    fn phi2(x: &FieldElement, y: &FieldElement) -> FieldElement {
        let f = x.field();
        let c = |v: i128| {
            let p = f.characteristic() as i128;
            FieldElement::from_u64(f, v.rem_euclid(p) as u64)
        };
        let (x2, y2) = (x.square(), y.square());
        x2.clone() * x + y2.clone() * y - x2.clone() * &y2
            + c(1488) * (x2.clone() * y + x * y2.clone())
            - c(162000) * (x2.clone() + &y2)
            + c(40773375) * x * y
            + c(8748000000) * (x + y)
            - c(157464000000000)
    }

    fn scalar_model(p: u64, j: u64) -> EllipticCurve {
        let f = make_extension_field(p, 2).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        twist_to_scalar_frobenius(&curve_from_j(&FieldElement::from_u64(&f, j)).unwrap(), &mut rng)
            .unwrap()
    }

    #[test]
    fn two_isogenies_satisfy_phi2() {
        let e = scalar_model(13, 5);
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let (gp, gq) = torsion_basis(&e, 2, &mut rng).unwrap();
        let j = e.j_invariant();
        for g in [gp.clone(), gq.clone(), e.add(&gp, &gq)] {
            let phi = velu_quotient(&e, &g).unwrap();
            assert!(phi2(&j, &phi.codomain().j_invariant()).is_zero());
            let (num, den) = phi.x_map();
            assert_eq!((num.degree(), den.degree()), (Some(2), Some(1)));
        }
    }

    #[test]
    fn trivial_and_composite_kernels_rejected() {
        let e = scalar_model(13, 5);
        assert!(matches!(
            velu_quotient(&e, &CurvePoint::Infinity),
            Err(CurveError::TrivialKernel)
        ));
        // a random point of F_169 has order dividing 14, typically composite
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let pt = loop {
            let pt = random_point(&e, &mut rng);
            if e.mul_u64(7, &pt).is_infinity() || e.mul_u64(2, &pt).is_infinity() {
                continue;
            }
            break pt;
        };
        assert!(matches!(
            velu_quotient(&e, &pt),
            Err(CurveError::CompositeOrder(14))
        ));
    }

    #[test]
    fn five_isogeny_maps_points_and_collapses_kernel() {
        let e = scalar_model(13, 5);
        let big = make_extension_field(13, 8).unwrap();
        let eb = e.base_change(&Embedding::new(e.field(), &big).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let (gp, gq) = torsion_basis(&eb, 5, &mut rng).unwrap();
        let phi = velu_quotient(&eb, &gp).unwrap();
        assert_eq!(phi.degree(), 5);
        let cod = phi.codomain();
        for k in phi.kernel() {
            assert!(phi.eval(k).is_infinity());
            assert!(phi.eval_x(k.x().unwrap()).is_none());
        }
        let (num, den) = phi.x_map();
        assert_eq!((num.degree(), den.degree()), (Some(5), Some(4)));
        for _ in 0..5 {
            let pt = random_point(&eb, &mut rng);
            let img = phi.eval(&pt);
            assert!(cod.contains(&img));
            let x = pt.x().unwrap();
            assert_eq!(img.x(), phi.eval_x(x).as_ref());
            assert_eq!(num.eval(x) * den.eval(x).inv().unwrap(), *img.x().unwrap());
            // homomorphism
            let q = random_point(&eb, &mut rng);
            assert_eq!(phi.eval(&eb.add(&pt, &q)), cod.add(&img, &phi.eval(&q)));
        }
        // dual: quotient of the codomain by φ(E[5]) returns to j(E)
        let dual = velu_quotient(cod, &phi.eval(&gq)).unwrap();
        assert_eq!(dual.codomain().j_invariant(), eb.j_invariant());
    }

    #[test]
    fn fibres_of_x_map_have_r_elements() {
        // exhaustive over E(F_13^4) for a 3-isogeny
        let e = scalar_model(13, 5);
        let big = make_extension_field(13, 4).unwrap();
        let eb = e.base_change(&Embedding::new(e.field(), &big).unwrap());
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let (gp, _) = torsion_basis(&eb, 3, &mut rng).unwrap();
        let phi = velu_quotient(&eb, &gp).unwrap();
        let xs: Vec<FieldElement> = FieldElement::enumerate(&big)
            .filter(|x| eb.rhs(x).is_square())
            .collect();
        let images: Vec<Option<FieldElement>> = xs.iter().map(|x| phi.eval_x(x)).collect();
        let mut checked = 0;
        for (x, target) in xs.iter().zip(&images).take(40) {
            let Some(target) = target else { continue };
            // skip points with 2P in the kernel, whose fibre collapses
            let pt = CurvePoint::new(x.clone(), eb.rhs(x).sqrt().unwrap());
            if eb.mul_u64(6, &pt).is_infinity() {
                continue;
            }
            let fibre = images.iter().filter(|z| z.as_ref() == Some(target)).count();
            assert_eq!(fibre, 3);
            checked += 1;
        }
        assert!(checked > 30);
    }
}
