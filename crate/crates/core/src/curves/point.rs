//! The chord-tangent group law. Scalar multiplication runs in Jacobian
//! coordinates and normalizes once at the end.

use num_bigint::BigUint;

use super::EllipticCurve;
use crate::arith::FieldElement;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum CurvePoint {
    Infinity,
    Affine { x: FieldElement, y: FieldElement },
}

impl CurvePoint {
    pub fn new(x: FieldElement, y: FieldElement) -> Self {
        CurvePoint::Affine { x, y }
    }

    pub fn is_infinity(&self) -> bool {
        matches!(self, CurvePoint::Infinity)
    }

    pub fn x(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { x, .. } => Some(x),
        }
    }

    pub fn y(&self) -> Option<&FieldElement> {
        match self {
            CurvePoint::Infinity => None,
            CurvePoint::Affine { y, .. } => Some(y),
        }
    }
}

// (X : Y : Z) with x = X/Z², y = Y/Z³; Z = 0 is the point at infinity.
struct Jacobian {
    x: FieldElement,
    y: FieldElement,
    z: FieldElement,
}

impl EllipticCurve {
    pub fn neg(&self, p: &CurvePoint) -> CurvePoint {
        match p {
            CurvePoint::Infinity => CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => CurvePoint::new(x.clone(), -y),
        }
    }

    pub fn add(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        let (x1, y1, x2, y2) = match (p, q) {
            (CurvePoint::Infinity, _) => return q.clone(),
            (_, CurvePoint::Infinity) => return p.clone(),
            (CurvePoint::Affine { x: x1, y: y1 }, CurvePoint::Affine { x: x2, y: y2 }) => {
                (x1, y1, x2, y2)
            }
        };
        let lambda = if x1 == x2 {
            if (y1 + y2).is_zero() {
                return CurvePoint::Infinity;
            }
            (x1.square().scale(3) + self.a()) * y1.double().inv().expect("y ≠ 0")
        } else {
            (y2 - y1) * (x2 - x1).inv().expect("x1 ≠ x2")
        };
        let x3 = lambda.square() - x1 - x2;
        let y3 = lambda * (x1 - &x3) - y1;
        CurvePoint::new(x3, y3)
    }

    pub fn double(&self, p: &CurvePoint) -> CurvePoint {
        self.add(p, p)
    }

    pub fn sub(&self, p: &CurvePoint, q: &CurvePoint) -> CurvePoint {
        self.add(p, &self.neg(q))
    }

    fn jac_double(&self, p: &Jacobian) -> Jacobian {
        if p.z.is_zero() || p.y.is_zero() {
            return self.jac_infinity();
        }
        let xx = p.x.square();
        let yy = p.y.square();
        let yyyy = yy.square();
        let zz = p.z.square();
        let s = (&p.x * &yy).scale(4);
        let m = xx.scale(3) + self.a() * zz.square();
        let x3 = m.square() - s.double();
        let y3 = m * (s - &x3) - yyyy.scale(8);
        let z3 = (&p.y * &p.z).double();
        Jacobian { x: x3, y: y3, z: z3 }
    }

    fn jac_add_affine(&self, p: &Jacobian, x2: &FieldElement, y2: &FieldElement) -> Jacobian {
        if p.z.is_zero() {
            return Jacobian {
                x: x2.clone(),
                y: y2.clone(),
                z: FieldElement::one(x2.field()),
            };
        }
        let z1z1 = p.z.square();
        let u2 = x2 * &z1z1;
        let s2 = y2 * &p.z * &z1z1;
        let h = u2 - &p.x;
        let r = s2 - &p.y;
        if h.is_zero() {
            return if r.is_zero() {
                self.jac_double(p)
            } else {
                self.jac_infinity()
            };
        }
        let hh = h.square();
        let hhh = &hh * &h;
        let v = &p.x * &hh;
        let x3 = r.square() - &hhh - v.double();
        let y3 = r * (v - &x3) - &p.y * hhh;
        let z3 = &p.z * h;
        Jacobian { x: x3, y: y3, z: z3 }
    }

    fn jac_infinity(&self) -> Jacobian {
        let f = self.field();
        Jacobian {
            x: FieldElement::one(f),
            y: FieldElement::one(f),
            z: FieldElement::zero(f),
        }
    }

    fn jac_to_affine(&self, p: Jacobian) -> CurvePoint {
        if p.z.is_zero() {
            return CurvePoint::Infinity;
        }
        let zi = p.z.inv().expect("z ≠ 0");
        let zi2 = zi.square();
        CurvePoint::new(p.x * &zi2, p.y * (zi2 * zi))
    }

    /// `[n]P` by left-to-right double-and-add.
    pub fn mul(&self, n: &BigUint, p: &CurvePoint) -> CurvePoint {
        let (x, y) = match p {
            CurvePoint::Infinity => return CurvePoint::Infinity,
            CurvePoint::Affine { x, y } => (x, y),
        };
        let mut acc = self.jac_infinity();
        for i in (0..n.bits()).rev() {
            acc = self.jac_double(&acc);
            if n.bit(i) {
                acc = self.jac_add_affine(&acc, x, y);
            }
        }
        self.jac_to_affine(acc)
    }

    pub fn mul_u64(&self, n: u64, p: &CurvePoint) -> CurvePoint {
        self.mul(&BigUint::from(n), p)
    }

    /// Smallest `n ≤ limit` with `[n]P = O`.
    pub fn small_order(&self, p: &CurvePoint, limit: u64) -> Option<u64> {
        let mut q = p.clone();
        for n in 1..=limit {
            if q.is_infinity() {
                return Some(n);
            }
            q = self.add(&q, p);
        }
        None
    }
}
