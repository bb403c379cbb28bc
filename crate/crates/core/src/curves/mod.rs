//! Short Weierstrass curves `y² = x³ + ax + b` over extension fields.

mod point;
mod torsion;
mod velu;

pub use point::CurvePoint;
pub use torsion::{
    group_exponent_scalar_frobenius, group_order_scalar_frobenius, random_point, subgroup_signature,
    torsion_basis, twist_to_scalar_frobenius, SubgroupSignature,
};
pub use velu::{velu_quotient, VeluIsogeny};

use thiserror::Error;

use crate::arith::{ArithError, Embedding, FieldElement, FieldRef};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CurveError {
    #[error("singular model: 4a^3 + 27b^2 = 0")]
    Singular,
    #[error("j-invariant {0} is excluded (0 or 1728)")]
    ExcludedJ(String),
    #[error("no quadratic twist has scalar Frobenius -p")]
    ScalarFrobeniusNotFound,
    #[error("torsion basis for r = {r} not found within {attempts} samples")]
    RetryBudgetExhausted { r: u64, attempts: usize },
    #[error("{r}-torsion is not rational over a degree-{degree} extension")]
    TorsionNotRational { r: u64, degree: usize },
    #[error("Frobenius does not act as -p on the {r}-torsion")]
    FrobeniusMismatch { r: u64 },
    #[error("kernel generator is the point at infinity")]
    TrivialKernel,
    #[error("kernel generator has composite order {0}")]
    CompositeOrder(u64),
    #[error("point is not on the curve")]
    NotOnCurve,
    #[error(transparent)]
    Arith(#[from] ArithError),
}

/// `y² = x³ + ax + b`, nonsingular.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EllipticCurve {
    a: FieldElement,
    b: FieldElement,
}

impl EllipticCurve {
    pub fn new(a: FieldElement, b: FieldElement) -> Result<Self, CurveError> {
        let disc = a.square() * &a * FieldElement::from_u64(a.field(), 4)
            + b.square() * FieldElement::from_u64(a.field(), 27);
        if disc.is_zero() {
            return Err(CurveError::Singular);
        }
        Ok(Self { a, b })
    }

    pub fn a(&self) -> &FieldElement {
        &self.a
    }

    pub fn b(&self) -> &FieldElement {
        &self.b
    }

    pub fn field(&self) -> &FieldRef {
        self.a.field()
    }

    /// `x³ + ax + b`.
    pub fn rhs(&self, x: &FieldElement) -> FieldElement {
        (x.square() + &self.a) * x + &self.b
    }

    pub fn contains(&self, pt: &CurvePoint) -> bool {
        match pt {
            CurvePoint::Infinity => true,
            CurvePoint::Affine { x, y } => y.square() == self.rhs(x),
        }
    }

    /// `j = 1728 · 4a³ / (4a³ + 27b²)`.
    pub fn j_invariant(&self) -> FieldElement {
        let f = self.field();
        let a3 = self.a.square() * &self.a * FieldElement::from_u64(f, 4);
        let den = &a3 + self.b.square() * FieldElement::from_u64(f, 27);
        FieldElement::from_u64(f, 1728) * a3 * den.inv().expect("nonsingular")
    }

    /// The model `(u⁴a, u⁶b)` reached by `x ↦ u²x`, given `s = u²`.
    pub fn rescale(&self, s: &FieldElement) -> Self {
        let s2 = s.square();
        Self {
            a: &self.a * &s2,
            b: &self.b * (s2 * s),
        }
    }

    /// Quadratic twist `(d²a, d³b)`.
    pub fn twist(&self, d: &FieldElement) -> Self {
        self.rescale(d)
    }

    pub fn base_change(&self, emb: &Embedding) -> Self {
        Self {
            a: emb.apply(&self.a),
            b: emb.apply(&self.b),
        }
    }

    /// Inverse of [`base_change`](Self::base_change); `None` if a coefficient
    /// lies outside the subfield.
    pub fn descend(&self, emb: &Embedding) -> Option<Self> {
        Some(Self {
            a: emb.descend(&self.a)?,
            b: emb.descend(&self.b)?,
        })
    }
}

/// `y² = x³ + 3kx + 2k` with `k = j/(1728 − j)`, whose j-invariant is `j`.
pub fn curve_from_j(j: &FieldElement) -> Result<EllipticCurve, CurveError> {
    let f = j.field();
    let c1728 = FieldElement::from_u64(f, 1728);
    if j.is_zero() || *j == c1728 {
        return Err(CurveError::ExcludedJ(format!("{j:?}")));
    }
    let k = j * (c1728 - j).inv()?;
    EllipticCurve::new(k.scale(3), k.scale(2))
}

/// The scalar `u²` with `E2 = E1.rescale(u²)`, so that `x ↦ u²x` is an
/// isomorphism `E1 → E2` defined over the common field. `None` when the
/// j-invariants differ or the curves are twists of each other. Assumes
/// `j ∉ {0, 1728}`, i.e. `a, b ≠ 0`.
pub fn isomorphism_scale(e1: &EllipticCurve, e2: &EllipticCurve) -> Option<FieldElement> {
    if e1.a.is_zero() || e1.b.is_zero() || e2.a.is_zero() || e2.b.is_zero() {
        return None;
    }
    if e1.j_invariant() != e2.j_invariant() {
        return None;
    }
    let s = (&e2.b * &e1.a) * (&e1.b * &e2.a).inv().ok()?;
    (e1.rescale(&s) == *e2).then_some(s)
}
