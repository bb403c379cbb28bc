//! Univariate polynomials with coefficients in an extension field.

use std::fmt;

use super::field::{Embedding, FieldElement, FieldRef};

/// Dense polynomial over a single field, lowest degree first. Trailing
/// zero coefficients are stripped, so the zero polynomial is empty.
#[derive(Clone)]
pub struct FieldPolynomial {
    field: FieldRef,
    coeffs: Vec<FieldElement>,
}

impl FieldPolynomial {
    pub fn new(field: &FieldRef, mut coeffs: Vec<FieldElement>) -> Self {
        while coeffs.last().map_or(false, |c| c.is_zero()) {
            coeffs.pop();
        }
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn constant(c: FieldElement) -> Self {
        let field = c.field().clone();
        Self::new(&field, vec![c])
    }

    /// `x − root`.
    pub fn linear(root: &FieldElement) -> Self {
        let f = root.field().clone();
        Self::new(&f, vec![-root, FieldElement::one(&f)])
    }

    /// The identity polynomial `x`.
    pub fn x(field: &FieldRef) -> Self {
        Self::new(field, vec![FieldElement::zero(field), FieldElement::one(field)])
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[FieldElement] {
        &self.coeffs
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn eval(&self, x: &FieldElement) -> FieldElement {
        self.coeffs
            .iter()
            .rev()
            .fold(FieldElement::zero(&self.field), |acc, c| acc * x + c)
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        let zero = FieldElement::zero(&self.field);
        let out = (0..n)
            .map(|i| {
                let a = self.coeffs.get(i).unwrap_or(&zero);
                let b = other.coeffs.get(i).unwrap_or(&zero);
                a + b
            })
            .collect();
        Self::new(&self.field, out)
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::new(&self.field, Vec::new());
        }
        let mut out = vec![FieldElement::zero(&self.field); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] = &out[i + j] + a * b;
            }
        }
        Self::new(&self.field, out)
    }

    pub fn scale(&self, k: &FieldElement) -> Self {
        Self::new(&self.field, self.coeffs.iter().map(|c| c * k).collect())
    }

    /// Image under a field embedding, coefficient by coefficient.
    pub fn embed(&self, emb: &Embedding) -> Self {
        Self::new(emb.target(), self.coeffs.iter().map(|c| emb.apply(c)).collect())
    }

    /// Preimage under a field embedding; `None` if some coefficient lies
    /// outside the subfield.
    pub fn descend(&self, emb: &Embedding) -> Option<Self> {
        let coeffs = self
            .coeffs
            .iter()
            .map(|c| emb.descend(c))
            .collect::<Option<Vec<_>>>()?;
        Some(Self::new(emb.source(), coeffs))
    }
}

impl PartialEq for FieldPolynomial {
    fn eq(&self, other: &Self) -> bool {
        self.coeffs == other.coeffs
    }
}

impl Eq for FieldPolynomial {}

impl fmt::Debug for FieldPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.coeffs).finish()
    }
}
