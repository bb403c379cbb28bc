//! Prime fields and their extensions `F_p[x]/(f)`.
//!
//! Every [`FieldElement`] holds an `Arc` to its [`ExtensionField`]. Mixing
//! elements of different fields is a programming error and panics at the
//! offending operation. Element order is lexicographic on the coefficient
//! vector read from the highest power of `x` down, which coincides with the
//! order in which candidate moduli are searched.

use std::cmp::Ordering;
use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use rand::Rng;

use super::fp_poly;
use super::prime::{is_prime, mod_inv};
use super::ArithError;

/// Upper bound (exclusive) on the characteristic.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PrimeField {
    p: u64,
}

impl PrimeField {
    pub fn new(p: u64) -> Result<Self, ArithError> {
        if p == 2 || !is_prime(p) || p >= MAX_CHARACTERISTIC {
            return Err(ArithError::NotOddPrime(p));
        }
        Ok(Self { p })
    }

    pub fn characteristic(&self) -> u64 {
        self.p
    }
}

/// `F_p[x]/(f)` for a monic irreducible `f` of degree `d`.
pub struct ExtensionField {
    base: PrimeField,
    modulus: Vec<u64>,
    // x^(d+i) mod f for i in 0..d-1
    reduction: Vec<Vec<u64>>,
    wide: bool,
    order: BigUint,
    nonresidue: OnceLock<Vec<u64>>,
}

pub type FieldRef = Arc<ExtensionField>;

impl fmt::Debug for ExtensionField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}^{} mod {:?}", self.base.p, self.degree(), self.modulus)
    }
}

fn field_cache() -> &'static Mutex<HashMap<(u64, usize), FieldRef>> {
    static CACHE: OnceLock<Mutex<HashMap<(u64, usize), FieldRef>>> = OnceLock::new();
    CACHE.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Build `F_{p^d}` with the lexicographically smallest monic irreducible
/// modulus of degree `d`. Results are memoized per `(p, d)`.
pub fn make_extension_field(p: u64, d: usize) -> Result<FieldRef, ArithError> {
    if let Some(f) = field_cache().lock().unwrap().get(&(p, d)) {
        return Ok(f.clone());
    }
    let base = PrimeField::new(p)?;
    if d == 0 {
        return Err(ArithError::InvalidDegree(d));
    }
    let modulus = find_irreducible(p, d)?;
    let field = Arc::new(ExtensionField::build(base, modulus));
    field_cache()
        .lock()
        .unwrap()
        .entry((p, d))
        .or_insert_with(|| field.clone());
    Ok(field)
}

/// Scan monic degree-`d` polynomials in increasing order (coefficient of
/// `x^(d-1)` most significant) and return the first irreducible one.
fn find_irreducible(p: u64, d: usize) -> Result<Vec<u64>, ArithError> {
    let mut low = vec![0u64; d];
    // Exhaustive bound: at most p^d candidates.
    loop {
        let mut f = low.clone();
        f.push(1);
        if fp_poly::is_irreducible(&f, p) {
            return Ok(f);
        }
        // increment base-p counter with low[0] least significant
        let mut i = 0;
        loop {
            if i == d {
                return Err(ArithError::NoIrreducible { p, degree: d });
            }
            low[i] += 1;
            if low[i] < p {
                break;
            }
            low[i] = 0;
            i += 1;
        }
    }
}

impl ExtensionField {
    /// Field with an explicitly given monic modulus, checked for irreducibility.
    pub fn with_modulus(p: u64, modulus: Vec<u64>) -> Result<FieldRef, ArithError> {
        let base = PrimeField::new(p)?;
        let mut m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        fp_poly::trim(&mut m);
        if m.len() < 2 || *m.last().unwrap() != 1 || !fp_poly::is_irreducible(&m, p) {
            return Err(ArithError::ReducibleModulus);
        }
        Ok(Arc::new(Self::build(base, m)))
    }

    fn build(base: PrimeField, modulus: Vec<u64>) -> Self {
        let p = base.p;
        let d = modulus.len() - 1;
        let mut reduction = Vec::with_capacity(d.saturating_sub(1));
        // x^d ≡ -(lower terms)
        let mut cur: Vec<u64> = modulus[..d].iter().map(|&c| (p - c) % p).collect();
        for _ in 0..d.saturating_sub(1) {
            reduction.push(cur.clone());
            // multiply by x and reduce
            let top = cur[d - 1];
            let mut next = vec![0u64; d];
            for j in (1..d).rev() {
                next[j] = cur[j - 1];
            }
            for j in 0..d {
                next[j] = (next[j] + top * ((p - modulus[j]) % p)) % p;
            }
            cur = next;
        }
        let bound = (p as u128 - 1) * (p as u128 - 1) * (2 * d as u128);
        let order = BigUint::from(p).pow(d as u32);
        Self {
            base,
            modulus,
            reduction,
            wide: bound >= u64::MAX as u128,
            order,
            nonresidue: OnceLock::new(),
        }
    }

    pub fn characteristic(&self) -> u64 {
        self.base.p
    }

    pub fn prime_field(&self) -> PrimeField {
        self.base
    }

    pub fn degree(&self) -> usize {
        self.modulus.len() - 1
    }

    /// Monic modulus, lowest degree first (length `d + 1`).
    pub fn modulus(&self) -> &[u64] {
        &self.modulus
    }

    /// Number of elements `p^d`.
    pub fn order(&self) -> &BigUint {
        &self.order
    }

    fn same(&self, other: &ExtensionField) -> bool {
        std::ptr::eq(self, other) || (self.base == other.base && self.modulus == other.modulus)
    }

    fn add_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.base.p;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| {
                let s = x + y;
                if s >= p {
                    s - p
                } else {
                    s
                }
            })
            .collect()
    }

    fn sub_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.base.p;
        a.iter()
            .zip(b)
            .map(|(&x, &y)| if x >= y { x - y } else { x + p - y })
            .collect()
    }

    fn mul_raw(&self, a: &[u64], b: &[u64]) -> Vec<u64> {
        let p = self.base.p;
        let d = self.degree();
        if d == 1 {
            return vec![a[0] * b[0] % p];
        }
        if self.wide {
            let mut prod = vec![0u128; 2 * d - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] += (x * y) as u128;
                }
            }
            let high: Vec<u64> = prod[d..].iter().map(|&c| (c % p as u128) as u64).collect();
            let mut out: Vec<u128> = prod[..d].iter().map(|&c| c % p as u128).collect();
            for (h, row) in high.iter().zip(&self.reduction) {
                if *h == 0 {
                    continue;
                }
                for (o, &r) in out.iter_mut().zip(row) {
                    *o += (*h * r) as u128;
                }
            }
            out.into_iter().map(|c| (c % p as u128) as u64).collect()
        } else {
            let mut prod = vec![0u64; 2 * d - 1];
            for (i, &x) in a.iter().enumerate() {
                if x == 0 {
                    continue;
                }
                for (j, &y) in b.iter().enumerate() {
                    prod[i + j] += x * y;
                }
            }
            let (lo, hi) = prod.split_at_mut(d);
            for (h, row) in hi.iter().zip(&self.reduction) {
                let h = *h % p;
                if h == 0 {
                    continue;
                }
                for (o, &r) in lo.iter_mut().zip(row) {
                    *o += h * r;
                }
            }
            lo.iter().map(|&c| c % p).collect()
        }
    }

    fn inv_raw(&self, a: &[u64]) -> Option<Vec<u64>> {
        let p = self.base.p;
        let d = self.degree();
        let mut r0 = self.modulus.clone();
        let mut r1 = a.to_vec();
        fp_poly::trim(&mut r1);
        if r1.is_empty() {
            return None;
        }
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while fp_poly::degree(&r1).map_or(false, |k| k > 0) {
            let (q, r) = fp_poly::divmod(&r0, &r1, p);
            let s2 = fp_poly::sub(&s0, &fp_poly::mul(&q, &s1, p), p);
            r0 = std::mem::replace(&mut r1, r);
            s0 = std::mem::replace(&mut s1, s2);
        }
        // r1 is a nonzero constant c; s1 * a ≡ c
        let c_inv = mod_inv(r1[0], p);
        let mut out = vec![0u64; d];
        for (o, &s) in out.iter_mut().zip(&s1) {
            *o = s * c_inv % p;
        }
        Some(out)
    }

    /// First non-square in canonical enumeration order (integer `n` read as
    /// base-`p` digits, lowest coefficient least significant). In even degree
    /// all of `F_p` consists of squares, so the scan starts past it.
    pub fn nonresidue(self: &Arc<Self>) -> FieldElement {
        let coeffs = self.nonresidue.get_or_init(|| {
            let half = (&self.order - 1u32) >> 1;
            let mut n: u64 = if self.degree() % 2 == 0 { self.base.p } else { 1 };
            loop {
                let e = FieldElement::from_index(self, n);
                if !e.pow(&half).is_one() {
                    return e.coeffs;
                }
                n += 1;
            }
        });
        FieldElement {
            field: self.clone(),
            coeffs: coeffs.clone(),
        }
    }
}

/// An element of an [`ExtensionField`], coefficients lowest degree first.
#[derive(Clone)]
pub struct FieldElement {
    field: FieldRef,
    coeffs: Vec<u64>,
}

impl FieldElement {
    pub fn zero(field: &FieldRef) -> Self {
        Self {
            field: field.clone(),
            coeffs: vec![0; field.degree()],
        }
    }

    pub fn one(field: &FieldRef) -> Self {
        Self::from_u64(field, 1)
    }

    pub fn from_u64(field: &FieldRef, v: u64) -> Self {
        let mut coeffs = vec![0; field.degree()];
        coeffs[0] = v % field.characteristic();
        Self {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn from_i64(field: &FieldRef, v: i64) -> Self {
        let p = field.characteristic() as i64;
        Self::from_u64(field, v.rem_euclid(p) as u64)
    }

    /// Element from coefficients (lowest first); missing entries are zero,
    /// values are reduced mod `p`. Fails if more than `d` coefficients.
    pub fn from_coeffs(field: &FieldRef, coeffs: &[u64]) -> Result<Self, ArithError> {
        let d = field.degree();
        if coeffs.len() > d {
            return Err(ArithError::CoefficientLength {
                expected: d,
                got: coeffs.len(),
            });
        }
        let p = field.characteristic();
        let mut c = vec![0; d];
        for (o, &x) in c.iter_mut().zip(coeffs) {
            *o = x % p;
        }
        Ok(Self {
            field: field.clone(),
            coeffs: c,
        })
    }

    /// The generator `x` of the extension (equals a constant when `d = 1`).
    pub fn generator(field: &FieldRef) -> Self {
        if field.degree() == 1 {
            let p = field.characteristic();
            return Self::from_u64(field, (p - field.modulus[0]) % p);
        }
        let mut c = vec![0; field.degree()];
        c[1] = 1;
        Self {
            field: field.clone(),
            coeffs: c,
        }
    }

    /// Element whose coefficients are the base-`p` digits of `n`.
    pub fn from_index(field: &FieldRef, mut n: u64) -> Self {
        let p = field.characteristic();
        let mut c = vec![0; field.degree()];
        for o in c.iter_mut() {
            *o = n % p;
            n /= p;
        }
        Self {
            field: field.clone(),
            coeffs: c,
        }
    }

    pub fn random<R: Rng + ?Sized>(field: &FieldRef, rng: &mut R) -> Self {
        let p = field.characteristic();
        Self {
            field: field.clone(),
            coeffs: (0..field.degree()).map(|_| rng.gen_range(0..p)).collect(),
        }
    }

    pub fn field(&self) -> &FieldRef {
        &self.field
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|&c| c == 0)
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0] == 1 && self.coeffs[1..].iter().all(|&c| c == 0)
    }

    /// `Some(c)` when the element lies in the prime field.
    pub fn as_prime_field(&self) -> Option<u64> {
        self.coeffs[1..].iter().all(|&c| c == 0).then_some(self.coeffs[0])
    }

    fn check(&self, other: &Self) {
        assert!(
            self.field.same(&other.field),
            "mixed-field operation: {:?} vs {:?}",
            self.field,
            other.field
        );
    }

    fn with(&self, coeffs: Vec<u64>) -> Self {
        Self {
            field: self.field.clone(),
            coeffs,
        }
    }

    pub fn square(&self) -> Self {
        self.with(self.field.mul_raw(&self.coeffs, &self.coeffs))
    }

    pub fn double(&self) -> Self {
        self.with(self.field.add_raw(&self.coeffs, &self.coeffs))
    }

    pub fn scale(&self, k: u64) -> Self {
        let p = self.field.characteristic();
        let k = k % p;
        self.with(self.coeffs.iter().map(|&c| c * k % p).collect())
    }

    pub fn inv(&self) -> Result<Self, ArithError> {
        self.field
            .inv_raw(&self.coeffs)
            .map(|c| self.with(c))
            .ok_or(ArithError::DivisionByZero)
    }

    pub fn pow(&self, exp: &BigUint) -> Self {
        let mut acc = FieldElement::one(&self.field);
        let bits = exp.bits();
        for i in (0..bits).rev() {
            acc = acc.square();
            if exp.bit(i) {
                acc = &acc * self;
            }
        }
        acc
    }

    pub fn pow_u64(&self, exp: u64) -> Self {
        self.pow(&BigUint::from(exp))
    }

    /// Frobenius `a ↦ a^p`.
    pub fn frobenius(&self) -> Self {
        self.pow_u64(self.field.characteristic())
    }

    /// Euler criterion: nonzero squares satisfy `a^((q-1)/2) = 1`.
    pub fn is_square(&self) -> bool {
        if self.is_zero() {
            return true;
        }
        let half = (self.field.order() - 1u32) >> 1;
        self.pow(&half).is_one()
    }

    /// Tonelli–Shanks square root; returns the smaller of the two roots in
    /// canonical order, or `None` for a non-square.
    pub fn sqrt(&self) -> Option<Self> {
        if self.is_zero() {
            return Some(self.clone());
        }
        let q_minus_1 = self.field.order() - 1u32;
        let s = q_minus_1.trailing_zeros().unwrap_or(0);
        let t = &q_minus_1 >> s;
        let mut b = self.pow(&t);
        // a^((q-1)/2) = b^(2^(s-1))
        let mut chk = b.clone();
        for _ in 0..s.saturating_sub(1) {
            chk = chk.square();
        }
        if !chk.is_one() {
            return None;
        }
        let mut x = self.pow(&((&t + 1u32) >> 1));
        let mut c = self.field.nonresidue().pow(&t);
        let mut m = s;
        while !b.is_one() {
            let mut i = 0;
            let mut bb = b.clone();
            while !bb.is_one() {
                bb = bb.square();
                i += 1;
            }
            let mut w = c.clone();
            for _ in 0..(m - i - 1) {
                w = w.square();
            }
            x = &x * &w;
            c = w.square();
            b = &b * &c;
            m = i;
        }
        let neg = -&x;
        Some(if neg < x { neg } else { x })
    }

    /// All elements of a small field in canonical index order.
    pub fn enumerate(field: &FieldRef) -> impl Iterator<Item = FieldElement> + '_ {
        let q = field.order().to_u64_digits();
        let q = q.first().copied().unwrap_or(0);
        assert!(field.order() == &BigUint::from(q), "field too large to enumerate");
        (0..q).map(move |n| FieldElement::from_index(field, n))
    }
}

impl fmt::Debug for FieldElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.coeffs.len() == 1 {
            write!(f, "{}", self.coeffs[0])
        } else {
            write!(f, "{:?}", self.coeffs)
        }
    }
}

impl PartialEq for FieldElement {
    fn eq(&self, other: &Self) -> bool {
        self.field.same(&other.field) && self.coeffs == other.coeffs
    }
}

impl Eq for FieldElement {}

impl std::hash::Hash for FieldElement {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        self.coeffs.hash(state);
    }
}

impl PartialOrd for FieldElement {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for FieldElement {
    fn cmp(&self, other: &Self) -> Ordering {
        self.check(other);
        self.coeffs.iter().rev().cmp(other.coeffs.iter().rev())
    }
}

impl Neg for &FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        let p = self.field.characteristic();
        self.with(self.coeffs.iter().map(|&c| (p - c) % p).collect())
    }
}

impl Neg for FieldElement {
    type Output = FieldElement;
    fn neg(self) -> FieldElement {
        -&self
    }
}

macro_rules! binop {
    ($tr:ident, $method:ident, $raw:ident) => {
        impl $tr<&FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                self.check(rhs);
                self.with(self.field.$raw(&self.coeffs, &rhs.coeffs))
            }
        }
        impl $tr<FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                (&self).$method(&rhs)
            }
        }
        impl $tr<&FieldElement> for FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: &FieldElement) -> FieldElement {
                (&self).$method(rhs)
            }
        }
        impl $tr<FieldElement> for &FieldElement {
            type Output = FieldElement;
            fn $method(self, rhs: FieldElement) -> FieldElement {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, add_raw);
binop!(Sub, sub, sub_raw);
binop!(Mul, mul, mul_raw);

/// Embedding of `F_p` or `F_{p^2}` into a larger extension of even degree,
/// sending the source generator to a fixed root of the source modulus.
#[derive(Clone, Debug)]
pub struct Embedding {
    source: FieldRef,
    target: FieldRef,
    image: FieldElement,
}

impl Embedding {
    pub fn new(source: &FieldRef, target: &FieldRef) -> Result<Self, ArithError> {
        let (e, d) = (source.degree(), target.degree());
        if source.characteristic() != target.characteristic() || e > 2 || d % e != 0 {
            return Err(ArithError::NoEmbedding {
                from: e,
                to: d,
            });
        }
        let image = if e == 1 {
            FieldElement::one(target)
        } else if source.same(target) {
            FieldElement::generator(target)
        } else {
            // root of x^2 + c1 x + c0: (-c1 + sqrt(c1^2 - 4 c0)) / 2
            let c0 = FieldElement::from_u64(target, source.modulus[0]);
            let c1 = FieldElement::from_u64(target, source.modulus[1]);
            let disc = c1.square() - c0.scale(4);
            let s = disc.sqrt().ok_or(ArithError::NoEmbedding { from: e, to: d })?;
            (s - c1) * FieldElement::from_u64(target, 2).inv()?
        };
        Ok(Self {
            source: source.clone(),
            target: target.clone(),
            image,
        })
    }

    pub fn source(&self) -> &FieldRef {
        &self.source
    }

    pub fn target(&self) -> &FieldRef {
        &self.target
    }

    pub fn apply(&self, a: &FieldElement) -> FieldElement {
        assert!(a.field.same(&self.source), "embedding applied to foreign element");
        let mut out = FieldElement::from_u64(&self.target, a.coeffs[0]);
        if a.coeffs.len() == 2 && a.coeffs[1] != 0 {
            out = out + self.image.scale(a.coeffs[1]);
        }
        out
    }

    /// Inverse image of `z`, or `None` when `z` is outside the subfield.
    pub fn descend(&self, z: &FieldElement) -> Option<FieldElement> {
        assert!(z.field.same(&self.target), "descent of foreign element");
        let p = self.target.characteristic();
        let cand = if self.source.degree() == 1 {
            FieldElement::from_u64(&self.source, z.coeffs[0])
        } else {
            let beta = &self.image.coeffs;
            let i = (1..beta.len()).find(|&i| beta[i] != 0)?;
            let c1 = z.coeffs[i] * mod_inv(beta[i], p) % p;
            let c0 = (z.coeffs[0] + p - c1 * beta[0] % p) % p;
            FieldElement::from_coeffs(&self.source, &[c0, c1]).ok()?
        };
        (self.apply(&cand) == *z).then_some(cand)
    }
}
