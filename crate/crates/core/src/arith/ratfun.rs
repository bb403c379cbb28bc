//! Exact rational functions in `t` and their Taylor expansions at the origin.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::intpoly::IntPolynomial;
use super::ArithError;

/// `num / den` in lowest terms: primitive gcd removed, common integer
/// content removed, positive leading coefficient on `den`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RationalFunction {
    num: IntPolynomial,
    den: IntPolynomial,
}

impl RationalFunction {
    pub fn numerator(&self) -> &IntPolynomial {
        &self.num
    }

    pub fn denominator(&self) -> &IntPolynomial {
        &self.den
    }

    pub fn inverse(&self) -> Result<Self, ArithError> {
        ratfun_normalize(self.den.clone(), self.num.clone())
    }

    pub fn series(&self, order: usize) -> Result<Vec<BigRational>, ArithError> {
        ratfun_series(&self.num, &self.den, order)
    }
}

pub fn ratfun_normalize(
    num: IntPolynomial,
    den: IntPolynomial,
) -> Result<RationalFunction, ArithError> {
    if den.is_zero() {
        return Err(ArithError::ZeroDenominator);
    }
    if num.is_zero() {
        return Ok(RationalFunction {
            num,
            den: IntPolynomial::one(),
        });
    }
    let g = num.gcd(&den);
    let mut num = num.div_exact(&g).expect("gcd divides numerator");
    let mut den = den.div_exact(&g).expect("gcd divides denominator");
    let c = num_integer::Integer::gcd(&num.content(), &den.content());
    let sign = if den.leading().unwrap().is_negative() {
        -BigInt::one()
    } else {
        BigInt::one()
    };
    let scale = |p: &IntPolynomial| {
        IntPolynomial::new(p.coeffs().iter().map(|x| x * &sign / &c).collect())
    };
    num = scale(&num);
    den = scale(&den);
    Ok(RationalFunction { num, den })
}

/// First `order + 1` Taylor coefficients of `num/den` at `t = 0`.
pub fn ratfun_series(
    num: &IntPolynomial,
    den: &IntPolynomial,
    order: usize,
) -> Result<Vec<BigRational>, ArithError> {
    let d0 = den.coeff(0);
    if d0.is_zero() {
        return Err(ArithError::NoExpansionAtOrigin);
    }
    let d0 = BigRational::from_integer(d0);
    let mut out: Vec<BigRational> = Vec::with_capacity(order + 1);
    for n in 0..=order {
        // den · series = num  ⇒  d0·s_n = num_n − Σ_{k≥1} d_k s_{n−k}
        let mut acc = BigRational::from_integer(num.coeff(n));
        for k in 1..=n.min(den.coeffs().len().saturating_sub(1)) {
            let dk = den.coeff(k);
            if !dk.is_zero() {
                acc -= BigRational::from_integer(dk) * &out[n - k];
            }
        }
        out.push(acc / &d0);
    }
    Ok(out)
}

/// Coefficients of `log f` for a power series with `f_0 = 1`, through
/// the same order as the input.
pub fn series_log(f: &[BigRational]) -> Vec<BigRational> {
    assert!(f.first().map_or(false, |c| c.is_one()), "log needs f(0) = 1");
    let n = f.len();
    let mut l = vec![BigRational::zero(); n];
    // n·L_n = n·f_n − Σ_{k=1}^{n−1} k·L_k·f_{n−k}
    for m in 1..n {
        let mut acc = BigRational::from_integer(BigInt::from(m)) * &f[m];
        for k in 1..m {
            acc -= BigRational::from_integer(BigInt::from(k)) * &l[k] * &f[m - k];
        }
        l[m] = acc / BigRational::from_integer(BigInt::from(m));
    }
    l
}
