//! Determinants of integer and integer-polynomial matrices.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;

use super::intpoly::IntPolynomial;

/// Fraction-free Gaussian elimination (Bareiss). Every division is exact,
/// so all intermediates stay in `Z` and are bounded by minors of the input.
pub fn bareiss_det(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m[k][k].is_zero() {
            match (k + 1..n).find(|&i| !m[i][k].is_zero()) {
                Some(i) => {
                    m.swap(k, i);
                    sign = !sign;
                }
                None => return BigInt::zero(),
            }
        }
        let (top, rest) = m.split_at_mut(k + 1);
        let pivot_row = &top[k];
        let pivot = &pivot_row[k];
        for row in rest.iter_mut() {
            let lead = row[k].clone();
            for j in k + 1..n {
                let v = &row[j] * pivot - &lead * &pivot_row[j];
                row[j] = v / &prev;
            }
            row[k] = BigInt::zero();
        }
        prev = pivot.clone();
    }
    let d = m[n - 1][n - 1].clone();
    if sign {
        -d
    } else {
        d
    }
}

/// Interpolation nodes 0, 1, −1, 2, −2, …
fn nodes(count: usize) -> Vec<i64> {
    (0..count as i64)
        .map(|i| if i % 2 == 1 { (i + 1) / 2 } else { -(i / 2) })
        .collect()
}

/// Newton interpolation through `(xs[i], ys[i])`, expanded to monomial
/// form. Panics if the interpolant has non-integer coefficients, which
/// cannot happen when the data come from an integer polynomial.
pub fn interpolate(xs: &[i64], ys: &[BigInt]) -> IntPolynomial {
    let n = xs.len();
    let mut dd: Vec<BigRational> = ys.iter().cloned().map(BigRational::from_integer).collect();
    for level in 1..n {
        for i in (level..n).rev() {
            let span = BigRational::from_integer(BigInt::from(xs[i] - xs[i - level]));
            dd[i] = (&dd[i] - &dd[i - 1]) / span;
        }
    }
    // Horner on the Newton form: c_{n-1}, then c_i + (t − x_i)·acc
    let mut acc: Vec<BigRational> = vec![dd[n - 1].clone()];
    for i in (0..n - 1).rev() {
        let xi = BigRational::from_integer(BigInt::from(xs[i]));
        let mut next = vec![BigRational::zero(); acc.len() + 1];
        for (k, a) in acc.iter().enumerate() {
            next[k + 1] += a;
            next[k] -= a * &xi;
        }
        next[0] += &dd[i];
        acc = next;
    }
    IntPolynomial::new(
        acc.into_iter()
            .map(|c| {
                assert!(c.is_integer(), "interpolant is not integral");
                c.to_integer()
            })
            .collect(),
    )
}

/// Exact determinant of a square matrix of integer polynomials, by
/// evaluation at `deg + 1` integer points and interpolation. The degree
/// bound is the sum of the row-wise maximal entry degrees.
pub fn poly_matrix_det(m: &[Vec<IntPolynomial>]) -> IntPolynomial {
    let n = m.len();
    if n == 0 {
        return IntPolynomial::one();
    }
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    let bound: usize = m
        .iter()
        .map(|row| row.iter().filter_map(|e| e.degree()).max().unwrap_or(0))
        .sum();
    let xs = nodes(bound + 1);
    let ys: Vec<BigInt> = xs
        .par_iter()
        .map(|&x| {
            let t = BigInt::from(x);
            let mat = m
                .iter()
                .map(|row| row.iter().map(|e| e.eval(&t)).collect())
                .collect();
            bareiss_det(mat)
        })
        .collect();
    interpolate(&xs, &ys)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(c: &[i64]) -> IntPolynomial {
        IntPolynomial::from_i64(c)
    }

    fn cofactor(m: &[Vec<IntPolynomial>]) -> IntPolynomial {
        let n = m.len();
        if n == 1 {
            return m[0][0].clone();
        }
        let mut acc = IntPolynomial::zero();
        for j in 0..n {
            let minor: Vec<Vec<IntPolynomial>> = m[1..]
                .iter()
                .map(|r| {
                    r.iter()
                        .enumerate()
                        .filter(|&(k, _)| k != j)
                        .map(|(_, e)| e.clone())
                        .collect()
                })
                .collect();
            let term = &m[0][j] * &cofactor(&minor);
            acc = if j % 2 == 0 { &acc + &term } else { &acc - &term };
        }
        acc
    }

    #[test]
    fn integer_determinants() {
        let m = |v: &[&[i64]]| -> Vec<Vec<BigInt>> {
            v.iter().map(|r| r.iter().map(|&x| BigInt::from(x)).collect()).collect()
        };
        assert_eq!(bareiss_det(m(&[&[2, 0], &[0, 3]])), BigInt::from(6));
        assert_eq!(bareiss_det(m(&[&[0, 1], &[1, 0]])), BigInt::from(-1));
        assert_eq!(bareiss_det(m(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 9]])), BigInt::zero());
        assert_eq!(bareiss_det(m(&[&[0, 2, 1], &[3, 0, 0], &[1, 1, 4]])), BigInt::from(-21));
    }

    #[test]
    fn small_polynomial_determinants() {
        let d = poly_matrix_det(&[vec![p(&[1, -6, 5])]]);
        assert_eq!(d, p(&[1, -6, 5]));

        let d = poly_matrix_det(&[
            vec![p(&[1, -1]), p(&[])],
            vec![p(&[]), p(&[1, -1])],
        ]);
        assert_eq!(d, p(&[1, -2, 1]));

        let a = p(&[1, -3, 2]);
        let d = poly_matrix_det(&[
            vec![a.clone(), p(&[0, -1])],
            vec![p(&[0, -1]), a.clone()],
        ]);
        assert_eq!(d, &(&a * &a) - &p(&[0, 0, 1]));
    }

    fn entry() -> impl Strategy<Value = IntPolynomial> {
        prop::collection::vec(-9i64..=9, 0..=3).prop_map(|c| IntPolynomial::from_i64(&c))
    }

    fn matrix() -> impl Strategy<Value = Vec<Vec<IntPolynomial>>> {
        (1usize..=4).prop_flat_map(|n| prop::collection::vec(prop::collection::vec(entry(), n), n))
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]
        #[test]
        fn agrees_with_cofactor_expansion(m in matrix()) {
            prop_assert_eq!(poly_matrix_det(&m), cofactor(&m));
        }
    }
}
