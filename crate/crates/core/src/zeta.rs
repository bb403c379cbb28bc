//! Ihara zeta functions through the determinant `det[1 − At + Qt²]`, the
//! oriented-edge determinant as an independent oracle, a closed-path
//! census, and the reciprocity check between levels `p` and `q`.
//!
//! With `h` edges fixed by the reversal `J` the zeta function is
//! `Z = (1−t²)^χ (1−t)^h / det_part`; for `h = 0` this is the classical form.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{charpoly, poly_matrix_det, ratfun_normalize, series_log, ArithError, IntPolynomial, RationalFunction};
use crate::enhanced::{build_isogeny_graph, check_admissible, EnhancedError};
use crate::graph::{euler_characteristic, regular_euler_characteristic, Graph, GraphError};

/// Census limits: exhaustive enumeration is only meant for small graphs.
pub const CENSUS_MAX_EDGES: usize = 30;
pub const CENSUS_MAX_LENGTH: usize = 10;
pub const CENSUS_BUDGET: u64 = 2_000_000_000;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ZetaError {
    #[error("census needs at most {CENSUS_MAX_EDGES} oriented edges, got {0}")]
    TooManyEdges(usize),
    #[error("census length {0} exceeds {CENSUS_MAX_LENGTH}")]
    TooLong(usize),
    #[error("census exceeded its budget of {0} path extensions")]
    BudgetExceeded(u64),
    #[error("invalid reciprocity parameters: {0}")]
    BadParameters(String),
    #[error(transparent)]
    Enhanced(#[from] EnhancedError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Arith(#[from] ArithError),
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ZetaFunction {
    pub chi: i64,
    pub half_loops: usize,
    /// `det[1 − At + Qt²]`, `Q = diag(d(x) − 1)`.
    pub det_part: IntPolynomial,
    /// `Z(t)` in lowest terms.
    pub value: RationalFunction,
}

impl ZetaFunction {
    pub fn numerator(&self) -> &IntPolynomial {
        self.value.numerator()
    }

    pub fn denominator(&self) -> &IntPolynomial {
        self.value.denominator()
    }

    /// Taylor coefficients of `Z` through `t^order`.
    pub fn series(&self, order: usize) -> Vec<BigRational> {
        self.value.series(order).expect("Z(0) = 1")
    }

    pub fn export(&self) -> ZetaExport {
        let strs = |p: &IntPolynomial| p.coeffs().iter().map(|c| c.to_string()).collect();
        ZetaExport {
            chi: self.chi,
            half_loops: self.half_loops,
            det_part: strs(&self.det_part),
            numerator: strs(self.numerator()),
            denominator: strs(self.denominator()),
        }
    }
}

/// JSON form of a zeta function; coefficients are decimal strings, lowest
/// degree first.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ZetaExport {
    pub chi: i64,
    pub half_loops: usize,
    pub det_part: Vec<String>,
    pub numerator: Vec<String>,
    pub denominator: Vec<String>,
}

fn one_minus_t2() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 0, -1])
}

/// `poly · (1−t²)^e`, kept as a pair so that negative `e` stays exact.
fn times_power(poly: &IntPolynomial, e: i64) -> (IntPolynomial, IntPolynomial) {
    let f = one_minus_t2().pow(e.unsigned_abs() as u32);
    if e >= 0 {
        (poly * &f, IntPolynomial::one())
    } else {
        (poly.clone(), f)
    }
}

/// `a·(1−t²)^x == b·(1−t²)^y` as polynomials.
fn equal_up_to_power(a: &IntPolynomial, x: i64, b: &IntPolynomial, y: i64) -> bool {
    let m = x.min(y);
    let (a, _) = times_power(a, x - m);
    let (b, _) = times_power(b, y - m);
    a == b
}

/// `det[1 − At + Qt²]`. For a `k`-regular graph this is
/// `Σ cᵢ (1 + (k−1)t²)ⁱ t^{n−i}` from the characteristic polynomial of `A`.
pub fn det_part(g: &Graph) -> IntPolynomial {
    let n = g.n();
    if let Some(k) = g.regular_degree() {
        let c = charpoly(&g.adjacency_i64());
        let s = IntPolynomial::from_i64(&[1, 0, k as i64 - 1]);
        let mut acc = IntPolynomial::zero();
        let mut s_pow = IntPolynomial::one();
        for (i, ci) in c.iter().enumerate() {
            if !ci.is_zero() {
                acc = &acc + &(&s_pow * &IntPolynomial::monomial(ci.clone(), n - i));
            }
            s_pow = &s_pow * &s;
        }
        return acc;
    }
    det_part_by_interpolation(g)
}

/// `det[1 − At + Qt²]` by evaluation and interpolation, for any graph.
pub fn det_part_by_interpolation(g: &Graph) -> IntPolynomial {
    let a = g.adjacency_i64();
    let n = g.n();
    let m: Vec<Vec<IntPolynomial>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let q = if i == j { g.degree(i) as i64 - 1 } else { 0 };
                    let d = i64::from(i == j);
                    IntPolynomial::from_i64(&[d, -a[i][j], q * d])
                })
                .collect()
        })
        .collect();
    poly_matrix_det(&m)
}

pub fn ihara_zeta(g: &Graph) -> ZetaFunction {
    let chi = euler_characteristic(g);
    let h = g.half_loops();
    let det_part = det_part(g);
    let half = IntPolynomial::from_i64(&[1, -1]).pow(h as u32);
    let (num, extra) = times_power(&half, chi);
    let value = ratfun_normalize(num, &det_part * &extra).expect("det_part(0) = 1");
    ZetaFunction {
        chi,
        half_loops: h,
        det_part,
        value,
    }
}

/// `det(1 − tT)` with `T[e][f] = 1` iff `∂₁e = ∂₀f` and `f ≠ Je`; equals `1/Z`.
pub fn edge_matrix_zeta(g: &Graph) -> IntPolynomial {
    let edges = g.edges();
    let inv = g.involution();
    let m: Vec<Vec<IntPolynomial>> = (0..edges.len())
        .map(|e| {
            (0..edges.len())
                .map(|f| {
                    let d = i64::from(e == f);
                    let t = i64::from(edges[e].target == edges[f].source && f != inv[e]);
                    IntPolynomial::from_i64(&[d, -t])
                })
                .collect()
        })
        .collect();
    poly_matrix_det(&m)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BassReport {
    pub edge_det: IntPolynomial,
    /// `det(1 − tT) = (1−t²)^{−χ} det_part`.
    pub literal: bool,
    /// `det(1 − tT)·(1−t)^h = (1−t²)^{−χ} det_part`.
    pub generalized: bool,
}

pub fn bass_identity(g: &Graph) -> BassReport {
    let z = ihara_zeta(g);
    let edge_det = edge_matrix_zeta(g);
    let literal = equal_up_to_power(&edge_det, 0, &z.det_part, -z.chi);
    let lhs = &edge_det * &IntPolynomial::from_i64(&[1, -1]).pow(z.half_loops as u32);
    let generalized = equal_up_to_power(&lhs, 0, &z.det_part, -z.chi);
    BassReport {
        edge_det,
        literal,
        generalized,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Census {
    /// `counts[m]` closed reduced tail-less paths of length `m`; `counts[0] = 0`.
    pub counts: Vec<u64>,
    pub extensions: u64,
}

/// Counts closed paths `e₁…e_m` with `∂₁eᵢ = ∂₀e_{i+1}`, `e_{i+1} ≠ Jeᵢ`,
/// and the same condition between `e_m` and `e₁`, by depth-first search.
pub fn primitive_cycle_census(g: &Graph, max_len: usize) -> Result<Census, ZetaError> {
    let edges = g.edges();
    if edges.len() > CENSUS_MAX_EDGES {
        return Err(ZetaError::TooManyEdges(edges.len()));
    }
    if max_len > CENSUS_MAX_LENGTH {
        return Err(ZetaError::TooLong(max_len));
    }
    let inv = g.involution();
    let mut out: Vec<Vec<usize>> = vec![Vec::new(); g.n()];
    for (i, e) in edges.iter().enumerate() {
        out[e.source].push(i);
    }
    let follows = |e: usize, f: usize| edges[e].target == edges[f].source && f != inv[e];
    let mut counts = vec![0u64; max_len + 1];
    let mut extensions = 0u64;
    let mut stack: Vec<(usize, usize)> = Vec::new();
    for start in 0..edges.len() {
        stack.push((start, 1));
        while let Some((e, len)) = stack.pop() {
            extensions += 1;
            if extensions > CENSUS_BUDGET {
                return Err(ZetaError::BudgetExceeded(CENSUS_BUDGET));
            }
            if follows(e, start) {
                counts[len] += 1;
            }
            if len < max_len {
                for &f in &out[edges[e].target] {
                    if f != inv[e] {
                        stack.push((f, len + 1));
                    }
                }
            }
        }
    }
    Ok(Census { counts, extensions })
}

/// `m·[t^m] log Z` for `m ≤ order`, as exact rationals.
pub fn log_series_counts(z: &ZetaFunction, order: usize) -> Vec<BigRational> {
    series_log(&z.series(order))
        .into_iter()
        .enumerate()
        .map(|(m, c)| c * BigRational::from_integer(BigInt::from(m)))
        .collect()
}

/// Whether the census agrees with `log Z` term by term.
pub fn census_matches(z: &ZetaFunction, census: &Census) -> bool {
    let order = census.counts.len() - 1;
    log_series_counts(z, order)
        .iter()
        .zip(&census.counts)
        .all(|(x, &n)| *x == BigRational::from_integer(BigInt::from(n)))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ReciprocityCertificate {
    pub p: u64,
    pub q: u64,
    pub l: u64,
    /// Vertex counts of `G_p(q)` and `G_q(p)`.
    pub sizes: (usize, usize),
    /// `χ(G_p(q)) − 2χ(G_p(1))` and the same with `p, q` exchanged, for the
    /// regular-graph characteristic `n(2−k)/2`.
    pub chi_differences: (i64, i64),
    /// `(p−1)(q−1)(1−l)/24`.
    pub chi_expected: i64,
    /// `D_{p,1}² D_{q,p} (1−t²)^{e₁} = D_{q,1}² D_{p,q} (1−t²)^{e₂}`.
    pub identity: bool,
    /// Half-loop counts of `G_p(1), G_p(q), G_q(1), G_q(p)`.
    pub half_loops: [usize; 4],
}

impl ReciprocityCertificate {
    pub fn passed(&self) -> bool {
        self.identity
            && self.chi_differences.0 == self.chi_expected
            && self.chi_differences.1 == self.chi_expected
    }

    /// Whether the `(1−t)^h` factors of the full zeta functions cancel in
    /// the same ratio, so that the law also holds for `Z` itself.
    pub fn half_loops_balanced(&self) -> bool {
        let [p1, pq, q1, qp] = self.half_loops.map(|h| h as i64);
        pq - 2 * p1 == qp - 2 * q1
    }
}

/// Compares `Z(G_p(q))/Z(G_p(1))²` with `Z(G_q(p))/Z(G_q(1))²` through
/// their determinant parts and the regular Euler characteristic.
pub fn reciprocity_check(p: u64, q: u64, l: u64, seed: u64) -> Result<ReciprocityCertificate, ZetaError> {
    if p == q {
        return Err(ZetaError::BadParameters(format!("p = q = {p}")));
    }
    check_admissible(p, l, q)?;
    check_admissible(q, l, p)?;
    let graph = |a: u64, n: u64| -> Result<Graph, ZetaError> {
        Ok(Graph::from_enhanced(&build_isogeny_graph(a, l, n, seed)?)?)
    };
    let (gp1, gpq, gq1, gqp) = (graph(p, 1)?, graph(p, q)?, graph(q, 1)?, graph(q, p)?);
    let chi = |g: &Graph| regular_euler_characteristic(g.n() as u64, l + 1);
    let c_p = chi(&gpq) - 2 * chi(&gp1);
    let c_q = chi(&gqp) - 2 * chi(&gq1);
    let [dp1, dpq, dq1, dqp] = [&gp1, &gpq, &gq1, &gqp].map(det_part);
    // Z_pq/Z_p1² = (1−t²)^{c_p} D_p1²/D_pq; cross-multiplied.
    let lhs = &(&dp1 * &dp1) * &dqp;
    let rhs = &(&dq1 * &dq1) * &dpq;
    let identity = equal_up_to_power(&lhs, c_p, &rhs, c_q);
    let expected = (p as i64 - 1) * (q as i64 - 1) * (1 - l as i64) / 24;
    Ok(ReciprocityCertificate {
        p,
        q,
        l,
        sizes: (gpq.n(), gqp.n()),
        chi_differences: (c_p, c_q),
        chi_expected: expected,
        identity,
        half_loops: [&gp1, &gpq, &gq1, &gqp].map(|g| g.half_loops()),
    })
}

/// Whether `(1−t)(1−lt)` divides `det_part`, as it must for a connected
/// `(l+1)`-regular graph.
pub fn has_trivial_factor(det_part: &IntPolynomial, l: u64) -> bool {
    let f = IntPolynomial::from_i64(&[1, -(l as i64 + 1), l as i64]);
    det_part.div_exact(&f).is_some()
}

/// Value of `det_part` at `t = 0`; always 1.
pub fn constant_term(det_part: &IntPolynomial) -> bool {
    det_part.coeff(0).is_one()
}
