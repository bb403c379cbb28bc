//! Spectra of symmetric matrices by cyclic Jacobi rotations, and the
//! spectral checks built on them: Ramanujan bound, Laplacian window,
//! Cheeger constant and monotonicity of `ρ¹` along level chains.

use rayon::prelude::*;
use thiserror::Error;

use crate::enhanced::{build_isogeny_graph, EnhancedError};
use crate::graph::{Graph, GraphError};

pub const DEFAULT_TOLERANCE: f64 = 1e-12;
pub const MAX_SWEEPS: usize = 100;
/// Largest vertex count for exhaustive Cheeger enumeration.
pub const EXACT_CHEEGER_LIMIT: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SpectralError {
    #[error("matrix is not symmetric at ({i}, {j})")]
    NotSymmetric { i: usize, j: usize },
    #[error("Jacobi iteration did not converge in {sweeps} sweeps (off-diagonal {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },
    #[error("Cheeger constant is undefined for a graph with one vertex")]
    CheegerUndefined,
    #[error("graph is not regular")]
    NotRegular,
    #[error("level chain must be increasing under divisibility: {0:?}")]
    BadChain(Vec<u64>),
    #[error(transparent)]
    Enhanced(#[from] EnhancedError),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq)]
pub struct Spectrum {
    /// Sorted descending for adjacency spectra, ascending for Laplacians.
    pub eigenvalues: Vec<f64>,
    pub matrix_dim: usize,
    /// Off-diagonal Frobenius norm at termination.
    pub residual: f64,
}

/// Eigenvalues of a symmetric matrix, sorted descending. Iterates cyclic
/// sweeps until the off-diagonal norm is at most `tol·‖A‖_F`.
pub fn symmetric_eigenvalues(a: &[Vec<f64>], tol: f64) -> Result<Spectrum, SpectralError> {
    let n = a.len();
    for i in 0..n {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(SpectralError::NotSymmetric { i, j });
            }
        }
    }
    let mut m: Vec<Vec<f64>> = a.to_vec();
    let norm = m.iter().flatten().map(|x| x * x).sum::<f64>().sqrt();
    let off = |m: &[Vec<f64>]| {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[i][j] * m[i][j];
                }
            }
        }
        s.sqrt()
    };
    let mut residual = off(&m);
    let mut sweeps = 0;
    while residual > tol * norm {
        if sweeps == MAX_SWEEPS {
            return Err(SpectralError::NoConvergence { sweeps, residual });
        }
        sweeps += 1;
        for p in 0..n {
            for q in p + 1..n {
                if m[p][q] == 0.0 {
                    continue;
                }
                let theta = (m[q][q] - m[p][p]) / (2.0 * m[p][q]);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let (mkp, mkq) = (m[k][p], m[k][q]);
                    m[k][p] = c * mkp - s * mkq;
                    m[k][q] = s * mkp + c * mkq;
                }
                for k in 0..n {
                    let (mpk, mqk) = (m[p][k], m[q][k]);
                    m[p][k] = c * mpk - s * mqk;
                    m[q][k] = s * mpk + c * mqk;
                }
            }
        }
        residual = off(&m);
    }
    let mut eigenvalues: Vec<f64> = (0..n).map(|i| m[i][i]).collect();
    eigenvalues.sort_by(|x, y| y.total_cmp(x));
    Ok(Spectrum {
        eigenvalues,
        matrix_dim: n,
        residual,
    })
}

fn to_f64(a: &[Vec<u64>]) -> Vec<Vec<f64>> {
    a.iter().map(|r| r.iter().map(|&x| x as f64).collect()).collect()
}

/// Adjacency spectrum of a graph, descending.
pub fn adjacency_spectrum(g: &Graph, tol: f64) -> Result<Spectrum, SpectralError> {
    symmetric_eigenvalues(&to_f64(g.adjacency()), tol)
}

/// `λ = k − ρ` for each adjacency eigenvalue `ρ` of a `k`-regular graph,
/// ascending.
pub fn laplacian_spectrum(s: &Spectrum, k: u64) -> Spectrum {
    let mut eigenvalues: Vec<f64> = s.eigenvalues.iter().map(|r| k as f64 - r).collect();
    eigenvalues.sort_by(|x, y| x.total_cmp(y));
    Spectrum {
        eigenvalues,
        ..s.clone()
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct RamanujanReport {
    pub ramanujan: bool,
    /// `k` occurs more than once.
    pub disconnected: bool,
    /// `−k` occurs.
    pub has_minus_k: bool,
    /// Largest `|λ|` after removing one `k` and (if present) one `−k`;
    /// zero when nothing remains.
    pub max_nontrivial: f64,
    /// `2√(k−1) − max_nontrivial`.
    pub margin: f64,
}

pub fn is_ramanujan(s: &Spectrum, k: u64, tol: f64) -> RamanujanReport {
    let kf = k as f64;
    let mut rest: Vec<f64> = s.eigenvalues.clone();
    let mut take = |target: f64| match rest.iter().position(|x| (x - target).abs() <= tol) {
        Some(i) => {
            rest.remove(i);
            true
        }
        None => false,
    };
    let has_k = take(kf);
    let has_minus_k = take(-kf);
    let disconnected = !has_k || rest.iter().any(|x| (x - kf).abs() <= tol);
    let max_nontrivial = rest.iter().map(|x| x.abs()).fold(0.0, f64::max);
    let bound = 2.0 * (kf - 1.0).sqrt();
    RamanujanReport {
        ramanujan: !disconnected && max_nontrivial <= bound + tol,
        disconnected,
        has_minus_k,
        max_nontrivial,
        margin: bound - max_nontrivial,
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum CheegerMethod {
    Exact,
    SpectralBounds,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheegerReport {
    /// `|∂S| / |S|` as `(numerator, denominator)` when enumerated.
    pub exact_value: Option<(u64, u64)>,
    pub witness_set: Option<Vec<usize>>,
    /// `λ₁/2`.
    pub lower_bound: f64,
    /// `√(2dλ₁)`.
    pub upper_bound: f64,
    pub lambda1: f64,
    pub method: CheegerMethod,
}

impl CheegerReport {
    pub fn exact_f64(&self) -> Option<f64> {
        self.exact_value.map(|(a, b)| a as f64 / b as f64)
    }
}

fn boundary(adj: &[Vec<u64>], mask: u32) -> u64 {
    let n = adj.len();
    let mut b = 0;
    for i in (0..n).filter(|&i| mask >> i & 1 == 1) {
        for j in (0..n).filter(|&j| mask >> j & 1 == 0) {
            b += adj[i][j];
        }
    }
    b
}

/// Cheeger constant of a connected `d`-regular graph: exact by subset
/// enumeration up to [`EXACT_CHEEGER_LIMIT`] vertices, spectral bounds
/// always.
pub fn cheeger(g: &Graph, tol: f64) -> Result<CheegerReport, SpectralError> {
    let n = g.n();
    if n < 2 {
        return Err(SpectralError::CheegerUndefined);
    }
    let d = g.regular_degree().ok_or(SpectralError::NotRegular)?;
    let spec = laplacian_spectrum(&adjacency_spectrum(g, tol)?, d);
    let lambda1 = spec.eigenvalues[1];
    let lower_bound = lambda1 / 2.0;
    let upper_bound = (2.0 * d as f64 * lambda1.max(0.0)).sqrt();
    if n > EXACT_CHEEGER_LIMIT {
        return Ok(CheegerReport {
            exact_value: None,
            witness_set: None,
            lower_bound,
            upper_bound,
            lambda1,
            method: CheegerMethod::SpectralBounds,
        });
    }
    let adj = g.adjacency();
    // (|∂S|, |S|, mask), minimized by ratio then mask
    let better = |x: (u64, u64, u32), y: (u64, u64, u32)| {
        let (l, r) = (x.0 * y.1, y.0 * x.1);
        l < r || (l == r && x.2 < y.2)
    };
    let best = (1u32..(1u32 << n))
        .into_par_iter()
        .filter(|m| m.count_ones() as usize <= n / 2)
        .map(|m| (boundary(adj, m), m.count_ones() as u64, m))
        .reduce_with(|x, y| if better(y, x) { y } else { x })
        .expect("n ≥ 2 admits a subset");
    let g_ = num_integer::gcd(best.0, best.1).max(1);
    Ok(CheegerReport {
        exact_value: Some((best.0 / g_, best.1 / g_)),
        witness_set: Some((0..n).filter(|&i| best.2 >> i & 1 == 1).collect()),
        lower_bound,
        upper_bound,
        lambda1,
        method: CheegerMethod::Exact,
    })
}

/// `ρ¹`: second-largest adjacency eigenvalue, `None` for one vertex.
pub fn rho1(s: &Spectrum) -> Option<f64> {
    s.eigenvalues.get(1).copied()
}

#[derive(Clone, Debug, PartialEq)]
pub struct LevelGap {
    pub level: u64,
    pub vertices: usize,
    pub rho1: Option<f64>,
    /// `2√l − ρ¹`.
    pub gap: Option<f64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct MonotonicityReport {
    pub p: u64,
    pub l: u64,
    pub levels: Vec<LevelGap>,
    pub non_decreasing: bool,
    pub bounded: bool,
}

/// `ρ¹` along a divisibility chain `M₁ | M₂ | …`.
pub fn gap_monotonicity(
    p: u64,
    l: u64,
    chain: &[u64],
    seed: u64,
    tol: f64,
) -> Result<MonotonicityReport, SpectralError> {
    if chain.is_empty() || chain.windows(2).any(|w| w[0] == 0 || w[1] % w[0] != 0 || w[0] == w[1]) {
        return Err(SpectralError::BadChain(chain.to_vec()));
    }
    let bound = 2.0 * (l as f64).sqrt();
    let mut levels = Vec::with_capacity(chain.len());
    for &n in chain {
        let g = Graph::from_enhanced(&build_isogeny_graph(p, l, n, seed)?)?;
        let r = rho1(&adjacency_spectrum(&g, DEFAULT_TOLERANCE)?);
        levels.push(LevelGap {
            level: n,
            vertices: g.n(),
            rho1: r,
            gap: r.map(|r| bound - r),
        });
    }
    let rhos: Vec<f64> = levels.iter().filter_map(|x| x.rho1).collect();
    Ok(MonotonicityReport {
        p,
        l,
        non_decreasing: rhos.windows(2).all(|w| w[1] >= w[0] - tol),
        bounded: rhos.iter().all(|&r| r <= bound + tol),
        levels,
    })
}

/// CSV rows `index,value,within_bound` with bound `2√l`.
pub fn spectrum_csv(s: &Spectrum, l: u64) -> String {
    let bound = 2.0 * (l as f64).sqrt();
    let mut out = String::from("index,value,within_bound\n");
    for (i, v) in s.eigenvalues.iter().enumerate() {
        out.push_str(&format!("{i},{v:.15},{}\n", v.abs() <= bound + 1e-9));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::graph_from_adjacency;
    use proptest::prelude::*;

    fn enhanced(p: u64, l: u64, n: u64) -> Graph {
        Graph::from_enhanced(&build_isogeny_graph(p, l, n, 0).unwrap()).unwrap()
    }

    #[test]
    fn small_spectra() {
        let s = symmetric_eigenvalues(&[vec![6.0]], 1e-12).unwrap();
        assert_eq!(s.eigenvalues, vec![6.0]);
        let s = symmetric_eigenvalues(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
        assert!((s.eigenvalues[0] - 1.0).abs() < 1e-12);
        assert!((s.eigenvalues[1] + 1.0).abs() < 1e-12);
        assert!(matches!(
            symmetric_eigenvalues(&[vec![0.0, 1.0], vec![2.0, 0.0]], 1e-12),
            Err(SpectralError::NotSymmetric { .. })
        ));
    }

    #[test]
    fn laplacian_shifts() {
        let s = symmetric_eigenvalues(&[vec![6.0]], 1e-12).unwrap();
        assert_eq!(laplacian_spectrum(&s, 6).eigenvalues, vec![0.0]);
        let s = symmetric_eigenvalues(&[vec![0.0, 1.0], vec![1.0, 0.0]], 1e-12).unwrap();
        let l = laplacian_spectrum(&s, 1);
        assert!(l.eigenvalues[0].abs() < 1e-12 && (l.eigenvalues[1] - 2.0).abs() < 1e-12);
    }

    #[test]
    fn ramanujan_flags() {
        let one = Spectrum {
            eigenvalues: vec![6.0],
            matrix_dim: 1,
            residual: 0.0,
        };
        assert!(is_ramanujan(&one, 6, 1e-9).ramanujan);
        let two = Spectrum {
            eigenvalues: vec![6.0, 6.0],
            matrix_dim: 2,
            residual: 0.0,
        };
        let r = is_ramanujan(&two, 6, 1e-9);
        assert!(r.disconnected && !r.ramanujan);
        let bip = Spectrum {
            eigenvalues: vec![1.0, -1.0],
            matrix_dim: 2,
            residual: 0.0,
        };
        let r = is_ramanujan(&bip, 1, 1e-9);
        assert!(r.has_minus_k && r.ramanujan);
    }

    /// [[2,2,2],[2,1,3],[2,3,1]] has charpoly x(x−6)(x+2): (0,1,−1) gives −2
    /// and the trace forces 0.
    #[test]
    fn spectrum_at_37() {
        let s = adjacency_spectrum(&enhanced(37, 5, 1), 1e-12).unwrap();
        let expect = [6.0, 0.0, -2.0];
        for (x, y) in s.eigenvalues.iter().zip(expect) {
            assert!((x - y).abs() < 1e-9, "{:?}", s.eigenvalues);
        }
        let bound = 2.0 * 5f64.sqrt();
        assert!(s.eigenvalues[1..].iter().all(|x| x.abs() <= bound));
    }

    fn symmetric_matrix() -> impl Strategy<Value = Vec<Vec<f64>>> {
        (1usize..9).prop_flat_map(|n| {
            proptest::collection::vec(-5i32..6, n * n).prop_map(move |v| {
                let mut a = vec![vec![0.0; n]; n];
                for i in 0..n {
                    for j in i..n {
                        a[i][j] = v[i * n + j] as f64;
                        a[j][i] = a[i][j];
                    }
                }
                a
            })
        })
    }

    proptest! {
        #[test]
        fn trace_and_moment_identities(a in symmetric_matrix()) {
            let n = a.len();
            let s = symmetric_eigenvalues(&a, 1e-12).unwrap();
            prop_assert_eq!(s.eigenvalues.len(), n);
            let tr: f64 = (0..n).map(|i| a[i][i]).sum();
            let sq: f64 = a.iter().flatten().map(|x| x * x).sum();
            prop_assert!((s.eigenvalues.iter().sum::<f64>() - tr).abs() < 1e-9);
            prop_assert!((s.eigenvalues.iter().map(|x| x * x).sum::<f64>() - sq).abs() < 1e-8);
            let m = nalgebra::DMatrix::from_fn(n, n, |i, j| a[i][j]);
            let mut oracle: Vec<f64> = m.symmetric_eigenvalues().iter().copied().collect();
            oracle.sort_by(|x, y| y.total_cmp(x));
            for (x, y) in s.eigenvalues.iter().zip(&oracle) {
                prop_assert!((x - y).abs() < 1e-9);
            }
        }
    }

    #[test]
    fn cheeger_of_k2_and_one_vertex() {
        let k2 = graph_from_adjacency(&[vec![0, 1], vec![1, 0]]).unwrap();
        let r = cheeger(&k2, 1e-12).unwrap();
        assert_eq!(r.exact_value, Some((1, 1)));
        assert_eq!(r.witness_set, Some(vec![0]));
        let one = graph_from_adjacency(&[vec![6]]).unwrap();
        assert_eq!(cheeger(&one, 1e-12), Err(SpectralError::CheegerUndefined));
    }

    #[test]
    fn cheeger_at_37_is_sandwiched() {
        let r = cheeger(&enhanced(37, 5, 1), 1e-12).unwrap();
        let h = r.exact_f64().unwrap();
        let l = 5f64;
        assert!((l.sqrt() - 1.0).powi(2) / 2.0 <= h);
        assert!(h <= 12f64.sqrt() * (l.sqrt() + 1.0));
        assert!(r.lower_bound <= h + 1e-9 && h <= r.upper_bound + 1e-9);
        // one vertex with 4 edges leaving
        assert_eq!(r.exact_value, Some((4, 1)));
    }

    #[test]
    fn monotone_along_chain() {
        let r = gap_monotonicity(13, 5, &[1], 0, 1e-9).unwrap();
        assert!(r.non_decreasing && r.bounded);
        assert_eq!(r.levels[0].rho1, None);
        let r = gap_monotonicity(13, 5, &[1, 2, 6], 0, 1e-9).unwrap();
        assert!(r.non_decreasing && r.bounded);
        assert!((r.levels[1].rho1.unwrap() + 1.0).abs() < 1e-9);
        assert!(gap_monotonicity(13, 5, &[2, 3], 0, 1e-9).is_err());
    }

    #[test]
    fn csv_has_one_row_per_eigenvalue() {
        let s = adjacency_spectrum(&enhanced(13, 5, 2), 1e-12).unwrap();
        let csv = spectrum_csv(&s, 5);
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("0,6.0"));
    }
}
