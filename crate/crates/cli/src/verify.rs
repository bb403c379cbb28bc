//! Property suite run by `verify` on one graph.

use std::path::Path;

use serde_json::{json, Value};
use ssgraph_core::arith::prime::{divisors, sigma1};
use ssgraph_core::graph::Graph;
use ssgraph_core::{
    adjacency_spectrum, bass_identity, cheeger, covering_map_for, euler_characteristic, is_bipartite,
    is_connected, is_ramanujan, laplacian_spectrum, vertex_count, verify_covering, SpectralError,
};

use crate::cache::load_or_build;
use crate::grid::Job;
use crate::CliError;

/// Largest oriented edge count for the edge-matrix determinant.
pub const BASS_EDGE_LIMIT: usize = 30;

#[derive(Default)]
struct Checks {
    entries: Vec<Value>,
    failures: usize,
}

impl Checks {
    fn check(&mut self, name: &str, ok: bool, detail: Value) {
        self.failures += usize::from(!ok);
        self.entries.push(json!({ "check": name, "ok": ok, "detail": detail }));
    }
}

pub struct JobOutcome {
    pub report: Value,
    pub failures: usize,
}

pub fn verify_job(job: &Job, seed: u64, tol: f64, cache: &Path) -> Result<JobOutcome, CliError> {
    let Job { p, l, n } = *job;
    let file = load_or_build(cache, p, l, n, seed)?;
    let g: Graph = file.graph()?;
    let lf = l as f64;
    let k = l + 1;
    let mut c = Checks::default();

    let nu = vertex_count(p, n);
    c.check("vertex_count", g.n() as u64 == nu, json!({ "found": g.n(), "expected": nu }));
    let sym = (0..g.n()).all(|i| (0..g.n()).all(|j| g.adjacency()[i][j] == g.adjacency()[j][i]));
    c.check("symmetric", sym, Value::Null);
    c.check("regular", g.regular_degree() == Some(k), json!({ "degree": k }));
    c.check("connected", is_connected(&g), Value::Null);
    c.check("non_bipartite", !is_bipartite(&g), Value::Null);

    let spec = adjacency_spectrum(&g, 1e-12)?;
    let ram = is_ramanujan(&spec, k, tol);
    c.check(
        "ramanujan",
        ram.ramanujan,
        json!({ "max_nontrivial": ram.max_nontrivial, "margin": ram.margin }),
    );
    let lap = laplacian_spectrum(&spec, k);
    let (lo, hi) = ((lf.sqrt() - 1.0).powi(2), (lf.sqrt() + 1.0).powi(2));
    let window = lap.eigenvalues[1..].iter().all(|&x| x >= lo - tol && x <= hi + tol);
    c.check("laplacian_window", window, json!({ "window": [lo, hi] }));

    let h = g.half_loops() as i64;
    let chi = euler_characteristic(&g);
    let expected_chi = (nu as i64 * (1 - l as i64) - h) / 2;
    c.check("euler_characteristic", chi == expected_chi, json!({ "chi": chi, "half_loops": h }));

    if g.edges().len() <= BASS_EDGE_LIMIT {
        let b = bass_identity(&g);
        c.check("bass_identity", b.generalized, json!({ "literal": b.literal }));
    }

    for m in divisors(n).into_iter().filter(|&m| m < n) {
        let (up, low, map) = covering_map_for(p, l, n, m, seed)?;
        let r = verify_covering(&map, &Graph::from_enhanced(&up)?, &Graph::from_enhanced(&low)?);
        c.check(
            &format!("covering_to_{m}"),
            r.passed() && r.degree == sigma1(n / m),
            json!({ "degree": r.degree }),
        );
    }

    match cheeger(&g, tol) {
        Ok(r) => {
            let upper = (2.0 * k as f64).sqrt() * (lf.sqrt() + 1.0);
            let mut ok = r.lambda1 / 2.0 <= upper + tol && r.lambda1 >= lo - tol;
            if let Some(h) = r.exact_f64() {
                ok &= lo / 2.0 - tol <= h && h <= upper + tol;
                ok &= r.lower_bound - tol <= h && h <= r.upper_bound + tol;
            }
            c.check(
                "cheeger",
                ok,
                json!({ "lambda1": r.lambda1, "exact": r.exact_value.map(|(a, b)| format!("{a}/{b}")) }),
            );
        }
        Err(SpectralError::CheegerUndefined) => {}
        Err(e) => return Err(e.into()),
    }

    let failures = c.failures;
    let report = json!({
        "p": p,
        "l": l,
        "N": n,
        "vertices": g.n(),
        "half_loops": h,
        "odd_diagonal": (0..g.n()).filter(|&i| g.adjacency()[i][i] % 2 == 1).count(),
        "failures": failures,
        "checks": c.entries,
    });
    Ok(JobOutcome { report, failures })
}
