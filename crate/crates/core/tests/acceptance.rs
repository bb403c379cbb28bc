//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Three literal claims fail on graphs with half-loops (loops fixed by the
//! orientation reversal, present exactly where the Brandt diagonal is odd):
//! even diagonals (3), `χ = ν(1−l)/2` (5) and the unmodified determinant
//! identity (8). Those lines print FAIL. The run itself fails only when a
//! result differs from the frozen set of half-loop graphs below, or when
//! any other criterion fails.

use std::collections::{BTreeMap, BTreeSet};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use ssgraph_core::arith::prime::sigma1;
use ssgraph_core::enhanced::build_vertex_table;
use ssgraph_core::spectral::spectrum_csv;
use ssgraph_core::zeta::census_matches;
use ssgraph_core::{
    adjacency_spectrum, bass_identity, build_isogeny_graph, check_admissible, cheeger, covering_map_for,
    enumerate_supersingular, euler_characteristic, gap_monotonicity, ihara_zeta, is_bipartite, is_connected,
    is_ramanujan, laplacian_spectrum, primitive_cycle_census, reciprocity_check, verify_covering, EnhancedGraph,
    Graph, GraphFile,
};

const TOL: f64 = 1e-9;

type Key = (u64, u64, u64);

/// Grid graphs with an odd Brandt diagonal entry, found by construction and
/// cross-checked against the two j-invariant oracle and level-26 newform
/// coefficients in the unit tests.
const ODD_DIAGONAL: &[Key] = &[
    (13, 5, 2),
    (13, 5, 3),
    (13, 5, 6),
    (13, 7, 2),
    (37, 5, 1),
    (37, 5, 2),
    (37, 5, 3),
    (37, 5, 6),
    (61, 7, 1),
    (61, 7, 2),
];

struct Built {
    enhanced: EnhancedGraph,
    graph: Graph,
    seconds: f64,
}

struct Suite {
    unexpected: Vec<String>,
}

impl Suite {
    /// Prints the line; `expected` is the outcome the suite was frozen with.
    fn report(&mut self, n: u32, pass: bool, expected: bool, what: &str, detail: String) {
        let verdict = if pass { "PASS" } else { "FAIL" };
        let note = if pass == expected { "" } else { "  [UNEXPECTED]" };
        println!("criterion {n:>2}: {verdict}  {what}: {detail}{note}");
        if pass != expected {
            self.unexpected.push(format!("criterion {n}"));
        }
    }

    fn require(&mut self, cond: bool, msg: String) {
        if !cond {
            println!("    unexpected: {msg}");
            self.unexpected.push(msg);
        }
    }
}

fn fmt_keys<'a>(keys: impl IntoIterator<Item = &'a Key>) -> String {
    let v: Vec<String> = keys.into_iter().map(|(p, l, n)| format!("({p},{l},{n})")).collect();
    if v.is_empty() {
        "none".into()
    } else {
        v.join(" ")
    }
}

fn grid() -> Vec<Key> {
    let mut out = Vec::new();
    for p in [13, 37, 61] {
        for l in [3, 5, 7] {
            for n in [1, 2, 3, 5, 6] {
                if check_admissible(p, l, n).is_ok() {
                    out.push((p, l, n));
                }
            }
        }
    }
    out
}

fn build_all(keys: &[Key]) -> BTreeMap<Key, Built> {
    keys.par_iter()
        .map(|&(p, l, n)| {
            let t = Instant::now();
            let enhanced = build_isogeny_graph(p, l, n, 0).expect("grid graph builds");
            let graph = Graph::from_enhanced(&enhanced).expect("grid graph is valid");
            let seconds = t.elapsed().as_secs_f64();
            ((p, l, n), Built { enhanced, graph, seconds })
        })
        .collect()
}

fn c1(s: &mut Suite) {
    let mut counts = Vec::new();
    let mut ok = true;
    let mut slowest = 0f64;
    for p in [13u64, 37, 61, 73, 97, 109] {
        let t = Instant::now();
        let c = enumerate_supersingular(p, 0).expect("class enumeration").len();
        slowest = slowest.max(t.elapsed().as_secs_f64());
        ok &= c as u64 == (p - 1) / 12;
        counts.push(c.to_string());
    }
    ok &= counts == ["1", "3", "5", "6", "8", "9"];
    s.report(
        1,
        ok,
        true,
        "class numbers",
        format!("{} for p = 13 37 61 73 97 109 (slowest {slowest:.2} s)", counts.join(" ")),
    );
}

fn c2(s: &mut Suite) {
    let mut ok = true;
    let mut checked = 0;
    for p in [13u64, 37] {
        for l in [3u64, 5, 7] {
            for n in [1u64, 2, 3, 6] {
                if check_admissible(p, l, n).is_err() {
                    continue;
                }
                let t = build_vertex_table(p, l, n, 0).expect("vertex table");
                ok &= t.len() as u64 * 12 == (p - 1) * sigma1(n);
                checked += 1;
            }
        }
    }
    s.report(2, ok, true, "vertex counts", format!("ν(N) = (p−1)σ₁(N)/12 on {checked} tables"));
}

fn c3(s: &mut Suite, g: &BTreeMap<Key, Built>) {
    let mut structural = true;
    let mut odd = BTreeSet::new();
    for (&k, b) in g {
        let a = b.graph.adjacency();
        let l = k.1;
        structural &= (0..a.len()).all(|i| (0..a.len()).all(|j| a[i][j] == a[j][i]));
        structural &= a.iter().all(|r| r.iter().sum::<u64>() == l + 1);
        if !b.enhanced.brandt.odd_diagonal().is_empty() {
            odd.insert(k);
        }
    }
    s.require(structural, "symmetry or row sums fail".into());
    let frozen: BTreeSet<Key> = ODD_DIAGONAL.iter().copied().collect();
    s.require(odd == frozen, format!("odd-diagonal set changed: {}", fmt_keys(&odd)));
    s.report(
        3,
        structural && odd.is_empty(),
        false,
        "Brandt structure",
        format!(
            "symmetric with row sums l+1 on all {} graphs; diagonal odd on {}",
            g.len(),
            fmt_keys(&odd)
        ),
    );
}

fn c4(s: &mut Suite, g: &BTreeMap<Key, Built>) {
    let mut ok = true;
    let mut worst_margin = f64::INFINITY;
    let mut slowest = 0f64;
    let mut bad = Vec::new();
    for (&k, b) in g {
        let t = Instant::now();
        let (_, l, _) = k;
        let spec = adjacency_spectrum(&b.graph, 1e-12).expect("spectrum");
        let r = is_ramanujan(&spec, l + 1, TOL);
        let lap = laplacian_spectrum(&spec, l + 1);
        let lf = l as f64;
        let (lo, hi) = ((lf.sqrt() - 1.0).powi(2), (lf.sqrt() + 1.0).powi(2));
        let window = lap.eigenvalues[1..].iter().all(|&x| x >= lo - TOL && x <= hi + TOL);
        let good = is_connected(&b.graph) && !is_bipartite(&b.graph) && r.ramanujan && window;
        if !good {
            bad.push(k);
        }
        ok &= good;
        worst_margin = worst_margin.min(r.margin);
        if b.graph.n() <= 100 {
            slowest = slowest.max(b.seconds + t.elapsed().as_secs_f64());
        }
        if k == (61, 7, 6) {
            let csv = spectrum_csv(&spec, l);
            s.require(csv.lines().count() == spec.eigenvalues.len() + 1, "CSV rows".into());
        }
    }
    s.require(slowest < 1.0, format!("slowest graph took {slowest:.2} s"));
    s.report(
        4,
        ok,
        true,
        "connected, non-bipartite, Ramanujan",
        format!(
            "{} graphs; smallest margin 2√l − max|λ| = {worst_margin:.6}; slowest build+spectrum {slowest:.3} s; failures {}",
            g.len(),
            fmt_keys(&bad)
        ),
    );
}

fn c5(s: &mut Suite, g: &BTreeMap<Key, Built>) {
    let mut literal_bad = BTreeSet::new();
    let mut corrected = true;
    let mut half = BTreeSet::new();
    for (&k, b) in g {
        let (p, l, n) = k;
        let chi = euler_characteristic(&b.graph);
        let nu = b.graph.n() as i64;
        let h = b.graph.half_loops() as i64;
        if h > 0 {
            half.insert(k);
        }
        let mut ok = chi == nu * (1 - l as i64) / 2;
        if n == 1 {
            ok &= chi * 24 == (p as i64 - 1) * (1 - l as i64);
        }
        if !ok {
            literal_bad.insert(k);
        }
        corrected &= 2 * chi == nu * (1 - l as i64) - h;
    }
    let frozen: BTreeSet<Key> = ODD_DIAGONAL.iter().copied().collect();
    s.require(corrected, "χ = (ν(1−l) − h)/2 fails".into());
    s.require(half == frozen, format!("half-loop set changed: {}", fmt_keys(&half)));
    s.require(literal_bad == half, format!("χ failures off the half-loop set: {}", fmt_keys(&literal_bad)));
    s.report(
        5,
        literal_bad.is_empty(),
        false,
        "Euler characteristic",
        format!(
            "χ = ν(1−l)/2 fails on {}; χ = (ν(1−l) − h)/2 holds on all {} graphs",
            fmt_keys(&literal_bad),
            g.len()
        ),
    );
}

fn c6(s: &mut Suite) {
    let mut ok = true;
    let mut lines = Vec::new();
    for (n, m) in [(2u64, 1u64), (6, 2), (6, 1), (3, 1), (6, 3)] {
        let (up, low, map) = covering_map_for(13, 5, n, m, 0).expect("covering");
        let r = verify_covering(&map, &Graph::from_enhanced(&up).unwrap(), &Graph::from_enhanced(&low).unwrap());
        ok &= r.passed() && r.degree == sigma1(n / m);
        lines.push(format!("{n}→{m}: {}", r.degree));
    }
    s.report(6, ok, true, "coverings at (13,5)", format!("fibre sizes {}", lines.join(", ")));
}

fn c7(s: &mut Suite) {
    let mut ok = true;
    let mut seqs = Vec::new();
    for chain in [[1u64, 2, 6], [1, 3, 6]] {
        let r = gap_monotonicity(13, 5, &chain, 0, TOL).expect("chain");
        ok &= r.non_decreasing;
        let rho: Vec<String> = r
            .levels
            .iter()
            .map(|x| x.rho1.map_or("-".into(), |v| format!("{v:.6}")))
            .collect();
        seqs.push(format!("{:?}: {}", chain, rho.join(" ≤ ")));
    }
    s.report(7, ok, true, "ρ¹ monotone", seqs.join("; "));
}

fn c8(s: &mut Suite, g: &BTreeMap<Key, Built>) {
    let small: Vec<(&Key, &Built)> = g.iter().filter(|(_, b)| b.graph.edges().len() <= 30).collect();
    let results: Vec<(Key, bool, bool, bool)> = small
        .par_iter()
        .map(|(&k, b)| {
            let r = bass_identity(&b.graph);
            (k, r.literal, r.generalized, b.graph.half_loops() > 0)
        })
        .collect();
    let literal_bad: BTreeSet<Key> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    let half: BTreeSet<Key> = results.iter().filter(|r| r.3).map(|r| r.0).collect();
    s.require(results.iter().all(|r| r.2), "det(1−tT)(1−t)^h = (1−t²)^{−χ} det_part fails".into());
    s.require(literal_bad == half, format!("literal failures off the half-loop set: {}", fmt_keys(&literal_bad)));
    let mut census_ok = true;
    for k in [(13, 5, 1), (13, 5, 2)] {
        let gr = &g[&k].graph;
        let c = primitive_cycle_census(gr, 6).expect("census");
        census_ok &= census_matches(&ihara_zeta(gr), &c);
    }
    s.require(census_ok, "census disagrees with log Z".into());
    s.report(
        8,
        literal_bad.is_empty() && census_ok,
        false,
        "determinant identity and census",
        format!(
            "{} graphs with ≤ 30 oriented edges; literal identity fails on {} (holds with the (1−t)^h factor on all); census to order 6 matches log Z on (13,5,1) (13,5,2)",
            results.len(),
            fmt_keys(&literal_bad)
        ),
    );
}

fn c9(s: &mut Suite) {
    let mut ok = true;
    let mut parts = Vec::new();
    for (p, q, l) in [(13u64, 37u64, 5u64), (13, 61, 5), (37, 61, 7)] {
        let t = Instant::now();
        let c = reciprocity_check(p, q, l, 0).expect("reciprocity");
        let secs = t.elapsed().as_secs_f64();
        ok &= c.passed() && secs < 60.0;
        parts.push(format!(
            "({p},{q},{l}) sizes {}/{} χ {} in {secs:.2} s",
            c.sizes.0, c.sizes.1, c.chi_expected
        ));
    }
    s.report(9, ok, true, "reciprocity", parts.join("; "));
}

fn c10(s: &mut Suite, g: &BTreeMap<Key, Built>) {
    let results: Vec<(Key, bool, Option<String>)> = g
        .par_iter()
        .filter(|(_, b)| b.graph.n() > 1)
        .map(|(&k, b)| {
            let l = k.1 as f64;
            let r = cheeger(&b.graph, 1e-12).expect("cheeger");
            let upper = (2.0 * (l + 1.0)).sqrt() * (l.sqrt() + 1.0);
            let mut ok = r.lambda1 / 2.0 <= upper + TOL && r.lambda1 >= (l.sqrt() - 1.0).powi(2) - TOL;
            if let Some(h) = r.exact_f64() {
                ok &= (l.sqrt() - 1.0).powi(2) / 2.0 - TOL <= h && h <= upper + TOL;
                ok &= r.lambda1 / 2.0 - TOL <= h && h <= (2.0 * (l + 1.0) * r.lambda1).sqrt() + TOL;
            }
            (k, ok, r.exact_value.map(|(a, b)| format!("{a}/{b}")))
        })
        .collect();
    let exact = results.iter().filter(|r| r.2.is_some()).count();
    let bad: Vec<Key> = results.iter().filter(|r| !r.1).map(|r| r.0).collect();
    s.report(
        10,
        bad.is_empty(),
        true,
        "Cheeger",
        format!(
            "spectral bounds on {} graphs, exact h on {exact} (ν ≤ 24); failures {}",
            results.len(),
            fmt_keys(&bad)
        ),
    );
}

fn c11(s: &mut Suite) {
    let r = gap_monotonicity(13, 5, &[1, 2, 6, 42], 0, TOL).expect("chain");
    let rho: Vec<String> = r
        .levels
        .iter()
        .map(|x| format!("ν={} ρ¹={}", x.vertices, x.rho1.map_or("-".into(), |v| format!("{v:.6}"))))
        .collect();
    let gap = r.levels.last().and_then(|x| x.gap).unwrap_or(f64::NAN);
    s.report(
        11,
        r.non_decreasing && r.bounded,
        true,
        "ρ¹ trend at (13,5), N = 1|2|6|42",
        format!("{}; final gap 2√5 − ρ¹ = {gap:.6}", rho.join(", ")),
    );
}

fn c12(s: &mut Suite, keys: &[Key]) {
    let bad: Vec<Key> = keys
        .par_iter()
        .filter(|&&(p, l, n)| {
            let file = |seed: u64| {
                let g = build_isogeny_graph(p, l, n, seed).unwrap();
                GraphFile::from_graph(&g, &enumerate_supersingular(p, seed).unwrap(), seed)
            };
            let a = file(0);
            let same = a.to_json() == file(0).to_json();
            let other = file(0x5eed_1234);
            !(same && other.adjacency == a.adjacency)
        })
        .copied()
        .collect();
    s.report(
        12,
        bad.is_empty(),
        true,
        "determinism",
        format!(
            "byte-identical files for equal seeds and identical Brandt matrices across seeds on {} graphs; failures {}",
            keys.len(),
            fmt_keys(&bad)
        ),
    );
}

fn main() -> ExitCode {
    let t = Instant::now();
    let keys = grid();
    let graphs = build_all(&keys);
    let mut s = Suite { unexpected: Vec::new() };
    c1(&mut s);
    c2(&mut s);
    c3(&mut s, &graphs);
    c4(&mut s, &graphs);
    c5(&mut s, &graphs);
    c6(&mut s);
    c7(&mut s);
    c8(&mut s, &graphs);
    c9(&mut s);
    c10(&mut s, &graphs);
    c11(&mut s);
    c12(&mut s, &keys);
    println!("acceptance finished in {:.1} s", t.elapsed().as_secs_f64());
    if s.unexpected.is_empty() {
        println!("all results match the recorded expectations (FAIL lines 3, 5, 8 are known half-loop cases)");
        ExitCode::SUCCESS
    } else {
        println!("unexpected results: {}", s.unexpected.join("; "));
        ExitCode::FAILURE
    }
}
