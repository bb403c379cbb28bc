//! Shared inputs for the criterion benches.

use ssgraph_core::{build_isogeny_graph, Graph};

/// `(p, l, N)` triples timed by the benches, smallest first.
pub const CASES: &[(u64, u64, u64)] = &[(13, 5, 6), (37, 5, 6), (61, 7, 2)];

pub fn graph(p: u64, l: u64, n: u64) -> Graph {
    Graph::from_enhanced(&build_isogeny_graph(p, l, n, 0).expect("admissible case")).expect("valid graph")
}
