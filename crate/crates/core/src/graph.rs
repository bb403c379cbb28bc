//! Finite graphs with oriented edges, endpoint maps and an orientation
//! reversal `J`. `J` may fix a loop: such a half-loop contributes 1 to the
//! diagonal of the adjacency matrix and counts as one geometric edge.

use std::collections::VecDeque;
use std::fmt::Write as _;

use thiserror::Error;

use crate::arith::prime::sigma1;
use crate::enhanced::{build_isogeny_graph, EnhancedError, EnhancedGraph, EnhancedVertex};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("adjacency matrix is not square")]
    NotSquare,
    #[error("adjacency matrix is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("adjacency diagonal entry {i} is odd")]
    OddDiagonal { i: usize },
    #[error("edge {edge} has an endpoint outside the vertex set")]
    BadEndpoint { edge: usize },
    #[error("orientation reversal is not an involution compatible with endpoints at edge {edge}")]
    BadInvolution { edge: usize },
    #[error("orientation reversal fixes edge {edge}, which is not a loop")]
    FixedPass { edge: usize },
    #[error("M = {m} does not divide N = {n}")]
    NotDivisor { m: u64, n: u64 },
    #[error("graphs have different parameters (p, l)")]
    ParameterMismatch,
    #[error("vertex {vertex} has no image in the lower graph")]
    MissingImage { vertex: usize },
    #[error(transparent)]
    Enhanced(#[from] EnhancedError),
}

/// Oriented edge with a stable integer tag.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Edge {
    pub source: usize,
    pub target: usize,
    pub tag: u64,
}

#[derive(Clone, Debug)]
pub struct Graph {
    n: usize,
    adjacency: Vec<Vec<u64>>,
    edges: Vec<Edge>,
    involution: Vec<usize>,
    labels: Option<Vec<EnhancedVertex>>,
}

impl Graph {
    /// Graph on `n` vertices from oriented edges and the reversal
    /// `involution[e]`; checks `J² = 1`, `∂₀J = ∂₁` and that `J` fixes loops
    /// only.
    pub fn from_edges(n: usize, edges: Vec<Edge>, involution: Vec<usize>) -> Result<Self, GraphError> {
        assert_eq!(edges.len(), involution.len(), "one reversal per edge");
        let mut adjacency = vec![vec![0u64; n]; n];
        for (e, edge) in edges.iter().enumerate() {
            if edge.source >= n || edge.target >= n {
                return Err(GraphError::BadEndpoint { edge: e });
            }
            let j = involution[e];
            if j == e && edge.source != edge.target {
                return Err(GraphError::FixedPass { edge: e });
            }
            if j >= edges.len() || involution[j] != e || edges[j].source != edge.target {
                return Err(GraphError::BadInvolution { edge: e });
            }
            adjacency[edge.target][edge.source] += 1;
        }
        Ok(Self {
            n,
            adjacency,
            edges,
            involution,
            labels: None,
        })
    }

    /// The underlying graph of an enhanced isogeny graph; edge tags are
    /// `vertex·(l+1) + kernel index`.
    pub fn from_enhanced(g: &EnhancedGraph) -> Result<Self, GraphError> {
        let deg = g.degree() as usize;
        let edges = g
            .edges
            .iter()
            .map(|e| Edge {
                source: e.source,
                target: e.target,
                tag: (e.source * deg + e.kernel) as u64,
            })
            .collect();
        let mut graph = Self::from_edges(g.table.len(), edges, g.involution.clone())?;
        graph.labels = Some(g.table.vertices().to_vec());
        Ok(graph)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn adjacency(&self) -> &[Vec<u64>] {
        &self.adjacency
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn involution(&self) -> &[usize] {
        &self.involution
    }

    pub fn labels(&self) -> Option<&[EnhancedVertex]> {
        self.labels.as_deref()
    }

    pub fn degree(&self, v: usize) -> u64 {
        self.adjacency.iter().map(|row| row[v]).sum()
    }

    /// Common degree if the graph is regular.
    pub fn regular_degree(&self) -> Option<u64> {
        let k = if self.n == 0 { 0 } else { self.degree(0) };
        (0..self.n).all(|v| self.degree(v) == k).then_some(k)
    }

    /// `|GE| = |E/J|`.
    pub fn geometric_edge_count(&self) -> usize {
        (self.edges.len() + self.half_loops()) / 2
    }

    /// Number of edges fixed by `J`.
    pub fn half_loops(&self) -> usize {
        self.involution.iter().enumerate().filter(|&(e, &j)| e == j).count()
    }

    /// Adjacency as signed integers, for determinant routines.
    pub fn adjacency_i64(&self) -> Vec<Vec<i64>> {
        self.adjacency
            .iter()
            .map(|r| r.iter().map(|&x| x as i64).collect())
            .collect()
    }
}

/// The unique graph with adjacency `a` and no half-loops: `a[i][j]` pairs of
/// oriented edges between `i < j`, and `a[i][i]/2` loops at `i`, each a pair
/// of oriented edges exchanged by `J`.
pub fn graph_from_adjacency(a: &[Vec<u64>]) -> Result<Graph, GraphError> {
    let n = a.len();
    if a.iter().any(|r| r.len() != n) {
        return Err(GraphError::NotSquare);
    }
    for i in 0..n {
        for j in 0..i {
            if a[i][j] != a[j][i] {
                return Err(GraphError::Asymmetric { i, j });
            }
        }
        if a[i][i] % 2 != 0 {
            return Err(GraphError::OddDiagonal { i });
        }
    }
    let mut edges = Vec::new();
    let mut involution = Vec::new();
    for i in 0..n {
        for j in i..n {
            let pairs = if i == j { a[i][i] / 2 } else { a[i][j] };
            for _ in 0..pairs {
                let e = edges.len();
                for (s, t) in [(i, j), (j, i)] {
                    edges.push(Edge {
                        source: s,
                        target: t,
                        tag: edges.len() as u64,
                    });
                }
                involution.extend([e + 1, e]);
            }
        }
    }
    Graph::from_edges(n, edges, involution)
}

/// `χ(G) = |V| − |GE|`.
pub fn euler_characteristic(g: &Graph) -> i64 {
    g.n() as i64 - g.geometric_edge_count() as i64
}

/// `m(2−k)/2` for a `k`-regular graph on `m` vertices, which equals `χ`
/// when there are no half-loops.
pub fn regular_euler_characteristic(m: u64, k: u64) -> i64 {
    m as i64 * (2 - k as i64) / 2
}

fn neighbours(g: &Graph, v: usize) -> impl Iterator<Item = usize> + '_ {
    (0..g.n()).filter(move |&w| g.adjacency()[w][v] > 0)
}

pub fn is_connected(g: &Graph) -> bool {
    if g.n() == 0 {
        return true;
    }
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([0]);
    seen[0] = true;
    let mut count = 1;
    while let Some(v) = queue.pop_front() {
        for w in neighbours(g, v) {
            if !seen[w] {
                seen[w] = true;
                count += 1;
                queue.push_back(w);
            }
        }
    }
    count == g.n()
}

/// Two-colouring test; any loop makes the graph non-bipartite.
pub fn is_bipartite(g: &Graph) -> bool {
    let mut colour: Vec<Option<bool>> = vec![None; g.n()];
    for start in 0..g.n() {
        if colour[start].is_some() {
            continue;
        }
        colour[start] = Some(false);
        let mut queue = VecDeque::from([start]);
        while let Some(v) = queue.pop_front() {
            let c = colour[v].unwrap();
            for w in neighbours(g, v) {
                match colour[w] {
                    None => {
                        colour[w] = Some(!c);
                        queue.push_back(w);
                    }
                    Some(cw) if cw == c => return false,
                    Some(_) => {}
                }
            }
        }
    }
    true
}

/// DOT rendering, one line per geometric edge; half-loops are dashed.
pub fn to_dot(g: &Graph, name: &str) -> String {
    let mut out = format!("graph {name} {{\n");
    for v in 0..g.n() {
        let _ = writeln!(out, "  {v};");
    }
    for (e, edge) in g.edges().iter().enumerate() {
        let j = g.involution()[e];
        if j < e {
            continue;
        }
        let style = if j == e { " [style=dashed]" } else { "" };
        let _ = writeln!(out, "  {} -- {}{style};", edge.source, edge.target);
    }
    out.push_str("}\n");
    out
}

/// A graph map given on vertices and on edge indices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringMap {
    pub vertex_map: Vec<usize>,
    pub edge_map: Vec<usize>,
    pub degree: u64,
}

/// Forgetful map `G_p^(l)(N) → G_p^(l)(M)`: drop the subgroups at primes
/// dividing `N/M` and keep the `l`-kernel.
pub fn covering_map(upper: &EnhancedGraph, lower: &EnhancedGraph) -> Result<CoveringMap, GraphError> {
    let (tu, tl) = (&upper.table, &lower.table);
    if tu.p != tl.p || tu.l != tl.l {
        return Err(GraphError::ParameterMismatch);
    }
    if tu.n % tl.n != 0 {
        return Err(GraphError::NotDivisor { m: tl.n, n: tu.n });
    }
    let keep: Vec<usize> = tu
        .primes()
        .iter()
        .enumerate()
        .filter(|(_, r)| tl.primes().contains(r))
        .map(|(i, _)| i)
        .collect();
    let vertex_map = tu
        .vertices()
        .iter()
        .enumerate()
        .map(|(v, vert)| {
            let subs: Vec<usize> = keep.iter().map(|&i| vert.subgroups[i]).collect();
            tl.find(vert.class_index, &subs)
                .ok_or(GraphError::MissingImage { vertex: v })
        })
        .collect::<Result<Vec<_>, _>>()?;
    let deg = upper.degree() as usize;
    let edge_map = upper
        .edges
        .iter()
        .map(|e| vertex_map[e.source] * deg + e.kernel)
        .collect();
    Ok(CoveringMap {
        vertex_map,
        edge_map,
        degree: sigma1(tu.n / tl.n),
    })
}

/// Builds both levels and the forgetful map between them.
pub fn covering_map_for(
    p: u64,
    l: u64,
    n: u64,
    m: u64,
    seed: u64,
) -> Result<(EnhancedGraph, EnhancedGraph, CoveringMap), GraphError> {
    if m == 0 || n % m != 0 {
        return Err(GraphError::NotDivisor { m, n });
    }
    let upper = build_isogeny_graph(p, l, n, seed)?;
    let lower = build_isogeny_graph(p, l, m, seed)?;
    let c = covering_map(&upper, &lower)?;
    Ok((upper, lower, c))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringReport {
    pub degree: u64,
    /// Edges `e` with `∂ᵢ f(e) ≠ f(∂ᵢ e)` for some `i`.
    pub commutation_failures: Vec<usize>,
    /// Vertices of the lower graph whose fibre size differs from `degree`.
    pub bad_vertex_fibres: Vec<usize>,
    /// Edges of the lower graph whose fibre size differs from `degree`.
    pub bad_edge_fibres: Vec<usize>,
}

impl CoveringReport {
    pub fn passed(&self) -> bool {
        self.commutation_failures.is_empty() && self.bad_vertex_fibres.is_empty() && self.bad_edge_fibres.is_empty()
    }
}

pub fn verify_covering(c: &CoveringMap, upper: &Graph, lower: &Graph) -> CoveringReport {
    let commutation_failures = upper
        .edges()
        .iter()
        .enumerate()
        .filter(|(e, edge)| {
            let img = &lower.edges()[c.edge_map[*e]];
            img.source != c.vertex_map[edge.source] || img.target != c.vertex_map[edge.target]
        })
        .map(|(e, _)| e)
        .collect();
    let mut vf = vec![0u64; lower.n()];
    for &v in &c.vertex_map {
        vf[v] += 1;
    }
    let mut ef = vec![0u64; lower.edges().len()];
    for &e in &c.edge_map {
        ef[e] += 1;
    }
    let bad = |f: Vec<u64>| {
        f.iter()
            .enumerate()
            .filter(|&(_, &s)| s != c.degree)
            .map(|(i, _)| i)
            .collect()
    };
    CoveringReport {
        degree: c.degree,
        commutation_failures,
        bad_vertex_fibres: bad(vf),
        bad_edge_fibres: bad(ef),
    }
}

/// `g ∘ f` for `f: G'' → G'` and `g: G' → G`.
pub fn compose(f: &CoveringMap, g: &CoveringMap) -> CoveringMap {
    CoveringMap {
        vertex_map: f.vertex_map.iter().map(|&v| g.vertex_map[v]).collect(),
        edge_map: f.edge_map.iter().map(|&e| g.edge_map[e]).collect(),
        degree: f.degree * g.degree,
    }
}
