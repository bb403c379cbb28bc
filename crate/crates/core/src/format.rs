//! Canonical JSON files for built graphs. Field elements are coefficient
//! arrays (decimal strings, lowest degree first) relative to the recorded
//! modulus. Loading re-validates the structure before anything is used.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::FieldElement;
use crate::enhanced::{check_admissible, vertex_count, EnhancedError, EnhancedGraph};
use crate::graph::{Edge, Graph, GraphError};
use crate::spectral::Spectrum;
use crate::supersingular::SupersingularClassTable;
use crate::zeta::{ZetaExport, ZetaFunction};

pub const FORMAT_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Error)]
pub enum FormatError {
    #[error("malformed graph file: {0}")]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Parameters(#[from] EnhancedError),
    #[error("expected {expected} vertices, file has {found}")]
    VertexCount { expected: u64, found: usize },
    #[error("adjacency is not a {0}×{0} matrix")]
    Shape(usize),
    #[error("adjacency is not symmetric at ({i}, {j})")]
    Asymmetric { i: usize, j: usize },
    #[error("row {row} sums to {sum}, expected {expected}")]
    RowSum { row: usize, sum: u64, expected: u64 },
    #[error("edge list disagrees with the adjacency matrix")]
    EdgeMismatch,
    #[error("coefficient {0:?} is not a residue mod p")]
    Coefficient(String),
    #[error(transparent)]
    Graph(#[from] GraphError),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metadata {
    pub p: u64,
    pub l: u64,
    #[serde(rename = "N")]
    pub n: u64,
    pub seed: u64,
    pub version: String,
    /// Modulus of `F_{p²}`, monic, lowest degree first.
    pub base_modulus: Vec<String>,
    /// Modulus of the field holding the `r`-torsion signatures, per `r | N`.
    pub torsion_moduli: BTreeMap<String, Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SignatureRecord {
    pub order: u64,
    pub xs: Vec<Vec<String>>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexRecord {
    pub class: usize,
    pub j: Vec<String>,
    pub subgroups: Vec<usize>,
    pub level: BTreeMap<String, SignatureRecord>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EdgeRecord {
    pub source: usize,
    pub target: usize,
    pub kernel: usize,
    /// Index of the reversed edge; equal to its own index for a half-loop.
    pub reversal: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GraphFile {
    pub metadata: Metadata,
    pub vertices: Vec<VertexRecord>,
    pub adjacency: Vec<Vec<u64>>,
    pub edges: Vec<EdgeRecord>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub spectrum: Option<Vec<f64>>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub zeta: Option<ZetaExport>,
}

fn strs(xs: &[u64]) -> Vec<String> {
    xs.iter().map(u64::to_string).collect()
}

fn element(x: &FieldElement) -> Vec<String> {
    strs(x.coeffs())
}

impl GraphFile {
    pub fn from_graph(g: &EnhancedGraph, classes: &SupersingularClassTable, seed: u64) -> Self {
        let t = &g.table;
        let mut torsion_moduli = BTreeMap::new();
        let vertices = t
            .vertices()
            .iter()
            .map(|v| {
                let level = v
                    .level_signature
                    .iter()
                    .map(|(r, sig)| {
                        if let Some(x) = sig.xs.first() {
                            torsion_moduli
                                .entry(r.to_string())
                                .or_insert_with(|| strs(x.field().modulus()));
                        }
                        let rec = SignatureRecord {
                            order: sig.order,
                            xs: sig.xs.iter().map(element).collect(),
                        };
                        (r.to_string(), rec)
                    })
                    .collect();
                VertexRecord {
                    class: v.class_index,
                    j: element(&classes.classes()[v.class_index].j),
                    subgroups: v.subgroups.clone(),
                    level,
                }
            })
            .collect();
        let edges = g
            .edges
            .iter()
            .zip(&g.involution)
            .map(|(e, &r)| EdgeRecord {
                source: e.source,
                target: e.target,
                kernel: e.kernel,
                reversal: r,
            })
            .collect();
        GraphFile {
            metadata: Metadata {
                p: t.p,
                l: t.l,
                n: t.n,
                seed,
                version: FORMAT_VERSION.to_string(),
                base_modulus: strs(classes.field().modulus()),
                torsion_moduli,
            },
            vertices,
            adjacency: g.brandt.entries().to_vec(),
            edges,
            spectrum: None,
            zeta: None,
        }
    }

    pub fn with_spectrum(mut self, s: &Spectrum) -> Self {
        self.spectrum = Some(s.eigenvalues.clone());
        self
    }

    pub fn with_zeta(mut self, z: &ZetaFunction) -> Self {
        self.zeta = Some(z.export());
        self
    }

    /// Pretty-printed JSON with a trailing newline. Struct fields and maps
    /// serialize in a fixed order, so equal files give equal bytes.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("graph files serialize");
        s.push('\n');
        s
    }

    pub fn from_json(s: &str) -> Result<Self, FormatError> {
        let f: GraphFile = serde_json::from_str(s)?;
        f.validate()?;
        Ok(f)
    }

    /// Parameters, `ν(N)`, symmetry, row sums, coefficient ranges, and the
    /// edge list against the adjacency and reversal.
    pub fn validate(&self) -> Result<(), FormatError> {
        let m = &self.metadata;
        check_admissible(m.p, m.l, m.n)?;
        let expected = vertex_count(m.p, m.n);
        let n = self.vertices.len();
        if n as u64 != expected {
            return Err(FormatError::VertexCount { expected, found: n });
        }
        if self.adjacency.len() != n || self.adjacency.iter().any(|r| r.len() != n) {
            return Err(FormatError::Shape(n));
        }
        for i in 0..n {
            for j in 0..i {
                if self.adjacency[i][j] != self.adjacency[j][i] {
                    return Err(FormatError::Asymmetric { i, j });
                }
            }
            let sum = self.adjacency[i].iter().sum();
            if sum != m.l + 1 {
                return Err(FormatError::RowSum {
                    row: i,
                    sum,
                    expected: m.l + 1,
                });
            }
        }
        let residue = |c: &String| match c.parse::<u64>() {
            Ok(x) if x < m.p => Ok(()),
            _ => Err(FormatError::Coefficient(c.clone())),
        };
        for v in &self.vertices {
            v.j.iter().try_for_each(residue)?;
            for sig in v.level.values() {
                sig.xs.iter().flatten().try_for_each(residue)?;
            }
        }
        let g = self.graph()?;
        if g.adjacency() != self.adjacency.as_slice() {
            return Err(FormatError::EdgeMismatch);
        }
        Ok(())
    }

    /// The graph on the stored edges, tagged `source·(l+1) + kernel`.
    pub fn graph(&self) -> Result<Graph, FormatError> {
        let k = self.metadata.l + 1;
        let edges = self
            .edges
            .iter()
            .map(|e| Edge {
                source: e.source,
                target: e.target,
                tag: e.source as u64 * k + e.kernel as u64,
            })
            .collect();
        let inv = self.edges.iter().map(|e| e.reversal).collect();
        Ok(Graph::from_edges(self.vertices.len(), edges, inv)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::enhanced::build_isogeny_graph;
    use crate::supersingular::enumerate_supersingular;

    fn file(p: u64, l: u64, n: u64, seed: u64) -> GraphFile {
        let g = build_isogeny_graph(p, l, n, seed).unwrap();
        GraphFile::from_graph(&g, &enumerate_supersingular(p, seed).unwrap(), seed)
    }

    #[test]
    fn round_trip() {
        for (p, l, n) in [(13, 5, 1), (13, 5, 6), (37, 7, 2)] {
            let f = file(p, l, n, 0);
            let s = f.to_json();
            let g = GraphFile::from_json(&s).unwrap();
            assert_eq!(g, f);
            assert_eq!(g.to_json(), s);
        }
        assert_eq!(file(13, 5, 1, 0).adjacency, vec![vec![6]]);
    }

    #[test]
    fn same_seed_same_bytes() {
        assert_eq!(file(37, 5, 2, 7).to_json(), file(37, 5, 2, 7).to_json());
    }

    #[test]
    fn rejects_tampering() {
        let f = file(13, 5, 2, 0);
        let mut bad = f.clone();
        bad.adjacency[1][0] += 1;
        assert!(matches!(bad.validate(), Err(FormatError::Asymmetric { .. })));
        let mut bad = f.clone();
        bad.vertices.pop();
        assert!(matches!(bad.validate(), Err(FormatError::VertexCount { .. })));
        let mut bad = f.clone();
        bad.edges[0].reversal = 0;
        assert!(bad.validate().is_err());
        let mut bad = f.clone();
        bad.vertices[0].j[0] = "13".into();
        assert!(matches!(bad.validate(), Err(FormatError::Coefficient(_))));
        let mut bad = f;
        bad.metadata.n = 12;
        assert!(matches!(bad.validate(), Err(FormatError::Parameters(_))));
        assert!(matches!(GraphFile::from_json("{"), Err(FormatError::Json(_))));
    }

    #[test]
    fn optional_sections() {
        let f = file(13, 5, 1, 0);
        assert!(!f.to_json().contains("spectrum"));
        let g = f.graph().unwrap();
        let z = crate::zeta::ihara_zeta(&g);
        let s = f.clone().with_zeta(&z).to_json();
        assert!(s.contains("\"det_part\""));
        let back = GraphFile::from_json(&s).unwrap();
        assert_eq!(back.zeta.unwrap().det_part, vec!["1", "-6", "5"]);
    }
}
