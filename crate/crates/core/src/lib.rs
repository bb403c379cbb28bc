//! Supersingular isogeny graphs with level structure: construction over
//! finite fields, Brandt matrices, spectral checks, coverings between
//! levels and exact Ihara zeta functions.

pub mod arith;
pub mod curves;
pub mod enhanced;
pub mod format;
pub mod graph;
pub mod spectral;
pub mod supersingular;
pub mod zeta;

pub use arith::{ArithError, FieldElement, FieldRef, IntPolynomial, RationalFunction};
pub use curves::{CurveError, CurvePoint, EllipticCurve, SubgroupSignature};
pub use enhanced::{
    brandt_matrix, build_isogeny_graph, check_admissible, vertex_count, BrandtMatrix, EnhancedError,
    EnhancedGraph, EnhancedVertex, VertexTable,
};
pub use format::{FormatError, GraphFile};
pub use graph::{
    covering_map_for, euler_characteristic, graph_from_adjacency, is_bipartite, is_connected,
    verify_covering, CoveringMap, CoveringReport, Edge, Graph, GraphError,
};
pub use spectral::{
    adjacency_spectrum, cheeger, gap_monotonicity, is_ramanujan, laplacian_spectrum, CheegerReport,
    MonotonicityReport, RamanujanReport, SpectralError, Spectrum,
};
pub use supersingular::{enumerate_supersingular, SupersingularClassTable, SupersingularError};
pub use zeta::{
    bass_identity, edge_matrix_zeta, ihara_zeta, primitive_cycle_census, reciprocity_check,
    BassReport, Census, ReciprocityCertificate, ZetaError, ZetaFunction,
};
