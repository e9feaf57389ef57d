//! Spanning converging forests of weighted multidigraphs.
//!
//! The crate computes the in-forest matrix `F = f·(I+L)⁻¹` of a weighted
//! directed multigraph, the route-weight matrix of its loop-augmented
//! companion graph, and checks the graph bottleneck inequality
//! `f_ij·f_jk ≤ f_ik·f_jj` together with its equality condition (every
//! directed path from `i` to `k` passes through `j`).
//!
//! Vertices are 0-based `usize` indices throughout the library. The text and
//! JSON graph formats in [`format`] are 1-based.
//!
//! Every computation is generic over a [`Scalar`]: [`Rational`] gives exact
//! answers and is what the theorem checks use, `f64` is for larger inputs.

pub mod bottleneck;
pub mod error;
pub mod forest;
pub mod format;
pub mod generate;
pub mod graph;
pub mod matrix;
pub mod oracle;
pub mod routes;
pub mod scalar;

pub use bottleneck::{
    check_triple, is_bottleneck, verify_all_triples, verify_undirected, BottleneckReport,
    Relation, Verification, VerificationSummary,
};
pub use error::{Error, Result};
pub use forest::{forest_matrices, proximity, ForestMatrices};
pub use graph::{Arc, Edge, WeightedMultiDigraph};
pub use matrix::{determinant, geometric_series, invert, DenseMatrix, GeometricSeries};
pub use oracle::{enumerate_in_forests, oracle_matrices, InForest, OracleResult, DEFAULT_FOREST_CAP};
pub use routes::{
    choose_epsilon, route_decomposition, route_matrix, route_matrix_closed_form,
    route_weight_by_length, stochastic_matrix, Epsilon, RouteDecomposition, RouteMatrices,
    DEFAULT_ROUTE_CAP,
};
pub use scalar::{Rational, Scalar, ScalarMode};
