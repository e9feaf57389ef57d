//! The in-forest matrix `F`, the proximity matrix `Q = (I+L)⁻¹` and the total
//! forest weight `f = det(I+L)`.

use crate::graph::WeightedMultiDigraph;
use crate::matrix::{determinant, invert, DenseMatrix};
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, Clone, PartialEq)]
pub struct ForestMatrices<T> {
    /// Total weight of all in-forests.
    pub f: T,
    /// `f_ij`: weight of in-forests in which `i` lies in a tree rooted at `j`.
    pub forests: DenseMatrix<T>,
    /// `q_ij = f_ij / f`.
    pub proximity: DenseMatrix<T>,
    pub mode: ScalarMode,
}

/// Computes `f`, `F` and `Q` from the Laplacian.
///
/// # Panics
///
/// If `I + L` turns out singular. It never is for a valid graph (its rows are
/// strictly diagonally dominant), so a failure here means a bug.
pub fn forest_matrices<T: Scalar>(graph: &WeightedMultiDigraph) -> ForestMatrices<T> {
    let n = graph.vertex_count();
    let shifted = DenseMatrix::<T>::identity(n).add(&graph.laplacian::<T>());
    let f = determinant(&shifted);
    let proximity = invert(&shifted).expect("I + L is nonsingular for every multidigraph");
    let forests = proximity.scale(&f);
    ForestMatrices { f, forests, proximity, mode: T::MODE }
}

pub fn proximity<T: Scalar>(graph: &WeightedMultiDigraph) -> DenseMatrix<T> {
    forest_matrices(graph).proximity
}
