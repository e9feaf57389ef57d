//! Weighted directed multigraphs without loops.

use std::collections::VecDeque;

use num_traits::{Signed, Zero};

use crate::error::{Error, Result};
use crate::matrix::DenseMatrix;
use crate::scalar::{Rational, Scalar};

/// A weighted arc `tail -> head`. Vertices are 0-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Arc {
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
}

impl Arc {
    pub fn new(tail: usize, head: usize, weight: Rational) -> Self {
        Arc { tail, head, weight }
    }
}

/// An undirected edge `{u, v}`; same shape as an arc.
pub type Edge = Arc;

/// Weighted directed multigraph on vertices `0..n`.
///
/// Parallel arcs are kept individually in insertion order. Weights are
/// summed only when a matrix is requested.
#[derive(Debug, Clone, PartialEq)]
pub struct WeightedMultiDigraph {
    n: usize,
    arcs: Vec<Arc>,
    out_arcs: Vec<Vec<usize>>,
}

impl WeightedMultiDigraph {
    pub fn new(n: usize, arcs: Vec<Arc>) -> Result<Self> {
        if n < 2 {
            return Err(Error::TooFewVertices(n));
        }
        let mut out_arcs = vec![Vec::new(); n];
        for (index, arc) in arcs.iter().enumerate() {
            validate_endpoints(arc, n)?;
            out_arcs[arc.tail].push(index);
        }
        Ok(WeightedMultiDigraph { n, arcs, out_arcs })
    }

    /// Replaces every undirected edge `{u, v}` of weight `w` by the two arcs
    /// `u -> v` and `v -> u`, both of weight `w`.
    pub fn from_undirected(n: usize, edges: &[Edge]) -> Result<Self> {
        let mut arcs = Vec::with_capacity(2 * edges.len());
        for edge in edges {
            validate_endpoints(edge, n)?;
            arcs.push(edge.clone());
            arcs.push(Arc::new(edge.head, edge.tail, edge.weight.clone()));
        }
        Self::new(n, arcs)
    }

    pub fn vertex_count(&self) -> usize {
        self.n
    }

    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    /// Indices into [`arcs`](Self::arcs) of the arcs leaving `v`, in order.
    pub fn out_arc_indices(&self, v: usize) -> &[usize] {
        &self.out_arcs[v]
    }

    pub fn out_degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.out_arcs[v].len())
    }

    pub fn in_degree(&self, v: usize) -> Result<usize> {
        self.check_vertex(v)?;
        Ok(self.arcs.iter().filter(|a| a.head == v).count())
    }

    pub fn check_vertex(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::VertexOutOfRange { vertex: v, n: self.n })
        }
    }

    /// `W`: entry `(i, j)` is the total weight of the arcs `i -> j`.
    pub fn total_weight_matrix<T: Scalar>(&self) -> DenseMatrix<T> {
        let mut w = DenseMatrix::<Rational>::zeros(self.n);
        for arc in &self.arcs {
            w[(arc.tail, arc.head)] = w[(arc.tail, arc.head)].clone() + arc.weight.clone();
        }
        w.map(T::from_rational)
    }

    /// `L = diag(W·1) − W`. Rows sum to zero.
    pub fn laplacian<T: Scalar>(&self) -> DenseMatrix<T> {
        let w = self.total_weight_matrix::<Rational>();
        let mut l = w.map(|x| -x.clone());
        for (i, row_sum) in w.row_sums().into_iter().enumerate() {
            l[(i, i)] = row_sum;
        }
        l.map(T::from_rational)
    }

    /// Largest diagonal entry of the Laplacian (the largest weighted
    /// out-degree).
    pub fn max_laplacian_diagonal(&self) -> Rational {
        self.total_weight_matrix::<Rational>()
            .row_sums()
            .into_iter()
            .fold(Rational::zero(), |a, b| if b > a { b } else { a })
    }

    /// Vertices reachable from `source` along directed paths that never visit
    /// `excluded`. `source` itself is always included. Returned as a
    /// membership mask indexed by vertex.
    pub fn reachable(&self, source: usize, excluded: Option<usize>) -> Result<Vec<bool>> {
        self.check_vertex(source)?;
        if let Some(x) = excluded {
            self.check_vertex(x)?;
            if x == source {
                return Err(Error::BadParameters(format!(
                    "source {} cannot be the excluded vertex",
                    source + 1
                )));
            }
        }
        let mut seen = vec![false; self.n];
        if let Some(x) = excluded {
            // Marking it seen keeps the traversal from entering it.
            seen[x] = true;
        }
        seen[source] = true;
        let mut queue = VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            for &a in &self.out_arcs[v] {
                let head = self.arcs[a].head;
                if !seen[head] {
                    seen[head] = true;
                    queue.push_back(head);
                }
            }
        }
        if let Some(x) = excluded {
            seen[x] = false;
        }
        Ok(seen)
    }

    /// The same graph with each arc weight multiplied by `factor`.
    pub fn scaled(&self, factor: &Rational) -> Result<Self> {
        let arcs = self
            .arcs
            .iter()
            .map(|a| Arc::new(a.tail, a.head, a.weight.clone() * factor.clone()))
            .collect();
        Self::new(self.n, arcs)
    }

    /// The same graph with parallel arcs merged into one arc carrying their
    /// total weight, in order of first appearance.
    pub fn merged_parallel_arcs(&self) -> Self {
        let mut merged: Vec<Arc> = Vec::new();
        for arc in &self.arcs {
            match merged.iter_mut().find(|m| m.tail == arc.tail && m.head == arc.head) {
                Some(m) => m.weight = m.weight.clone() + arc.weight.clone(),
                None => merged.push(arc.clone()),
            }
        }
        Self::new(self.n, merged).expect("merging keeps a valid graph")
    }
}

fn validate_endpoints(arc: &Arc, n: usize) -> Result<()> {
    for v in [arc.tail, arc.head] {
        if v >= n {
            return Err(Error::VertexOutOfRange { vertex: v, n });
        }
    }
    if arc.tail == arc.head {
        return Err(Error::LoopArc { vertex: arc.tail });
    }
    if !arc.weight.is_positive() {
        return Err(Error::NonPositiveWeight {
            tail: arc.tail,
            head: arc.head,
            weight: arc.weight.to_string(),
        });
    }
    Ok(())
}
