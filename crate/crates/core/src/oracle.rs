//! Brute-force enumeration of spanning converging forests (in-forests).
//!
//! Every vertex either is a root or keeps exactly one of its outgoing arcs.
//! Each such choice vector whose chosen arcs contain no directed cycle is an
//! in-forest; the tree a vertex belongs to is found by following chosen arcs
//! until a root is reached. Parallel arcs are distinct choices, so they give
//! distinct forests.
//!
//! This module only sums weights over enumerated forests. It never touches
//! the elimination routines in [`crate::matrix`], which lets it serve as the
//! reference the algebraic forest matrices are tested against.

use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::graph::WeightedMultiDigraph;
use crate::matrix::DenseMatrix;
use crate::scalar::Rational;

/// Default cap on the number of choice vectors, `Π_v (od(v) + 1)`.
pub const DEFAULT_FOREST_CAP: u128 = 10_000_000;

/// One in-forest. `choice[v]` is `None` when `v` is a root, otherwise the
/// index (into the graph's arc list) of the single arc `v` keeps.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InForest {
    pub choice: Vec<Option<usize>>,
    pub weight: Rational,
}

impl InForest {
    pub fn roots(&self) -> impl Iterator<Item = usize> + '_ {
        self.choice.iter().enumerate().filter(|(_, c)| c.is_none()).map(|(v, _)| v)
    }

    pub fn arc_count(&self) -> usize {
        self.choice.iter().filter(|c| c.is_some()).count()
    }

    /// Root of the tree containing `v`.
    pub fn root_of(&self, graph: &WeightedMultiDigraph, mut v: usize) -> usize {
        while let Some(a) = self.choice[v] {
            v = graph.arcs()[a].head;
        }
        v
    }
}

/// Streams every in-forest of a graph, the arcless forest first.
pub struct InForests<'g> {
    graph: &'g WeightedMultiDigraph,
    // Odometer over per-vertex options: 0 = root, d = d-th outgoing arc.
    digits: Vec<usize>,
    done: bool,
}

pub fn enumerate_in_forests(graph: &WeightedMultiDigraph, cap: u128) -> Result<InForests<'_>> {
    let size = choice_space(graph);
    if size > cap {
        return Err(Error::InstanceTooLarge { size, cap });
    }
    Ok(InForests { graph, digits: vec![0; graph.vertex_count()], done: false })
}

/// `Π_v (od(v) + 1)`, saturating.
pub fn choice_space(graph: &WeightedMultiDigraph) -> u128 {
    (0..graph.vertex_count())
        .map(|v| graph.out_arc_indices(v).len() as u128 + 1)
        .fold(1u128, |acc, d| acc.saturating_mul(d))
}

impl InForests<'_> {
    fn advance(&mut self) {
        for v in 0..self.digits.len() {
            if self.digits[v] < self.graph.out_arc_indices(v).len() {
                self.digits[v] += 1;
                return;
            }
            self.digits[v] = 0;
        }
        self.done = true;
    }

    fn current(&self) -> Vec<Option<usize>> {
        self.digits
            .iter()
            .enumerate()
            .map(|(v, &d)| (d > 0).then(|| self.graph.out_arc_indices(v)[d - 1]))
            .collect()
    }
}

/// True when following the chosen arcs from every vertex reaches a root.
fn is_acyclic(graph: &WeightedMultiDigraph, choice: &[Option<usize>]) -> bool {
    const UNSEEN: u8 = 0;
    const ON_PATH: u8 = 1;
    const FINISHED: u8 = 2;
    let mut state = vec![UNSEEN; choice.len()];
    let mut path = Vec::new();
    for start in 0..choice.len() {
        let mut v = start;
        while state[v] == UNSEEN {
            state[v] = ON_PATH;
            path.push(v);
            match choice[v] {
                Some(a) => v = graph.arcs()[a].head,
                None => break,
            }
        }
        if state[v] == ON_PATH && choice[v].is_some() {
            return false;
        }
        for u in path.drain(..) {
            state[u] = FINISHED;
        }
    }
    true
}

impl Iterator for InForests<'_> {
    type Item = InForest;

    fn next(&mut self) -> Option<InForest> {
        while !self.done {
            let choice = self.current();
            self.advance();
            if is_acyclic(self.graph, &choice) {
                let weight = choice
                    .iter()
                    .flatten()
                    .fold(Rational::one(), |w, &a| w * self.graph.arcs()[a].weight.clone());
                return Some(InForest { choice, weight });
            }
        }
        None
    }
}

/// Forest weights assembled directly from the enumeration.
#[derive(Debug, Clone, PartialEq)]
pub struct OracleResult {
    /// Total weight of all in-forests.
    pub f: Rational,
    /// Entry `(i, j)`: total weight of in-forests with `i` in a tree rooted at `j`.
    pub forests: DenseMatrix<Rational>,
    pub forest_count: u64,
}

pub fn oracle_matrices(graph: &WeightedMultiDigraph, cap: u128) -> Result<OracleResult> {
    let n = graph.vertex_count();
    let mut f = Rational::zero();
    let mut forests = DenseMatrix::<Rational>::zeros(n);
    let mut forest_count = 0;
    for forest in enumerate_in_forests(graph, cap)? {
        for i in 0..n {
            let root = forest.root_of(graph, i);
            forests[(i, root)] = forests[(i, root)].clone() + forest.weight.clone();
        }
        f += forest.weight;
        forest_count += 1;
    }
    Ok(OracleResult { f, forests, forest_count })
}
