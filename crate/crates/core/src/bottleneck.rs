//! The graph bottleneck inequality `f_ij·f_jk ≤ f_ik·f_jj` and its equality
//! condition: equality holds exactly when every directed path from `i` to `k`
//! contains `j`.
//!
//! Conventions for triples touching the same vertex twice:
//!
//! * `j = i` or `j = k`: every path contains its endpoints, so `j` is a
//!   bottleneck and the relation degenerates to an identity.
//! * `i = k ≠ j`: the zero-length path from `i` to itself avoids `j`, so `j`
//!   is never a bottleneck and the inequality is strict.

use std::fmt;

use crate::error::{Error, Result};
use crate::forest::{forest_matrices, ForestMatrices};
use crate::graph::{Edge, WeightedMultiDigraph};
use crate::scalar::{Scalar, ScalarMode};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Relation {
    Equal,
    StrictlyLess,
}

impl fmt::Display for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Relation::Equal => f.write_str("equal"),
            Relation::StrictlyLess => f.write_str("strict"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct BottleneckReport<T> {
    pub triple: [usize; 3],
    /// `f_ij·f_jk`
    pub lhs: T,
    /// `f_ik·f_jj`
    pub rhs: T,
    pub relation: Relation,
    /// Every directed path from `i` to `k` contains `j`.
    pub separator: bool,
    /// `relation == Equal` exactly when `separator`.
    pub consistent: bool,
    /// `j ∈ {i, k}` or `i = k`.
    pub degenerate: bool,
}

/// Whether every directed path from `i` to `k` contains `j`.
pub fn is_bottleneck(graph: &WeightedMultiDigraph, i: usize, j: usize, k: usize) -> Result<bool> {
    for v in [i, j, k] {
        graph.check_vertex(v)?;
    }
    if j == i || j == k {
        return Ok(true);
    }
    if i == k {
        return Ok(false);
    }
    Ok(!graph.reachable(i, Some(j))?[k])
}

/// Builds the report for one ordered triple.
///
/// In exact mode a report that violates the theorem is turned into
/// [`Error::InconsistentWithTheorem`]; in float mode it is returned with
/// `consistent = false`.
pub fn check_triple<T: Scalar>(
    forests: &ForestMatrices<T>,
    graph: &WeightedMultiDigraph,
    i: usize,
    j: usize,
    k: usize,
) -> Result<BottleneckReport<T>> {
    let separator = is_bottleneck(graph, i, j, k)?;
    let f = &forests.forests;
    let lhs = f[(i, j)].clone() * f[(j, k)].clone();
    let rhs = f[(i, k)].clone() * f[(j, j)].clone();
    let relation =
        if T::classify_equal(&lhs, &rhs) { Relation::Equal } else { Relation::StrictlyLess };
    let consistent = (relation == Relation::Equal) == separator;
    let report = BottleneckReport {
        triple: [i, j, k],
        degenerate: j == i || j == k || i == k,
        lhs,
        rhs,
        relation,
        separator,
        consistent,
    };
    if T::MODE == ScalarMode::Exact {
        if report.lhs > report.rhs {
            return Err(Error::InconsistentWithTheorem {
                triple: report.triple,
                detail: format!("lhs {} exceeds rhs {}", report.lhs, report.rhs),
            });
        }
        if !report.consistent {
            return Err(Error::InconsistentWithTheorem {
                triple: report.triple,
                detail: format!(
                    "relation is {} but separator is {}",
                    report.relation, report.separator
                ),
            });
        }
    }
    Ok(report)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct VerificationSummary {
    pub triples: usize,
    pub equal: usize,
    pub strict: usize,
    pub degenerate: usize,
    pub inconsistent: usize,
}

impl fmt::Display for VerificationSummary {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "triples={} equal={} strict={} inconsistent={}",
            self.triples, self.equal, self.strict, self.inconsistent
        )
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Verification<T> {
    pub forests: ForestMatrices<T>,
    pub reports: Vec<BottleneckReport<T>>,
    pub summary: VerificationSummary,
}

/// Checks every ordered triple in `V³`, in lexicographic `(i, j, k)` order.
pub fn verify_all_triples<T: Scalar>(graph: &WeightedMultiDigraph) -> Result<Verification<T>> {
    let forests = forest_matrices::<T>(graph);
    let n = graph.vertex_count();
    let mut reports = Vec::with_capacity(n * n * n);
    let mut summary = VerificationSummary::default();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                let report = check_triple(&forests, graph, i, j, k)?;
                summary.triples += 1;
                match report.relation {
                    Relation::Equal => summary.equal += 1,
                    Relation::StrictlyLess => summary.strict += 1,
                }
                summary.degenerate += usize::from(report.degenerate);
                summary.inconsistent += usize::from(!report.consistent);
                reports.push(report);
            }
        }
    }
    Ok(Verification { forests, reports, summary })
}

/// The undirected version: doubles every edge into two opposite arcs and
/// checks all triples. Also requires `F` to be symmetric and the separator
/// verdicts to agree with plain undirected reachability.
pub fn verify_undirected<T: Scalar>(n: usize, edges: &[Edge]) -> Result<Verification<T>> {
    let graph = WeightedMultiDigraph::from_undirected(n, edges)?;
    let verification = verify_all_triples::<T>(&graph)?;

    let f = &verification.forests.forests;
    for i in 0..n {
        for j in 0..i {
            let asymmetric = if T::MODE == ScalarMode::Exact {
                f[(i, j)] != f[(j, i)]
            } else {
                (f[(i, j)].clone() - f[(j, i)].clone()).abs().to_f64()
                    > 1e-9 * f[(i, j)].abs().to_f64().max(1.0)
            };
            if asymmetric {
                return Err(Error::InconsistentWithTheorem {
                    triple: [i, j, i],
                    detail: format!("forest matrix not symmetric: {} vs {}", f[(i, j)], f[(j, i)]),
                });
            }
        }
    }

    for report in &verification.reports {
        let [i, j, k] = report.triple;
        if report.separator != undirected_separator(n, edges, i, j, k) {
            return Err(Error::InconsistentWithTheorem {
                triple: report.triple,
                detail: "directed and undirected separator verdicts differ".into(),
            });
        }
    }
    Ok(verification)
}

/// Every undirected path from `i` to `k` contains `j`, computed on the edge
/// list directly with a union-find over edges that avoid `j`.
fn undirected_separator(n: usize, edges: &[Edge], i: usize, j: usize, k: usize) -> bool {
    if j == i || j == k {
        return true;
    }
    if i == k {
        return false;
    }
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(parent: &mut [usize], mut v: usize) -> usize {
        while parent[v] != v {
            parent[v] = parent[parent[v]];
            v = parent[v];
        }
        v
    }
    for e in edges.iter().filter(|e| e.tail != j && e.head != j) {
        let (a, b) = (find(&mut parent, e.tail), find(&mut parent, e.head));
        parent[a] = b;
    }
    find(&mut parent, i) != find(&mut parent, k)
}
