//! Routes in the loop-augmented companion graph.
//!
//! For `ε > 0` with `ε·max_i ℓ_ii < 1`, `P = I − εL` is row stochastic. The
//! companion graph has total-arc-weight matrix `M = P/(1+ε)`: a loop of weight
//! `p_ii/(1+ε)` at every vertex, and every original arc with its weight scaled
//! by `ε/(1+ε)`. The total weight of all `i → j` routes is
//! `R = Σ_k M^k = (I − M)⁻¹ = (1 + 1/ε)·Q`.

use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::bottleneck::Relation;
use crate::error::{Error, Result};
use crate::forest::ForestMatrices;
use crate::graph::WeightedMultiDigraph;
use crate::matrix::{geometric_series, invert, DenseMatrix};
use crate::scalar::{Rational, Scalar};

/// Default cap on the number of routes explored by
/// [`route_weight_by_length`].
pub const DEFAULT_ROUTE_CAP: u64 = 1_000_000;

/// A step size `ε` valid for one graph: `ε > 0` and `ε·max_i ℓ_ii < 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Epsilon(Rational);

impl Epsilon {
    pub fn new(value: Rational, graph: &WeightedMultiDigraph) -> Result<Self> {
        check_epsilon(&value, graph)?;
        Ok(Epsilon(value))
    }

    pub fn value(&self) -> &Rational {
        &self.0
    }

    /// `q = 1/(1+ε)`, the weight shrink factor of the companion graph.
    pub fn shrink(&self) -> Rational {
        Rational::one() / (Rational::one() + self.0.clone())
    }

    pub fn halved(&self) -> Epsilon {
        Epsilon(self.0.clone() / Rational::from_integer(2.into()))
    }
}

impl fmt::Display for Epsilon {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

fn check_epsilon(value: &Rational, graph: &WeightedMultiDigraph) -> Result<()> {
    let max_diagonal = graph.max_laplacian_diagonal();
    if !value.is_positive() || value.clone() * max_diagonal.clone() >= Rational::one() {
        return Err(Error::EpsilonOutOfRange {
            epsilon: value.to_string(),
            max_diagonal: max_diagonal.to_string(),
        });
    }
    Ok(())
}

/// `ε = 1/(2·max_i ℓ_ii)`, or `1` when the graph has no arcs.
pub fn choose_epsilon(graph: &WeightedMultiDigraph) -> Epsilon {
    let max_diagonal = graph.max_laplacian_diagonal();
    if max_diagonal.is_zero() {
        Epsilon(Rational::one())
    } else {
        Epsilon(Rational::one() / (max_diagonal * Rational::from_integer(2.into())))
    }
}

/// `P = I − εL`.
pub fn stochastic_matrix<T: Scalar>(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
) -> Result<DenseMatrix<T>> {
    check_epsilon(eps.value(), graph)?;
    let n = graph.vertex_count();
    let p = DenseMatrix::<Rational>::identity(n).sub(&graph.laplacian().scale(eps.value()));
    assert!(
        p.row_sums().iter().all(One::is_one)
            && p.rows().flatten().all(|x| !x.is_negative() && *x <= Rational::one()),
        "I - eps*L is not row stochastic"
    );
    Ok(p.map(T::from_rational))
}

/// `M = P/(1+ε)`, the total-arc-weight matrix of the companion graph.
pub fn companion_matrix<T: Scalar>(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
) -> Result<DenseMatrix<T>> {
    let p = stochastic_matrix::<Rational>(graph, eps)?;
    Ok(p.scale(&eps.shrink()).map(T::from_rational))
}

/// Where an arc of the companion graph comes from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CompanionSource {
    Loop,
    /// Index into the original graph's arc list.
    Arc(usize),
}

#[derive(Debug, Clone, PartialEq)]
pub struct CompanionArc {
    pub tail: usize,
    pub head: usize,
    pub weight: Rational,
    pub source: CompanionSource,
}

/// The arcs of the companion graph, grouped by tail: the loop of each vertex
/// first, then its original arcs in order.
pub fn companion_arcs(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
) -> Result<Vec<Vec<CompanionArc>>> {
    let p = stochastic_matrix::<Rational>(graph, eps)?;
    let shrink = eps.shrink();
    let arc_scale = eps.value().clone() * shrink.clone();
    Ok((0..graph.vertex_count())
        .map(|v| {
            let mut out = vec![CompanionArc {
                tail: v,
                head: v,
                weight: p[(v, v)].clone() * shrink.clone(),
                source: CompanionSource::Loop,
            }];
            out.extend(graph.out_arc_indices(v).iter().map(|&a| {
                let arc = &graph.arcs()[a];
                CompanionArc {
                    tail: v,
                    head: arc.head,
                    weight: arc.weight.clone() * arc_scale.clone(),
                    source: CompanionSource::Arc(a),
                }
            }));
            out
        })
        .collect())
}

/// Sums the weights of all `i → j` routes of exactly `length` arcs by walking
/// them one by one.
pub fn route_weight_by_length(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
    i: usize,
    j: usize,
    length: usize,
    cap: u64,
) -> Result<Rational> {
    graph.check_vertex(i)?;
    graph.check_vertex(j)?;
    let arcs = companion_arcs(graph, eps)?;

    struct Walk<'a> {
        arcs: &'a [Vec<CompanionArc>],
        target: usize,
        explored: u64,
        cap: u64,
        total: Rational,
    }

    impl Walk<'_> {
        fn extend(&mut self, at: usize, remaining: usize, weight: &Rational) -> Result<()> {
            if remaining == 0 {
                self.explored += 1;
                if self.explored > self.cap {
                    return Err(Error::InstanceTooLarge {
                        size: self.explored as u128,
                        cap: self.cap as u128,
                    });
                }
                if at == self.target {
                    self.total += weight.clone();
                }
                return Ok(());
            }
            for arc in &self.arcs[at] {
                self.extend(arc.head, remaining - 1, &(weight.clone() * arc.weight.clone()))?;
            }
            Ok(())
        }
    }

    let mut walk = Walk { arcs: &arcs, target: j, explored: 0, cap, total: Rational::zero() };
    walk.extend(i, length, &Rational::one())?;
    Ok(walk.total)
}

#[derive(Debug, Clone)]
pub struct RouteMatrices<T> {
    pub epsilon: Epsilon,
    /// `P = I − εL`.
    pub stochastic: DenseMatrix<T>,
    /// `M = P/(1+ε)`.
    pub companion: DenseMatrix<T>,
    /// Truncated `Σ_k M^k`.
    pub routes: DenseMatrix<T>,
    pub terms_used: usize,
    /// Guaranteed bound on the max-abs error of `routes`: the geometric tail
    /// plus, in float mode, accumulated rounding.
    pub tail_bound: f64,
}

impl<T: Scalar> RouteMatrices<T> {
    /// Max-abs difference between `routes` and `(1 + 1/ε)·F/f`.
    pub fn forest_gap(&self, forests: &ForestMatrices<Rational>) -> f64 {
        let factor = (Rational::one() + Rational::one() / self.epsilon.value().clone())
            / forests.f.clone();
        let expected = forests.forests.scale(&factor);
        let n = expected.order();
        let gap = DenseMatrix::<f64>::from_fn(n, |i, j| {
            let diff = self.routes[(i, j)]
                .to_rational()
                .map(|r| (r - expected[(i, j)].clone()).to_f64())
                .unwrap_or(f64::INFINITY);
            diff.abs()
        });
        gap.max_abs()
    }

    /// Checks `R ≈ (1 + 1/ε)·F/f` within `tail_bound`; returns the gap.
    pub fn check_against_forests(&self, forests: &ForestMatrices<Rational>) -> Result<f64> {
        let gap = self.forest_gap(forests);
        if gap <= self.tail_bound {
            Ok(gap)
        } else {
            Err(Error::ProportionalityViolated { gap, bound: self.tail_bound })
        }
    }
}

/// Route weights by summing `Σ_k M^k` term by term.
///
/// The series stops at the first term whose largest entry is below
/// `tolerance`. Since every row of `M^k` sums to `q^k` with `q = 1/(1+ε)`,
/// the omitted tail is bounded by `‖last term‖_∞·q/(1−q)`.
pub fn route_matrix<T: Scalar>(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
    tolerance: f64,
    max_terms: usize,
) -> Result<RouteMatrices<T>> {
    let stochastic = stochastic_matrix::<T>(graph, eps)?;
    let companion = companion_matrix::<T>(graph, eps)?;
    let series = geometric_series(&companion, tolerance, max_terms)?;
    let tail_bound = series_error_bound(
        eps,
        graph.vertex_count(),
        series.terms_used,
        series.last_term_norm,
        T::unit_roundoff(),
    );
    Ok(RouteMatrices {
        epsilon: eps.clone(),
        stochastic,
        companion,
        routes: series.sum,
        terms_used: series.terms_used,
        tail_bound,
    })
}

/// Truncation plus first-order rounding bound for the route series.
///
/// Entries of `M` are nonnegative, so each computed power carries a relative
/// error of at most about `k(n+1)u` and each running sum at most `u` per
/// addition. With `q = 1/(1+ε)` and row sums `q^k` this totals
/// `u·((n+1)q/(1−q)² + K/(1−q))`, doubled to absorb second-order terms.
fn series_error_bound(
    eps: &Epsilon,
    n: usize,
    terms_used: usize,
    last_term_norm: f64,
    unit_roundoff: f64,
) -> f64 {
    let q = eps.shrink().to_f64();
    let one_minus_q = 1.0 - q;
    let truncation = last_term_norm * q / one_minus_q;
    let rounding = 2.0
        * unit_roundoff
        * ((n as f64 + 1.0) * q / (one_minus_q * one_minus_q)
            + terms_used as f64 / one_minus_q);
    truncation + rounding
}

/// `R = (I − M)⁻¹`, exact in rational mode.
pub fn route_matrix_closed_form<T: Scalar>(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
) -> Result<DenseMatrix<T>> {
    let m = companion_matrix::<T>(graph, eps)?;
    closed_form_routes(&m)
}

fn closed_form_routes<T: Scalar>(companion: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
    invert(&DenseMatrix::identity(companion.order()).sub(companion))
}

/// How [`route_decomposition`] obtains route matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RouteMethod {
    ClosedForm,
    Series { tolerance: f64, max_terms: usize },
}

impl RouteMethod {
    fn routes<T: Scalar>(&self, companion: &DenseMatrix<T>) -> Result<DenseMatrix<T>> {
        match *self {
            RouteMethod::ClosedForm => closed_form_routes(companion),
            RouteMethod::Series { tolerance, max_terms } => {
                Ok(geometric_series(companion, tolerance, max_terms)?.sum)
            }
        }
    }
}

/// The route weights around one triple `(i, j, k)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RouteDecomposition<T> {
    pub triple: [usize; 3],
    pub r_ij: T,
    pub r_jj: T,
    pub r_jk: T,
    pub r_ik: T,
    /// Weight of `i → j` routes in which `j` appears only at the end.
    pub r_ij1: T,
    /// Weight of `i → k` routes that visit `j`.
    pub r_ijk: T,
    /// Weight of `i → k` routes that avoid `j`.
    pub r_i_notj_k: T,
    /// `j ∈ {i, k}`: the split identities are not asserted.
    pub degenerate: bool,
}

impl<T: Scalar> RouteDecomposition<T> {
    /// `r_ij = r_ij1·r_jj`, `r_ik = r_ijk + r_i¬jk`, `r_ijk = r_ij1·r_jk`,
    /// exactly or within relative `tolerance`.
    pub fn identities_hold(&self, tolerance: f64) -> bool {
        let close = |a: &T, b: &T| {
            if tolerance == 0.0 {
                a == b
            } else {
                (a.clone() - b.clone()).abs().to_f64()
                    <= tolerance * b.abs().to_f64().max(1.0)
            }
        };
        close(&self.r_ij, &(self.r_ij1.clone() * self.r_jj.clone()))
            && close(&self.r_ik, &(self.r_ijk.clone() + self.r_i_notj_k.clone()))
            && close(&self.r_ijk, &(self.r_ij1.clone() * self.r_jk.clone()))
    }

    /// Compares `r_ij·r_jk` against `r_ik·r_jj`.
    pub fn relation(&self) -> Relation {
        let lhs = self.r_ij.clone() * self.r_jk.clone();
        let rhs = self.r_ik.clone() * self.r_jj.clone();
        if T::classify_equal(&lhs, &rhs) {
            Relation::Equal
        } else {
            Relation::StrictlyLess
        }
    }
}

/// Route matrices of the companion graph and of each of its single-vertex
/// deletions, computed once for decomposing many triples.
#[derive(Debug, Clone)]
pub struct RouteTable<T> {
    pub full: DenseMatrix<T>,
    /// `without[j]`: routes of the companion graph with `j` and every arc
    /// touching it removed. Loops keep their weights.
    pub without: Vec<DenseMatrix<T>>,
}

impl<T: Scalar> RouteTable<T> {
    pub fn new(graph: &WeightedMultiDigraph, eps: &Epsilon, method: RouteMethod) -> Result<Self> {
        let m = companion_matrix::<T>(graph, eps)?;
        let full = method.routes(&m)?;
        let without =
            (0..m.order()).map(|j| method.routes(&m.without(j))).collect::<Result<_>>()?;
        Ok(RouteTable { full, without })
    }

    pub fn decompose(&self, i: usize, j: usize, k: usize) -> RouteDecomposition<T> {
        decompose_with(&self.full, &self.without[j], i, j, k)
    }
}

fn decompose_with<T: Scalar>(
    full: &DenseMatrix<T>,
    avoiding_j: &DenseMatrix<T>,
    i: usize,
    j: usize,
    k: usize,
) -> RouteDecomposition<T> {
    let shift = |v: usize| if v > j { v - 1 } else { v };
    // No route avoiding j can start or end at j.
    let r_i_notj_k =
        if i == j || k == j { T::zero() } else { avoiding_j[(shift(i), shift(k))].clone() };
    let r_ij = full[(i, j)].clone();
    let r_jj = full[(j, j)].clone();
    let r_ik = full[(i, k)].clone();
    RouteDecomposition {
        triple: [i, j, k],
        r_ij1: r_ij.clone() / r_jj.clone(),
        r_ijk: r_ik.clone() - r_i_notj_k.clone(),
        r_jk: full[(j, k)].clone(),
        r_ij,
        r_jj,
        r_ik,
        r_i_notj_k,
        degenerate: j == i || j == k,
    }
}

pub fn route_decomposition<T: Scalar>(
    graph: &WeightedMultiDigraph,
    eps: &Epsilon,
    method: RouteMethod,
    i: usize,
    j: usize,
    k: usize,
) -> Result<RouteDecomposition<T>> {
    for v in [i, j, k] {
        graph.check_vertex(v)?;
    }
    let m = companion_matrix::<T>(graph, eps)?;
    let full = method.routes(&m)?;
    let avoiding_j = method.routes(&m.without(j))?;
    Ok(decompose_with(&full, &avoiding_j, i, j, k))
}
