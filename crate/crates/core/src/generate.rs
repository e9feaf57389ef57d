//! Seeded graph generators for fixtures and test corpora.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::format::GraphFile;
use crate::graph::{Arc, WeightedMultiDigraph};
use crate::scalar::Rational;

/// Weights `p/q` with `p` and `q` drawn uniformly from `low..=high`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WeightRange {
    pub low: u32,
    pub high: u32,
}

impl WeightRange {
    pub const UNIT: WeightRange = WeightRange { low: 1, high: 1 };

    pub fn new(low: u32, high: u32) -> Result<Self> {
        if low == 0 || low > high {
            return Err(Error::BadParameters(format!("weight range {low}..{high} is empty or not positive")));
        }
        Ok(WeightRange { low, high })
    }

    pub fn sample<R: Rng>(&self, rng: &mut R) -> Rational {
        if self.low == self.high {
            return Rational::from_integer(BigInt::from(self.low));
        }
        let p = rng.random_range(self.low..=self.high);
        let q = rng.random_range(self.low..=self.high);
        Rational::new(BigInt::from(p), BigInt::from(q))
    }
}

impl FromStr for WeightRange {
    type Err = Error;

    /// `"3"` or `"1..5"`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::BadParameters(format!("bad weight range `{s}`, expected `k` or `low..high`"));
        match s.split_once("..") {
            Some((lo, hi)) => {
                let lo = lo.trim().parse().map_err(|_| bad())?;
                let hi = hi.trim().trim_start_matches('=').parse().map_err(|_| bad())?;
                WeightRange::new(lo, hi)
            }
            None => {
                let k = s.trim().parse().map_err(|_| bad())?;
                WeightRange::new(k, k)
            }
        }
    }
}

impl fmt::Display for WeightRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.low == self.high {
            write!(f, "{}", self.low)
        } else {
            write!(f, "{}..{}", self.low, self.high)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphKind {
    /// `1 → 2 → … → n`
    Path,
    /// `1 → 2 → … → n → 1`
    Cycle,
    /// Every ordered pair.
    Complete,
    /// Every ordered pair independently with probability 1/2.
    Random,
}

impl FromStr for GraphKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "path" => Ok(GraphKind::Path),
            "cycle" => Ok(GraphKind::Cycle),
            "complete" => Ok(GraphKind::Complete),
            "random" => Ok(GraphKind::Random),
            other => Err(Error::BadParameters(format!("unknown graph kind `{other}`"))),
        }
    }
}

pub fn rng_from_seed(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// A directed graph file of the given kind. Identical arguments give
/// identical output.
pub fn generate(kind: GraphKind, n: usize, seed: u64, weights: WeightRange) -> Result<GraphFile> {
    if n < 2 {
        return Err(Error::BadParameters(format!("need at least 2 vertices, got {n}")));
    }
    let mut rng = rng_from_seed(seed);
    let pairs: Vec<(usize, usize)> = match kind {
        GraphKind::Path => (0..n - 1).map(|v| (v, v + 1)).collect(),
        GraphKind::Cycle => (0..n).map(|v| (v, (v + 1) % n)).collect(),
        GraphKind::Complete | GraphKind::Random => (0..n)
            .flat_map(|t| (0..n).filter(move |&h| h != t).map(move |h| (t, h)))
            .collect(),
    };
    let mut arcs = Vec::new();
    for (t, h) in pairs {
        if kind == GraphKind::Random && !rng.random_bool(0.5) {
            continue;
        }
        arcs.push(Arc::new(t, h, weights.sample(&mut rng)));
    }
    Ok(GraphFile { directed: true, n, arcs })
}

/// A multidigraph with `n` vertices and up to `max_arcs` arcs; endpoints are
/// uniform over ordered pairs of distinct vertices, so parallel arcs occur.
pub fn random_multidigraph<R: Rng>(
    rng: &mut R,
    n: usize,
    max_arcs: usize,
    weights: WeightRange,
) -> WeightedMultiDigraph {
    let arcs = random_arc_list(rng, n, max_arcs, weights);
    WeightedMultiDigraph::new(n, arcs).expect("generated arcs are valid")
}

/// Undirected multigraph edges, drawn like [`random_multidigraph`].
pub fn random_edges<R: Rng>(rng: &mut R, n: usize, max_edges: usize, weights: WeightRange) -> Vec<Arc> {
    random_arc_list(rng, n, max_edges, weights)
}

fn random_arc_list<R: Rng>(rng: &mut R, n: usize, max_arcs: usize, weights: WeightRange) -> Vec<Arc> {
    assert!(n >= 2, "need at least 2 vertices");
    let count = rng.random_range(0..=max_arcs);
    (0..count)
        .map(|_| {
            let tail = rng.random_range(0..n);
            let head = (tail + rng.random_range(1..n)) % n;
            Arc::new(tail, head, weights.sample(rng))
        })
        .collect()
}
