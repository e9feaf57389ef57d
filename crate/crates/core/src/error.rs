use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

/// Errors raised by graph construction, linear algebra and verification.
///
/// Vertex numbers carried by the variants are 0-based; `Display` prints them
/// 1-based to match the external file formats.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("arc {tail}->{tail} is a loop", tail = .vertex + 1)]
    LoopArc { vertex: usize },

    #[error("arc {}->{} has non-positive weight {weight}", .tail + 1, .head + 1)]
    NonPositiveWeight { tail: usize, head: usize, weight: String },

    #[error("vertex {} is outside 1..={n}", .vertex + 1)]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("a graph needs at least 2 vertices, got {0}")]
    TooFewVertices(usize),

    #[error("matrix is singular")]
    SingularMatrix,

    #[error("matrix is not square ({rows} rows, row {row} has {cols} entries)")]
    NotSquare { rows: usize, row: usize, cols: usize },

    #[error("geometric series did not converge within {terms} terms (last term norm {norm:e})")]
    NotConverged { terms: usize, norm: f64 },

    #[error("instance too large: {size} exceeds the cap of {cap}")]
    InstanceTooLarge { size: u128, cap: u128 },

    #[error("epsilon {epsilon} violates 0 < epsilon * max_i l_ii < 1 (max l_ii = {max_diagonal})")]
    EpsilonOutOfRange { epsilon: String, max_diagonal: String },

    #[error("route matrix deviates from the scaled forest matrix by {gap:e}, above the bound {bound:e}")]
    ProportionalityViolated { gap: f64, bound: f64 },

    #[error("triple ({}, {}, {}) contradicts the bottleneck theorem: {detail}", .triple[0] + 1, .triple[1] + 1, .triple[2] + 1)]
    InconsistentWithTheorem { triple: [usize; 3], detail: String },

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("bad parameters: {0}")]
    BadParameters(String),
}
