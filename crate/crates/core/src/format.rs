//! Graph files and matrix output.
//!
//! Text format, 1-based vertices:
//!
//! ```text
//! # comment
//! digraph 3
//! 1 2 1/2
//! 2 3 0.75
//! ```
//!
//! A `graph <n>` header makes the arcs undirected edges. Weights are
//! integers, decimals or fractions `p/q`. Blank lines and lines starting with
//! `#` are skipped.
//!
//! JSON format: `{"n": 3, "directed": true, "arcs": [[1, 2, "1/2"], ...]}`,
//! weights as strings (plain JSON numbers are accepted on input).

use std::fmt::{Display, Write as _};

use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::error::{Error, Result};
use crate::graph::{Arc, WeightedMultiDigraph};
use crate::matrix::DenseMatrix;
use crate::scalar::{parse_rational, Scalar};

/// A parsed graph file. `arcs` are 0-based; for an undirected file they are
/// the edges as written.
#[derive(Debug, Clone, PartialEq)]
pub struct GraphFile {
    pub directed: bool,
    pub n: usize,
    pub arcs: Vec<Arc>,
}

#[derive(Serialize, Deserialize)]
struct JsonGraph {
    n: usize,
    directed: bool,
    arcs: Vec<(usize, usize, Value)>,
}

impl GraphFile {
    pub fn from_graph(graph: &WeightedMultiDigraph) -> Self {
        GraphFile { directed: true, n: graph.vertex_count(), arcs: graph.arcs().to_vec() }
    }

    /// Parses either format; input whose first non-blank character is `{` is
    /// read as JSON.
    pub fn parse(input: &str) -> Result<Self> {
        if input.trim_start().starts_with('{') {
            Self::parse_json(input)
        } else {
            Self::parse_text(input)
        }
    }

    pub fn parse_text(input: &str) -> Result<Self> {
        let mut header: Option<(bool, usize)> = None;
        let mut arcs = Vec::new();
        for (index, raw) in input.lines().enumerate() {
            let line_no = index + 1;
            let line = raw.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let fields: Vec<&str> = line.split_whitespace().collect();
            let parse_err = |message: String| Error::Parse { line: line_no, message };
            match header {
                None => {
                    let directed = match fields[0] {
                        "digraph" => true,
                        "graph" => false,
                        other => {
                            return Err(parse_err(format!(
                                "expected `digraph <n>` or `graph <n>`, found `{other}`"
                            )))
                        }
                    };
                    if fields.len() != 2 {
                        return Err(parse_err("header takes exactly one vertex count".into()));
                    }
                    let n = fields[1]
                        .parse::<usize>()
                        .map_err(|_| parse_err(format!("bad vertex count `{}`", fields[1])))?;
                    header = Some((directed, n));
                }
                Some((_, n)) => {
                    if fields.len() != 3 {
                        return Err(parse_err(format!(
                            "expected `<tail> <head> <weight>`, found {} fields",
                            fields.len()
                        )));
                    }
                    let tail = parse_vertex(fields[0], n).map_err(parse_err)?;
                    let head = parse_vertex(fields[1], n).map_err(parse_err)?;
                    let weight = parse_rational(fields[2]).map_err(parse_err)?;
                    arcs.push(Arc::new(tail, head, weight));
                }
            }
        }
        let (directed, n) =
            header.ok_or(Error::Parse { line: 0, message: "missing graph header".into() })?;
        Ok(GraphFile { directed, n, arcs })
    }

    pub fn parse_json(input: &str) -> Result<Self> {
        let json: JsonGraph = serde_json::from_str(input).map_err(|e| Error::Parse {
            line: e.line(),
            message: e.to_string(),
        })?;
        let mut arcs = Vec::with_capacity(json.arcs.len());
        for (index, (tail, head, weight)) in json.arcs.into_iter().enumerate() {
            let parse_err = |message: String| Error::Parse {
                line: 0,
                message: format!("arc {}: {message}", index + 1),
            };
            let weight = match weight {
                Value::String(s) => parse_rational(&s),
                Value::Number(x) => parse_rational(&x.to_string()),
                other => Err(format!("weight must be a string or number, found {other}")),
            }
            .map_err(parse_err)?;
            let tail = parse_vertex(&tail.to_string(), json.n).map_err(parse_err)?;
            let head = parse_vertex(&head.to_string(), json.n).map_err(parse_err)?;
            arcs.push(Arc::new(tail, head, weight));
        }
        Ok(GraphFile { directed: json.directed, n: json.n, arcs })
    }

    /// The digraph this file describes; undirected edges are doubled.
    pub fn to_graph(&self) -> Result<WeightedMultiDigraph> {
        if self.directed {
            WeightedMultiDigraph::new(self.n, self.arcs.clone())
        } else {
            WeightedMultiDigraph::from_undirected(self.n, &self.arcs)
        }
    }

    fn sorted_arcs(&self) -> Vec<&Arc> {
        let mut arcs: Vec<&Arc> = self.arcs.iter().collect();
        arcs.sort_by_key(|a| (a.tail, a.head));
        arcs
    }

    /// Canonical text: header, then arcs sorted by `(tail, head)` with ties in
    /// input order.
    pub fn to_text(&self) -> String {
        let mut out = format!("{} {}\n", if self.directed { "digraph" } else { "graph" }, self.n);
        for arc in self.sorted_arcs() {
            writeln!(out, "{} {} {}", arc.tail + 1, arc.head + 1, arc.weight).unwrap();
        }
        out
    }

    pub fn to_json(&self) -> String {
        let json = JsonGraph {
            n: self.n,
            directed: self.directed,
            arcs: self
                .sorted_arcs()
                .into_iter()
                .map(|a| (a.tail + 1, a.head + 1, Value::String(a.weight.to_string())))
                .collect(),
        };
        serde_json::to_string(&json).expect("graph serializes")
    }
}

fn parse_vertex(field: &str, n: usize) -> std::result::Result<usize, String> {
    match field.parse::<usize>() {
        Ok(v) if (1..=n).contains(&v) => Ok(v - 1),
        Ok(v) => Err(format!("vertex {v} is outside 1..={n}")),
        Err(_) => Err(format!("bad vertex `{field}`")),
    }
}

/// Tab-separated rows, one line per row.
pub fn matrix_tsv<T: Scalar>(m: &DenseMatrix<T>) -> String {
    let mut out = String::new();
    for row in m.rows() {
        let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
        out.push_str(&cells.join("\t"));
        out.push('\n');
    }
    out
}

/// Rows of string-encoded entries, for embedding in JSON output.
pub fn matrix_json<T: Scalar>(m: &DenseMatrix<T>) -> Value {
    Value::Array(
        m.rows()
            .map(|row| Value::Array(row.iter().map(|x| string_value(x)).collect()))
            .collect(),
    )
}

pub fn string_value<T: Display>(x: &T) -> Value {
    Value::String(x.to_string())
}
