//! Edge-list text format and DOT export.
//!
//! Format: first line `n m`, then `m` lines `u v w` with
//! `0 <= u < v < n` and `w > 0`. `save_edge_list` is the canonical form
//! (edges sorted by `(u, v)`, weights printed as shortest round-trip
//! decimals), so `save(load(x))` is a fixed point.

use super::{GraphError, Vertex, WeightedGraph};
use std::fmt::Write as _;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Malformed { line: usize, msg: String },
    #[error("line {line}: {source}")]
    BadGraph {
        line: usize,
        #[source]
        source: GraphError,
    },
    #[error("expected {expected} edge lines, found {found}")]
    EdgeCount { expected: usize, found: usize },
}

fn malformed(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Malformed {
        line,
        msg: msg.into(),
    }
}

/// Parses the edge-list text format.
///
/// ```
/// let g = copse_core::load_edge_list("3 2\n0 1 1.0\n1 2 2.5\n").unwrap();
/// assert_eq!(g.vertex_count(), 3);
/// assert_eq!(g.edge_weight(1, 2), Some(2.5));
/// ```
pub fn load_edge_list(text: &str) -> Result<WeightedGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let (header_no, header) = lines.next().ok_or_else(|| malformed(1, "empty input"))?;
    let mut it = header.split_whitespace();
    let n: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(header_no, "header must be `n m`"))?;
    let m: usize = it
        .next()
        .and_then(|t| t.parse().ok())
        .ok_or_else(|| malformed(header_no, "header must be `n m`"))?;
    if it.next().is_some() {
        return Err(malformed(header_no, "header must be exactly `n m`"));
    }

    let mut edges: Vec<(Vertex, Vertex, f64)> = Vec::with_capacity(m);
    let mut found = 0;
    for (line_no, line) in lines {
        let mut tok = line.split_whitespace();
        let (u, v, w) = match (tok.next(), tok.next(), tok.next(), tok.next()) {
            (Some(u), Some(v), Some(w), None) => (u, v, w),
            _ => return Err(malformed(line_no, "edge line must be `u v w`")),
        };
        let u: Vertex = u
            .parse()
            .map_err(|_| malformed(line_no, format!("bad vertex id `{u}`")))?;
        let v: Vertex = v
            .parse()
            .map_err(|_| malformed(line_no, format!("bad vertex id `{v}`")))?;
        let w: f64 = w
            .parse()
            .map_err(|_| malformed(line_no, format!("bad weight `{w}`")))?;
        if u >= v {
            return Err(malformed(line_no, format!("require u < v, got {u} {v}")));
        }
        // re-validated by from_edges, but reported here with line context
        if !w.is_finite() || w <= 0.0 {
            return Err(ParseError::BadGraph {
                line: line_no,
                source: GraphError::NonPositiveWeight(u, v, w),
            });
        }
        if v as usize >= n {
            return Err(ParseError::BadGraph {
                line: line_no,
                source: GraphError::VertexOutOfRange(v, n),
            });
        }
        if edges.iter().any(|&(a, b, _)| (a, b) == (u, v)) {
            return Err(ParseError::BadGraph {
                line: line_no,
                source: GraphError::DuplicateEdge(u, v),
            });
        }
        edges.push((u, v, w));
        found += 1;
    }
    if found != m {
        return Err(ParseError::EdgeCount { expected: m, found });
    }
    WeightedGraph::from_edges(n, edges).map_err(|e| ParseError::BadGraph { line: 0, source: e })
}

/// Canonical edge-list serialization.
pub fn save_edge_list(g: &WeightedGraph) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{} {}", g.vertex_count(), g.edge_count());
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "{u} {v} {w}");
    }
    out
}

/// DOT export; `vertex_color(v)` may return a fill-color index used to
/// distinguish groups (e.g. supernodes or clusters).
pub fn to_dot(g: &WeightedGraph, vertex_color: impl Fn(Vertex) -> Option<usize>) -> String {
    const PALETTE: [&str; 10] = [
        "lightblue",
        "lightcoral",
        "lightgreen",
        "gold",
        "plum",
        "lightsalmon",
        "paleturquoise",
        "khaki",
        "lightpink",
        "palegreen",
    ];
    let mut out = String::from("graph {\n  node [style=filled];\n");
    for v in 0..g.vertex_count() as Vertex {
        match vertex_color(v) {
            Some(c) => {
                let _ = writeln!(
                    out,
                    "  {v} [fillcolor={}, label=\"{v}/{c}\"];",
                    PALETTE[c % PALETTE.len()]
                );
            }
            None => {
                let _ = writeln!(out, "  {v} [fillcolor=white];");
            }
        }
    }
    for (u, v, w) in g.edges() {
        let _ = writeln!(out, "  {u} -- {v} [label=\"{w}\"];");
    }
    out.push_str("}\n");
    out
}
