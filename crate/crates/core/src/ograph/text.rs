//! Line-based text format:
//!
//! ```text
//! ograph 1
//! vertices 2
//! edge 0 1 0 2 0      # v_a p_a v_b p_b color
//! ...
//! ```
//!
//! `#` starts a comment. Vertex indices are 0-based.

use std::fmt::Write;

use thiserror::Error;

use super::{ColorZ3, Edge, OGraph, PortRef};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("missing or invalid header (expected `ograph 1`)")]
    BadHeader,
    #[error("unsupported format version {0}")]
    UnsupportedVersion(String),
    #[error("missing or invalid `vertices <n>` line")]
    BadVertexCount,
    #[error("malformed edge line")]
    MalformedEdge,
    #[error("unknown directive `{0}`")]
    UnknownDirective(String),
    #[error("port out of range: {0}")]
    PortOutOfRange(u64),
    #[error("vertex out of range: {0}")]
    VertexOutOfRange(u64),
    #[error("color out of range: {0}")]
    ColorOutOfRange(u64),
    #[error("duplicate port {0}")]
    DuplicatePort(PortRef),
    #[error("dangling port {0}: no edge attached")]
    DanglingPort(PortRef),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {kind}")]
pub struct ParseError {
    pub line: usize,
    pub kind: ParseErrorKind,
}

fn err(line: usize, kind: ParseErrorKind) -> ParseError {
    ParseError { line, kind }
}

pub fn parse_ograph(text: &str) -> Result<OGraph, ParseError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.split('#').next().unwrap_or("").trim()))
        .filter(|(_, l)| !l.is_empty());

    let (hline, header) = lines.next().ok_or_else(|| err(1, ParseErrorKind::BadHeader))?;
    match header.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["ograph", "1"] => {}
        ["ograph", v] => return Err(err(hline, ParseErrorKind::UnsupportedVersion(v.to_string()))),
        _ => return Err(err(hline, ParseErrorKind::BadHeader)),
    }

    let (vline, vertices) = lines.next().ok_or_else(|| err(hline + 1, ParseErrorKind::BadVertexCount))?;
    let vertex_count: usize = match vertices.split_whitespace().collect::<Vec<_>>().as_slice() {
        ["vertices", n] => n.parse().ok().filter(|&n| n > 0),
        _ => None,
    }
    .ok_or_else(|| err(vline, ParseErrorKind::BadVertexCount))?;

    let mut used = vec![false; 4 * vertex_count];
    let mut edges = Vec::new();
    for (lineno, line) in lines {
        let toks: Vec<&str> = line.split_whitespace().collect();
        if toks[0] != "edge" {
            return Err(err(lineno, ParseErrorKind::UnknownDirective(toks[0].to_string())));
        }
        if toks.len() != 6 {
            return Err(err(lineno, ParseErrorKind::MalformedEdge));
        }
        let nums = toks[1..]
            .iter()
            .map(|t| t.parse::<u64>())
            .collect::<Result<Vec<_>, _>>()
            .map_err(|_| err(lineno, ParseErrorKind::MalformedEdge))?;
        let mut end = |v: u64, p: u64| -> Result<PortRef, ParseError> {
            if v >= vertex_count as u64 {
                return Err(err(lineno, ParseErrorKind::VertexOutOfRange(v)));
            }
            if p > 3 {
                return Err(err(lineno, ParseErrorKind::PortOutOfRange(p)));
            }
            let r = PortRef::new(v as usize, p as u8);
            let slot = &mut used[4 * r.vertex + r.port as usize];
            if *slot {
                return Err(err(lineno, ParseErrorKind::DuplicatePort(r)));
            }
            *slot = true;
            Ok(r)
        };
        let a = end(nums[0], nums[1])?;
        let b = end(nums[2], nums[3])?;
        let color = u8::try_from(nums[4])
            .ok()
            .and_then(ColorZ3::new)
            .ok_or_else(|| err(lineno, ParseErrorKind::ColorOutOfRange(nums[4])))?;
        edges.push(Edge::new(a, b, color));
    }
    if let Some(i) = used.iter().position(|u| !u) {
        return Err(err(vline, ParseErrorKind::DanglingPort(PortRef::new(i / 4, (i % 4) as u8))));
    }
    Ok(OGraph::new(vertex_count, edges).expect("validated while parsing"))
}

fn write_edges<'a>(out: &mut String, n: usize, edges: impl Iterator<Item = &'a Edge>) {
    writeln!(out, "ograph 1").unwrap();
    writeln!(out, "vertices {n}").unwrap();
    for e in edges {
        writeln!(out, "edge {} {} {} {} {}", e.a.vertex, e.a.port, e.b.vertex, e.b.port, e.color).unwrap();
    }
}

/// Serializes with the edge order and endpoint order of `g`.
pub fn serialize_ograph(g: &OGraph) -> String {
    let mut out = String::new();
    write_edges(&mut out, g.vertex_count(), g.edges().iter());
    out
}

/// Serializes with each edge written smaller endpoint first and edges sorted.
/// Endpoint order carries no meaning, so the result describes the same o-graph.
pub fn serialize_ograph_canonical(g: &OGraph) -> String {
    let mut edges: Vec<Edge> = g
        .edges()
        .iter()
        .map(|e| if e.b < e.a { Edge::new(e.b, e.a, e.color) } else { *e })
        .collect();
    edges.sort();
    let mut out = String::new();
    write_edges(&mut out, g.vertex_count(), edges.iter());
    out
}
