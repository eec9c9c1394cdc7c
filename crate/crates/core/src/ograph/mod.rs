//! O-graphs: four-valent graphs with a crossing at each vertex and a Z/3
//! colour on each edge, encoding oriented standard polyhedra.
//!
//! Ports at a vertex are numbered `0..4` counterclockwise in the local planar
//! picture. The overstrand always occupies ports `{0, 2}` and the
//! understrand ports `{1, 3}`, so a vertex needs no data beyond its index.

mod chain;
mod color;
mod text;

use std::fmt;

use thiserror::Error;

pub use chain::{
    canonical_form, make_closed_chain, make_open_chain, make_open_chain_with, mirror_open_chain,
    open_chain_orbit, open_chain_prefix, parse_word, ChainLayout, ChainPrefix, ClosedChainParams, OpenChainParams, ParamsError,
};
pub use color::{ColorZ3, Letter, LetterClass};
pub use text::{parse_ograph, serialize_ograph, serialize_ograph_canonical, ParseError, ParseErrorKind};

/// A port slot `(vertex, port)` with `port < 4`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PortRef {
    pub vertex: usize,
    pub port: u8,
}

impl PortRef {
    pub fn new(vertex: usize, port: u8) -> Self {
        PortRef { vertex, port }
    }
}

impl fmt::Display for PortRef {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}.{}", self.vertex, self.port)
    }
}

/// An edge joining two port slots. End `a` and end `b` are interchangeable:
/// the colour does not depend on the direction the edge is read in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub a: PortRef,
    pub b: PortRef,
    pub color: ColorZ3,
}

impl Edge {
    pub fn new(a: PortRef, b: PortRef, color: ColorZ3) -> Self {
        Edge { a, b, color }
    }

    pub fn is_loop(&self) -> bool {
        self.a.vertex == self.b.vertex
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OGraphError {
    #[error("an o-graph needs at least one vertex")]
    NoVertices,
    #[error("port out of range: {0} (ports are 0..=3)")]
    PortOutOfRange(u8),
    #[error("vertex out of range: {vertex} (graph has {vertex_count} vertices)")]
    VertexOutOfRange { vertex: usize, vertex_count: usize },
    #[error("duplicate port {0}")]
    DuplicatePort(PortRef),
    #[error("dangling port {0}: no edge attached")]
    DanglingPort(PortRef),
}

/// An o-graph. Construction validates exact four-valence, so every value of
/// this type uses each of its `4 * vertex_count` port slots exactly once.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct OGraph {
    vertex_count: usize,
    edges: Vec<Edge>,
}

impl OGraph {
    pub fn new(vertex_count: usize, edges: Vec<Edge>) -> Result<Self, OGraphError> {
        if vertex_count == 0 {
            return Err(OGraphError::NoVertices);
        }
        let mut used = vec![false; 4 * vertex_count];
        for e in &edges {
            for end in [e.a, e.b] {
                if end.port > 3 {
                    return Err(OGraphError::PortOutOfRange(end.port));
                }
                if end.vertex >= vertex_count {
                    return Err(OGraphError::VertexOutOfRange { vertex: end.vertex, vertex_count });
                }
                let slot = &mut used[4 * end.vertex + end.port as usize];
                if *slot {
                    return Err(OGraphError::DuplicatePort(end));
                }
                *slot = true;
            }
        }
        if let Some(i) = used.iter().position(|u| !u) {
            return Err(OGraphError::DanglingPort(PortRef::new(i / 4, (i % 4) as u8)));
        }
        Ok(OGraph { vertex_count, edges })
    }

    pub fn vertex_count(&self) -> usize {
        self.vertex_count
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    /// For each port slot `4 * vertex + port`, the incident edge and which end
    /// of it (`false` = a, `true` = b) sits there.
    pub fn incidence(&self) -> Vec<(usize, bool)> {
        let mut inc = vec![(usize::MAX, false); 4 * self.vertex_count];
        for (i, e) in self.edges.iter().enumerate() {
            inc[4 * e.a.vertex + e.a.port as usize] = (i, false);
            inc[4 * e.b.vertex + e.b.port as usize] = (i, true);
        }
        inc
    }

    pub fn is_connected(&self) -> bool {
        let mut seen = vec![false; self.vertex_count];
        let mut stack = vec![0];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                for (x, y) in [(e.a.vertex, e.b.vertex), (e.b.vertex, e.a.vertex)] {
                    if x == v && !seen[y] {
                        seen[y] = true;
                        stack.push(y);
                    }
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// The o-graph of the oppositely oriented polyhedron.
    ///
    /// The planar picture at every vertex is reflected, which exchanges ports 1
    /// and 3 and keeps the overstrand on `{0, 2}`; every colour is negated.
    /// The result encodes `-Γ`, and applying the map twice returns the input.
    pub fn mirror(&self) -> OGraph {
        let flip = |p: PortRef| PortRef::new(p.vertex, (4 - p.port) % 4);
        let edges = self.edges.iter().map(|e| Edge::new(flip(e.a), flip(e.b), -e.color)).collect();
        OGraph { vertex_count: self.vertex_count, edges }
    }
}

/// Free-function form of [`OGraph::mirror`].
pub fn mirror(g: &OGraph) -> OGraph {
    g.mirror()
}
