//! Face reconstruction for the polyhedron encoded by an o-graph.
//!
//! Every edge of the singular graph carries three sheets ("strands"). At an
//! edge end sitting on port `p`, the three strands occupy slots `0..3`, and
//! slot `s` leaves the vertex towards port `matching.target(p, s)`: at each
//! vertex the twelve slot-ends pair up into the six face-germs of the
//! quadripus, one germ per unordered port pair. Along an edge of colour `c`,
//! slot `j` at end `a` continues as slot `k` at end `b` with `j + k = c`
//! (mod 3). Faces are the cycles of the resulting strand walk.

pub mod calibrate;
mod polyhedron;

use std::collections::VecDeque;
use std::fmt;

use thiserror::Error;

use crate::ograph::{ColorZ3, Edge, OGraph, PortRef};

pub use calibrate::{
    calibrate, calibrate_tables, geometric_tables, structural_tables, Calibration, CalibrationError, Candidate,
};
pub use polyhedron::PolyhedronCode;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("slot table row for port {0} is not an ordering of the other three ports")]
    BadMatchingRow(u8),
    #[error("o-graph is disconnected")]
    Disconnected,
}

/// The slot-to-port table of a vertex: `targets[p][s]` is the port that the
/// germ leaving port `p` through slot `s` reaches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct VertexMatching {
    targets: [[u8; 3]; 4],
    slot_of: [[u8; 4]; 4],
}

impl VertexMatching {
    /// The calibrated convention. See [`calibrate`] for how it is selected.
    pub const STANDARD_TARGETS: [[u8; 3]; 4] = [[1, 2, 3], [2, 0, 3], [3, 0, 1], [0, 2, 1]];

    pub fn new(targets: [[u8; 3]; 4]) -> Result<Self, TraceError> {
        let mut slot_of = [[u8::MAX; 4]; 4];
        for (p, row) in targets.iter().enumerate() {
            for (s, &q) in row.iter().enumerate() {
                if q > 3 || q as usize == p || slot_of[p][q as usize] != u8::MAX {
                    return Err(TraceError::BadMatchingRow(p as u8));
                }
                slot_of[p][q as usize] = s as u8;
            }
        }
        Ok(VertexMatching { targets, slot_of })
    }

    pub fn standard() -> Self {
        Self::new(Self::STANDARD_TARGETS).expect("shipped table is valid")
    }

    pub fn targets(&self) -> &[[u8; 3]; 4] {
        &self.targets
    }

    pub fn target(&self, port: u8, slot: u8) -> u8 {
        self.targets[port as usize][slot as usize]
    }

    pub fn slot_towards(&self, port: u8, target: u8) -> u8 {
        self.slot_of[port as usize][target as usize]
    }

    /// The other end `(port, slot)` of the germ leaving `(port, slot)`.
    pub fn germ(&self, port: u8, slot: u8) -> (u8, u8) {
        let q = self.target(port, slot);
        (q, self.slot_towards(q, port))
    }

    /// The six germs as pairs of `(port, slot)` ends.
    pub fn germs(&self) -> Vec<((u8, u8), (u8, u8))> {
        let mut out = Vec::with_capacity(6);
        for p in 0..4u8 {
            for s in 0..3u8 {
                let other = self.germ(p, s);
                if (p, s) < other {
                    out.push(((p, s), other));
                }
            }
        }
        out
    }
}

impl Default for VertexMatching {
    fn default() -> Self {
        Self::standard()
    }
}

/// Which end of an edge.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum End {
    A,
    B,
}

/// Slot `slot` of edge `edge`, measured at end `end`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StrandSlot {
    pub edge: usize,
    pub end: End,
    pub slot: u8,
}

/// How the three strands of an edge of colour `c` pass from end `a` to end `b`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum GluingRule {
    /// Slot `j` at `a` meets slot `k` at `b` when `j + k = c`. Symmetric in the
    /// two ends, so edge direction carries no information.
    #[default]
    Sum,
    /// Slot `j` at `a` meets slot `j + c` at `b`.
    Shift,
}

impl GluingRule {
    pub const ALL: [GluingRule; 2] = [GluingRule::Sum, GluingRule::Shift];

    /// Slot at end `b` of the strand leaving end `a` through `slot`.
    #[inline]
    pub fn to_b(self, slot: u8, color: ColorZ3) -> u8 {
        match self {
            GluingRule::Sum => (3 + color.value() - slot) % 3,
            GluingRule::Shift => (slot + color.value()) % 3,
        }
    }

    /// Slot at end `a` of the strand leaving end `b` through `slot`.
    #[inline]
    pub fn to_a(self, slot: u8, color: ColorZ3) -> u8 {
        match self {
            GluingRule::Sum => (3 + color.value() - slot) % 3,
            GluingRule::Shift => (slot + 3 - color.value()) % 3,
        }
    }
}

impl fmt::Display for GluingRule {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            GluingRule::Sum => "sum",
            GluingRule::Shift => "shift",
        })
    }
}

/// One pass of a face along an edge. `slot` is where the walk enters the
/// edge; `sign` is `+1` when it runs from end `a` to end `b`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Traversal {
    pub slot: StrandSlot,
    pub sign: i8,
}

impl fmt::Display for Traversal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let end = match self.slot.end {
            End::A => 'a',
            End::B => 'b',
        };
        let sign = if self.sign > 0 { '+' } else { '-' };
        write!(f, "{}:{}:{}:{}", self.slot.edge, end, self.slot.slot, sign)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceResult {
    /// Closed face walks, each starting from its least strand segment.
    pub faces: Vec<Vec<Traversal>>,
    pub face_count: usize,
    /// `V - E + F`, which equals `F - V` for a four-valent graph.
    pub euler_characteristic: i64,
    /// For each edge, the `(face, sign)` of every pass along it.
    pub edge_incidence: Vec<Vec<(usize, i8)>>,
}

/// Strand walker for a fixed vertex convention and gluing rule.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct Tracer {
    pub matching: VertexMatching,
    pub rule: GluingRule,
}

/// Strand connectivity of a partial graph with some ports left open.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tangle {
    /// `partner[3 * i + s]` is the open end joined to slot `s` of open port `i`.
    pub partner: Vec<usize>,
    /// Strand cycles that avoid every open port.
    pub closed: usize,
}

#[derive(Clone, Copy)]
enum Slot {
    Edge(usize, bool),
    Open(usize),
    Empty,
}

impl Tracer {
    pub fn new(matching: VertexMatching, rule: GluingRule) -> Self {
        Tracer { matching, rule }
    }

    /// Follows a strand to the next edge. The state is `(edge, slot at end a,
    /// direction)`, direction `true` meaning a to b.
    #[inline]
    fn step(&self, g: &OGraph, inc: &[(usize, bool)], state: (usize, u8, bool)) -> (usize, u8, bool) {
        let (e, j, forward) = state;
        let edge = &g.edges()[e];
        let (at, slot) = if forward { (edge.b, self.rule.to_b(j, edge.color)) } else { (edge.a, j) };
        let (q, t) = self.matching.germ(at.port, slot);
        let (e2, at_b) = inc[4 * at.vertex + q as usize];
        if at_b {
            (e2, self.rule.to_a(t, g.edges()[e2].color), false)
        } else {
            (e2, t, true)
        }
    }

    /// Counts faces without materializing the walks.
    pub fn face_count(&self, g: &OGraph) -> usize {
        let inc = g.incidence();
        let mut seen = vec![false; 3 * g.edge_count()];
        let mut faces = 0;
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            faces += 1;
            let mut state = (start / 3, (start % 3) as u8, true);
            loop {
                seen[3 * state.0 + state.1 as usize] = true;
                state = self.step(g, &inc, state);
                if seen[3 * state.0 + state.1 as usize] {
                    break;
                }
            }
        }
        faces
    }

    pub fn is_single_face(&self, g: &OGraph) -> bool {
        self.face_count(g) == 1
    }

    pub fn trace_faces(&self, g: &OGraph) -> TraceResult {
        let inc = g.incidence();
        let mut seen = vec![false; 3 * g.edge_count()];
        let mut faces = Vec::new();
        let mut edge_incidence = vec![Vec::new(); g.edge_count()];
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            let face = faces.len();
            let mut walk = Vec::new();
            let mut state = (start / 3, (start % 3) as u8, true);
            loop {
                let (e, j, forward) = state;
                seen[3 * e + j as usize] = true;
                let slot = if forward {
                    StrandSlot { edge: e, end: End::A, slot: j }
                } else {
                    StrandSlot { edge: e, end: End::B, slot: self.rule.to_b(j, g.edges()[e].color) }
                };
                let sign = if forward { 1 } else { -1 };
                walk.push(Traversal { slot, sign });
                edge_incidence[e].push((face, sign));
                state = self.step(g, &inc, state);
                if seen[3 * state.0 + state.1 as usize] {
                    break;
                }
            }
            faces.push(walk);
        }
        let face_count = faces.len();
        TraceResult {
            faces,
            face_count,
            euler_characteristic: face_count as i64 - g.vertex_count() as i64,
            edge_incidence,
        }
    }

    /// Traces a graph whose ports are each used by one edge end or listed in
    /// `open` (ports used twice or not at all are a caller bug and panic).
    pub fn tangle(&self, vertex_count: usize, edges: &[Edge], open: &[PortRef]) -> Tangle {
        let mut ports = vec![Slot::Empty; 4 * vertex_count];
        for (i, e) in edges.iter().enumerate() {
            ports[4 * e.a.vertex + e.a.port as usize] = Slot::Edge(i, false);
            ports[4 * e.b.vertex + e.b.port as usize] = Slot::Edge(i, true);
        }
        for (i, p) in open.iter().enumerate() {
            ports[4 * p.vertex + p.port as usize] = Slot::Open(i);
        }
        let mut seen = vec![false; 3 * edges.len()];
        // Walks from `(vertex, port, slot)` into the vertex until an open port.
        let walk = |mut v: usize, mut p: u8, mut s: u8, seen: &mut Vec<bool>| -> Option<usize> {
            loop {
                let (q, t) = self.matching.germ(p, s);
                match ports[4 * v + q as usize] {
                    Slot::Open(i) => return Some(3 * i + t as usize),
                    Slot::Edge(e, at_b) => {
                        let edge = &edges[e];
                        let (j, far, far_slot) = if at_b {
                            let j = self.rule.to_a(t, edge.color);
                            (j, edge.a, j)
                        } else {
                            (t, edge.b, self.rule.to_b(t, edge.color))
                        };
                        if seen[3 * e + j as usize] {
                            return None;
                        }
                        seen[3 * e + j as usize] = true;
                        v = far.vertex;
                        p = far.port;
                        s = far_slot;
                    }
                    Slot::Empty => panic!("port {v}.{q} is neither attached nor open"),
                }
            }
        };
        let mut partner = vec![usize::MAX; 3 * open.len()];
        for (i, p) in open.iter().enumerate() {
            for s in 0..3u8 {
                let here = 3 * i + s as usize;
                if partner[here] != usize::MAX {
                    continue;
                }
                let there = walk(p.vertex, p.port, s, &mut seen).expect("open strands end at open ports");
                partner[here] = there;
                partner[there] = here;
            }
        }
        let mut closed = 0;
        for start in 0..seen.len() {
            if seen[start] {
                continue;
            }
            closed += 1;
            let edge = &edges[start / 3];
            let j = (start % 3) as u8;
            seen[start] = true;
            let end = walk(edge.b.vertex, edge.b.port, self.rule.to_b(j, edge.color), &mut seen);
            debug_assert!(end.is_none());
        }
        Tangle { partner, closed }
    }
}

/// Traces with the calibrated convention.
pub fn trace_faces(g: &OGraph) -> TraceResult {
    Tracer::default().trace_faces(g)
}

/// True iff the polyhedron of `g` has exactly one face.
pub fn is_single_face(g: &OGraph) -> bool {
    Tracer::default().is_single_face(g)
}

/// Face boundaries written in the cycle basis of a spanning tree.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BoundaryRelations {
    /// Edges outside the spanning tree, in index order.
    pub complement_edges: Vec<usize>,
    /// One row per face: signed pass count along each complement edge.
    pub relations: Vec<Vec<i64>>,
}

/// Picks the breadth-first spanning tree from vertex 0 (edges scanned in index
/// order) and records each face's signed pass count along the remaining
/// `E - V + 1` edges. For a one-face o-graph on the open chain with `n`
/// vertices this is the relation vector `(r_1, ..., r_{n+1})`.
pub fn boundary_word(t: &TraceResult, g: &OGraph) -> Result<BoundaryRelations, TraceError> {
    let n = g.vertex_count();
    let mut in_tree = vec![false; g.edge_count()];
    let mut reached = vec![false; n];
    let mut queue = VecDeque::from([0usize]);
    reached[0] = true;
    while let Some(v) = queue.pop_front() {
        for (i, e) in g.edges().iter().enumerate() {
            let other = if e.a.vertex == v {
                e.b.vertex
            } else if e.b.vertex == v {
                e.a.vertex
            } else {
                continue;
            };
            if !reached[other] {
                reached[other] = true;
                in_tree[i] = true;
                queue.push_back(other);
            }
        }
    }
    if reached.iter().any(|r| !r) {
        return Err(TraceError::Disconnected);
    }
    let complement_edges: Vec<usize> = (0..g.edge_count()).filter(|&i| !in_tree[i]).collect();
    let mut relations = vec![vec![0i64; complement_edges.len()]; t.face_count];
    for (col, &e) in complement_edges.iter().enumerate() {
        for &(face, sign) in &t.edge_incidence[e] {
            relations[face][col] += sign as i64;
        }
    }
    Ok(BoundaryRelations { complement_edges, relations })
}
