//! Dual ideal triangulations: one tetrahedron per o-graph vertex, one face
//! pairing per edge.

use std::fmt::Write as _;

use super::{CensusError, CensusRecord};
use crate::ograph::{make_open_chain, OGraph};
use crate::tracer::Tracer;

/// `face_a` of `tet_a` glued to `face_b` of `tet_b`; side `j` of the first
/// face goes to side `perm[j]` of the second.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Glue {
    pub tet_a: usize,
    pub face_a: u8,
    pub tet_b: usize,
    pub face_b: u8,
    pub perm: [u8; 3],
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GluingTable {
    pub tetrahedra: usize,
    pub glues: Vec<Glue>,
    pub edge_orbits: usize,
}

impl GluingTable {
    /// `(edge orbits) - (tetrahedra)`, the Euler characteristic of the
    /// manifold with its boundary collapsed.
    pub fn euler_characteristic(&self) -> i64 {
        self.edge_orbits as i64 - self.tetrahedra as i64
    }

    pub fn to_text(&self) -> String {
        let mut out = format!("triangulation {}\n", self.tetrahedra);
        for g in &self.glues {
            let [a, b, c] = g.perm;
            writeln!(out, "glue {} {} {} {} {a}{b}{c}", g.tet_a, g.face_a, g.tet_b, g.face_b).unwrap();
        }
        out
    }
}

/// The triangulation dual to `g`. Face `p` of tetrahedron `v` is dual to
/// port `p` of vertex `v`; its three sides are the three strand slots there.
pub fn gluing_table(tracer: &Tracer, g: &OGraph) -> Result<GluingTable, CensusError> {
    let n = g.vertex_count();
    let glues: Vec<Glue> = g
        .edges()
        .iter()
        .map(|e| Glue {
            tet_a: e.a.vertex,
            face_a: e.a.port,
            tet_b: e.b.vertex,
            face_b: e.b.port,
            perm: [0, 1, 2].map(|j| tracer.rule.to_b(j, e.color)),
        })
        .collect();

    // Tetrahedron edges are germs of spine faces: union the germ pairing
    // inside each vertex with the side identifications across faces.
    let idx = |v: usize, p: u8, s: u8| 12 * v + 3 * p as usize + s as usize;
    let mut uf = UnionFind::new(12 * n);
    for v in 0..n {
        for p in 0..4u8 {
            for s in 0..3u8 {
                let (q, t) = tracer.matching.germ(p, s);
                uf.union(idx(v, p, s), idx(v, q, t));
            }
        }
    }
    for gl in &glues {
        for j in 0..3u8 {
            uf.union(idx(gl.tet_a, gl.face_a, j), idx(gl.tet_b, gl.face_b, gl.perm[j as usize]));
        }
    }
    let edge_orbits = uf.components();
    let faces = tracer.face_count(g);
    if edge_orbits != faces {
        return Err(CensusError::EdgeOrbitMismatch { orbits: edge_orbits, faces });
    }
    Ok(GluingTable { tetrahedra: n, glues, edge_orbits })
}

/// Dual triangulation of a census record; it has a single edge.
pub fn export_gluing_table(r: &CensusRecord) -> Result<GluingTable, CensusError> {
    gluing_table(&Tracer::default(), &make_open_chain(&r.params))
}

struct UnionFind {
    parent: Vec<usize>,
}

impl UnionFind {
    fn new(n: usize) -> Self {
        UnionFind { parent: (0..n).collect() }
    }

    fn find(&mut self, mut x: usize) -> usize {
        while self.parent[x] != x {
            self.parent[x] = self.parent[self.parent[x]];
            x = self.parent[x];
        }
        x
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            self.parent[ra] = rb;
        }
    }

    fn components(&mut self) -> usize {
        (0..self.parent.len()).filter(|&x| self.find(x) == x).count()
    }
}
