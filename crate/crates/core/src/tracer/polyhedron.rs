//! Isomorphism codes for the polyhedron of an o-graph.
//!
//! A dart is a germ end `(vertex, port, slot)`. Three involutions and one
//! rotation act on darts: the germ pairing inside a vertex, the gluing of
//! slots along an edge, and the cyclic order of the three sheets around a
//! singular edge end. Two o-graphs give orientation-preservingly isomorphic
//! polyhedra iff these structures are conjugate, which a breadth-first
//! relabelling from every root detects.

use std::cmp::Ordering;

use super::Tracer;
use crate::ograph::OGraph;

/// Canonical code of the oriented polyhedron. Equal codes mean isomorphic
/// polyhedra with matching orientations.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PolyhedronCode(Vec<u32>);

impl PolyhedronCode {
    /// Code of the polyhedron of `g`. With `reversed` set, the sheet rotation
    /// is inverted, which yields the code of the oppositely oriented copy.
    pub fn new(tracer: &Tracer, g: &OGraph, reversed: bool) -> Self {
        let darts = 12 * g.vertex_count();
        let m = &tracer.matching;
        let index = |v: usize, p: u8, s: u8| 12 * v + 3 * p as usize + s as usize;
        let mut germ = vec![0u32; darts];
        let mut rot = vec![0u32; darts];
        for v in 0..g.vertex_count() {
            for p in 0..4u8 {
                for s in 0..3u8 {
                    let (q, t) = m.germ(p, s);
                    germ[index(v, p, s)] = index(v, q, t) as u32;
                    let s2 = if reversed { (s + 2) % 3 } else { (s + 1) % 3 };
                    rot[index(v, p, s)] = index(v, p, s2) as u32;
                }
            }
        }
        let mut glue = vec![0u32; darts];
        for e in g.edges() {
            for j in 0..3u8 {
                let k = tracer.rule.to_b(j, e.color);
                let x = index(e.a.vertex, e.a.port, j);
                let y = index(e.b.vertex, e.b.port, k);
                glue[x] = y as u32;
                glue[y] = x as u32;
            }
        }
        let maps = [&germ, &rot, &glue];
        let mut best: Option<Vec<u32>> = None;
        let mut label = vec![u32::MAX; darts];
        let mut order = Vec::with_capacity(darts);
        for root in 0..darts {
            label.iter_mut().for_each(|l| *l = u32::MAX);
            order.clear();
            label[root] = 0;
            order.push(root as u32);
            let mut code = Vec::with_capacity(3 * darts + 1);
            // Ordering of the code so far against the best prefix.
            let mut so_far = if best.is_some() { Ordering::Equal } else { Ordering::Less };
            let mut i = 0;
            let mut worse = false;
            'bfs: while i < order.len() {
                let d = order[i] as usize;
                i += 1;
                for map in maps {
                    let t = map[d] as usize;
                    if label[t] == u32::MAX {
                        label[t] = order.len() as u32;
                        order.push(t as u32);
                    }
                    code.push(label[t]);
                    if so_far == Ordering::Equal {
                        so_far = match best.as_ref().and_then(|b| b.get(code.len() - 1)) {
                            Some(b) => label[t].cmp(b),
                            None => Ordering::Greater,
                        };
                        if so_far == Ordering::Greater {
                            worse = true;
                            break 'bfs;
                        }
                    }
                }
            }
            if worse {
                continue;
            }
            // Disconnected polyhedra: append the untouched darts' count so that
            // codes from different components never collide.
            code.push((darts - order.len()) as u32);
            if best.as_ref().is_none_or(|b| code < *b) {
                best = Some(code);
            }
        }
        PolyhedronCode(best.unwrap_or_default())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ograph::{make_open_chain, parse_word, ColorZ3, OpenChainParams};

    fn chain(a: u8, d: u8, w: &str) -> OGraph {
        make_open_chain(
            &OpenChainParams::new(ColorZ3::new(a).unwrap(), ColorZ3::new(d).unwrap(), parse_word(w).unwrap()).unwrap(),
        )
    }

    #[test]
    fn relabelling_vertices_keeps_the_code() {
        let t = Tracer::default();
        let g = chain(0, 1, "02,12,20");
        let n = g.vertex_count();
        let relabel = |v: usize| n - 1 - v;
        let edges = g
            .edges()
            .iter()
            .rev()
            .map(|e| {
                crate::ograph::Edge::new(
                    crate::ograph::PortRef::new(relabel(e.b.vertex), e.b.port),
                    crate::ograph::PortRef::new(relabel(e.a.vertex), e.a.port),
                    e.color,
                )
            })
            .collect();
        let h = OGraph::new(n, edges).unwrap();
        assert_eq!(PolyhedronCode::new(&t, &g, false), PolyhedronCode::new(&t, &h, false));
    }

    #[test]
    fn distinguishes_different_polyhedra() {
        let t = Tracer::default();
        let a = PolyhedronCode::new(&t, &chain(0, 0, "02"), false);
        let b = PolyhedronCode::new(&t, &chain(0, 0, "22"), false);
        assert_ne!(a, b);
    }
}
