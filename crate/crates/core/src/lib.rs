//! Census and invariants of the compact orientable 3-manifolds with an ideal
//! triangulation made of `n` tetrahedra and a single edge, studied through
//! their dual one-face standard spines encoded as o-graphs on the open chain.

pub mod automaton;
pub mod census;
pub mod invariants;
pub mod ograph;
pub mod tracer;
