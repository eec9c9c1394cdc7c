//! Invariants of a manifold with a one-edged ideal triangulation by `n`
//! tetrahedra. Volume and Turaev–Viro values depend on `n` alone; homology is
//! computed from the spine and checked against `Z^n`.

mod homology;
mod quadrature;
mod quantum;
mod volume;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ograph::{make_open_chain, OpenChainParams};
use crate::tracer::TraceError;

pub use homology::{homology_h1, homology_h1_with, quotient_group, smith_normal_form, AbelianGroup};
pub use quadrature::{adaptive_simpson, GaussLegendre};
pub use quantum::{quantum_6j_sym, quantum_factorial, quantum_integer, turaev_viro, QuantumContext};
pub use volume::{
    lobachevsky, lobachevsky_quadrature, manifold_volume, manifold_volume_with, octahedron_volume,
    truncated_tetrahedron_volume, truncated_tetrahedron_volume_with, QuadratureBackend,
};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum InvariantError {
    #[error("dihedral angle {0} outside (0, pi/3)")]
    AngleOutOfRange(f64),
    #[error("need at least 2 tetrahedra, got {0}")]
    TooFewTetrahedra(u32),
    #[error("level r = {0} is below 3")]
    LevelTooSmall(u32),
    #[error("q0^2 is not a primitive {r}-th root of unity")]
    NotPrimitiveRoot { r: u32 },
    #[error("colour {h} is not admissible at level {r} (need 3h <= r - 2)")]
    Inadmissible { h: u32, r: u32 },
    #[error("{what} has imaginary part {imaginary:e}")]
    NotReal { what: &'static str, imaginary: f64 },
    #[error("torsion coefficient does not fit in 64 bits")]
    TorsionOverflow,
    #[error(transparent)]
    Trace(#[from] TraceError),
    #[error("H1 has rank {rank} and torsion {torsion:?}, expected Z^{expected}")]
    H1Mismatch { expected: usize, rank: usize, torsion: Vec<u64> },
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct InvariantReport {
    pub n: u32,
    pub volume: f64,
    pub h1_rank: usize,
    pub h1_torsion: Vec<u64>,
    pub boundary_genus: u32,
    pub heegaard_genus: u32,
    pub complexity: u32,
    /// Turaev–Viro value per level `r`, at `q0 = exp(i pi / r)`.
    pub tv: BTreeMap<u32, f64>,
}

/// The part of a report that depends only on `n` and the chosen levels,
/// computed once and reused for every census member.
#[derive(Clone, Debug)]
pub struct ReportTemplate {
    n: u32,
    volume: f64,
    tv: BTreeMap<u32, f64>,
}

impl ReportTemplate {
    /// Turaev–Viro values at `q0 = exp(i pi / r)` for each level.
    pub fn new(n: u32, tv_levels: &[u32]) -> Result<Self, InvariantError> {
        let contexts = tv_levels.iter().map(|&r| QuantumContext::new(r)).collect::<Result<Vec<_>, _>>()?;
        Self::with_contexts(n, &contexts)
    }

    pub fn with_contexts(n: u32, contexts: &[QuantumContext]) -> Result<Self, InvariantError> {
        let volume = manifold_volume(n)?;
        let tv = contexts
            .iter()
            .map(|ctx| Ok((ctx.level(), turaev_viro(n, ctx)?)))
            .collect::<Result<_, InvariantError>>()?;
        Ok(ReportTemplate { n, volume, tv })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    /// Completes the report for one manifold. Homology other than `Z^n` is
    /// an error: it would contradict the classification of these manifolds
    /// and signals a tracer or convention bug.
    pub fn report(&self, params: &OpenChainParams) -> Result<InvariantReport, InvariantError> {
        let n = self.n;
        let h1 = homology_h1(&make_open_chain(params))?;
        if h1.rank != n as usize || !h1.torsion.is_empty() {
            return Err(InvariantError::H1Mismatch { expected: n as usize, rank: h1.rank, torsion: h1.torsion });
        }
        Ok(InvariantReport {
            n,
            volume: self.volume,
            h1_rank: h1.rank,
            h1_torsion: h1.torsion,
            boundary_genus: n,
            heegaard_genus: n + 1,
            complexity: n,
            tv: self.tv.clone(),
        })
    }
}

/// Full report for one open-chain manifold.
pub fn invariant_report(params: &OpenChainParams, tv_levels: &[u32]) -> Result<InvariantReport, InvariantError> {
    ReportTemplate::new(params.n() as u32, tv_levels)?.report(params)
}
