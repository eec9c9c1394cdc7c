//! Random o-graphs on the closed chain.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::CensusError;
use crate::ograph::{make_closed_chain, ClosedChainParams, Letter};
use crate::tracer::Tracer;

/// Allowed colours of the first double edge, cycled through by sample index.
pub const CLOSED_CHAIN_STARTS: [Letter; 4] = [Letter::ALL[0], Letter::ALL[1], Letter::ALL[3], Letter::ALL[4]];

/// Letters drawn for the remaining double edges: `02, 12, 20, 21`.
pub const CLOSED_CHAIN_LETTERS: [Letter; 4] = [Letter::ALL[2], Letter::ALL[5], Letter::ALL[6], Letter::ALL[7]];

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct StartFrequency {
    pub start: Letter,
    pub samples: u64,
    pub single_face_count: u64,
    pub frequency: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MonteCarloReport {
    pub n: usize,
    pub samples: u64,
    pub seed: u64,
    pub single_face_count: u64,
    pub frequency: f64,
    /// One entry per start letter, in the order of [`CLOSED_CHAIN_STARTS`].
    pub per_start: Vec<StartFrequency>,
}

/// Traces the closed chain `start, rest[0], rest[1], ...`, rejecting
/// colours outside the two allowed sets.
pub fn closed_chain_is_single_face(start: Letter, rest: &[Letter]) -> Result<bool, CensusError> {
    if !CLOSED_CHAIN_STARTS.contains(&start) {
        return Err(CensusError::LetterNotAllowed { position: 0, letter: start });
    }
    if let Some((i, &l)) = rest.iter().enumerate().find(|(_, l)| !CLOSED_CHAIN_LETTERS.contains(l)) {
        return Err(CensusError::LetterNotAllowed { position: i + 1, letter: l });
    }
    let mut pairs = Vec::with_capacity(rest.len() + 1);
    pairs.push(start);
    pairs.extend_from_slice(rest);
    let g = make_closed_chain(&ClosedChainParams::new(pairs).expect("nonempty"));
    Ok(Tracer::default().is_single_face(&g))
}

/// Sample `index` of the experiment: its own ChaCha stream under `seed`, so
/// the result does not depend on how samples are spread over workers.
pub fn closed_chain_sample(n: usize, seed: u64, index: u64) -> ClosedChainParams {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    let mut pairs = Vec::with_capacity(n);
    pairs.push(CLOSED_CHAIN_STARTS[(index % 4) as usize]);
    pairs.extend((1..n).map(|_| CLOSED_CHAIN_LETTERS[rng.random_range(0..4)]));
    ClosedChainParams::new(pairs).expect("n >= 1")
}

pub fn closed_chain_monte_carlo(n: usize, samples: u64, seed: u64) -> Result<MonteCarloReport, CensusError> {
    if n < 2 {
        return Err(CensusError::TooFewVertices(n));
    }
    if samples == 0 {
        return Err(CensusError::NoSamples);
    }
    let tracer = Tracer::default();
    let hits: [u64; 4] = (0..samples)
        .into_par_iter()
        .map(|i| {
            let mut h = [0u64; 4];
            if tracer.is_single_face(&make_closed_chain(&closed_chain_sample(n, seed, i))) {
                h[(i % 4) as usize] = 1;
            }
            h
        })
        .reduce(|| [0; 4], |a, b| [a[0] + b[0], a[1] + b[1], a[2] + b[2], a[3] + b[3]]);
    let per_start = CLOSED_CHAIN_STARTS
        .iter()
        .enumerate()
        .map(|(k, &start)| {
            let count = samples / 4 + u64::from((k as u64) < samples % 4);
            StartFrequency {
                start,
                samples: count,
                single_face_count: hits[k],
                frequency: if count == 0 { 0.0 } else { hits[k] as f64 / count as f64 },
            }
        })
        .collect();
    let total: u64 = hits.iter().sum();
    Ok(MonteCarloReport {
        n,
        samples,
        seed,
        single_face_count: total,
        frequency: total as f64 / samples as f64,
        per_start,
    })
}
