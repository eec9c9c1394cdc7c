//! The census of open-chain manifolds: one record per orbit of accepted
//! colourings, plus chirality, the closed-chain experiment, persistence and
//! export of the dual triangulations.

mod export;
mod jsonl;
mod montecarlo;

use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::automaton::Automaton;
use crate::invariants::{InvariantError, InvariantReport, ReportTemplate};
use crate::ograph::{canonical_form, make_open_chain, mirror_open_chain, ColorZ3, Letter, OpenChainParams};
use crate::tracer::Tracer;

pub use export::{export_gluing_table, gluing_table, Glue, GluingTable};
pub use jsonl::{finalize_census, read_census, CensusLine, CensusWriter, SCHEMA_VERSION};
pub use montecarlo::{
    closed_chain_is_single_face, closed_chain_monte_carlo, closed_chain_sample, MonteCarloReport, StartFrequency,
    CLOSED_CHAIN_LETTERS, CLOSED_CHAIN_STARTS,
};

#[derive(Debug, Error)]
pub enum CensusError {
    #[error("need n >= 2, got {0}")]
    TooFewVertices(usize),
    #[error("need at least one sample")]
    NoSamples,
    #[error("letter {letter} at position {position} is not allowed in a closed-chain word")]
    LetterNotAllowed { position: usize, letter: Letter },
    #[error("automaton accepted {0} but tracing finds more than one face")]
    NotSingleFace(String),
    #[error("dual triangulation has {orbits} edge orbits but the spine has {faces} faces")]
    EdgeOrbitMismatch { orbits: usize, faces: usize },
    #[error("line {line}: {message}")]
    BadLine { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Invariant(#[from] InvariantError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Chirality {
    Chiral,
    Amphichiral,
}

impl fmt::Display for Chirality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Chirality::Chiral => "CHIRAL",
            Chirality::Amphichiral => "AMPHICHIRAL",
        })
    }
}

/// One census entry. `params` is always canonical and its o-graph has been
/// re-traced to a single face.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CensusRecord {
    pub n: usize,
    pub params: OpenChainParams,
    pub orbit_size: u8,
    pub chirality: Chirality,
    /// Filled in by [`CensusRecord::with_invariants`]; enumeration alone
    /// leaves it empty.
    pub invariants: Option<InvariantReport>,
}

impl CensusRecord {
    /// Builds the record for canonical, single-face parameters.
    fn new(params: OpenChainParams) -> Self {
        CensusRecord {
            n: params.n(),
            orbit_size: orbit_size(&params),
            chirality: classify_params(&params),
            params,
            invariants: None,
        }
    }

    pub fn with_invariants(mut self, template: &ReportTemplate) -> Result<Self, InvariantError> {
        self.invariants = Some(template.report(&self.params)?);
        Ok(self)
    }
}

/// Size of the symmetry orbit, from the stabilizer: `4 / |Stab|`.
pub fn orbit_size(p: &OpenChainParams) -> u8 {
    let w = &p.word;
    let swap_fixed = w.iter().all(|l| l.beta == l.gamma);
    let ends_equal = p.alpha == p.delta;
    let rot_fixed = ends_equal && w.iter().eq(w.iter().rev());
    let rot_swap_fixed = ends_equal && w.iter().copied().eq(w.iter().rev().map(|l| l.swapped()));
    let stabilizer = 1 + swap_fixed as u8 + rot_fixed as u8 + rot_swap_fixed as u8;
    4 / stabilizer
}

fn classify_params(p: &OpenChainParams) -> Chirality {
    if canonical_form(&mirror_open_chain(p)) == *p {
        Chirality::Amphichiral
    } else {
        Chirality::Chiral
    }
}

/// Chirality of any single-face colouring, canonical or not.
pub fn chirality_of(p: &OpenChainParams) -> Chirality {
    classify_params(&canonical_form(p))
}

/// Amphichiral iff the mirror colouring is in the record's own orbit.
pub fn classify_chirality(r: &CensusRecord) -> Chirality {
    classify_params(&r.params)
}

/// The loop colours that can occur: `alpha = 2` or `delta = 2` never gives
/// one face, and these four pairs come in lexicographic order.
const HEADS: [(ColorZ3, ColorZ3); 4] = [
    (ColorZ3::ZERO, ColorZ3::ZERO),
    (ColorZ3::ZERO, ColorZ3::ONE),
    (ColorZ3::ONE, ColorZ3::ZERO),
    (ColorZ3::ONE, ColorZ3::ONE),
];

/// `live[r][s]`: some word of length `r` leads from state `s` to acceptance.
fn live_table(a: &Automaton, max_len: usize) -> Vec<Vec<bool>> {
    let mut live = vec![(0..a.state_count()).map(|s| a.is_accepting(s)).collect::<Vec<_>>()];
    for r in 1..=max_len {
        let prev = &live[r - 1];
        let row = (0..a.state_count()).map(|s| Letter::ALL.iter().any(|&l| prev[a.next(s, l)])).collect();
        live.push(row);
    }
    live
}

/// Accepted words of a fixed length that extend a given prefix, in
/// lexicographic order. Dead branches are cut as soon as they are entered.
pub struct AcceptedWords<'a> {
    automaton: &'a Automaton,
    live: Vec<Vec<bool>>,
    len: usize,
    word: Vec<Letter>,
    // Per position beyond the prefix: the state before it and the next letter index to try.
    stack: Vec<(usize, usize)>,
    base: usize,
    done: bool,
}

impl<'a> AcceptedWords<'a> {
    pub fn new(automaton: &'a Automaton, len: usize, prefix: &[Letter]) -> Self {
        let live = live_table(automaton, len);
        let base = prefix.len().min(len);
        let state = automaton.run(&prefix[..base]);
        let done = !live[len - base][state];
        let mut it = AcceptedWords { automaton, live, len, word: prefix[..base].to_vec(), stack: Vec::new(), base, done };
        if !done && base < len {
            it.stack.push((state, 0));
        }
        it
    }
}

impl Iterator for AcceptedWords<'_> {
    type Item = Vec<Letter>;

    fn next(&mut self) -> Option<Vec<Letter>> {
        if self.done {
            return None;
        }
        if self.base == self.len {
            self.done = true;
            return Some(self.word.clone());
        }
        while !self.stack.is_empty() {
            let depth = self.base + self.stack.len() - 1;
            let top = self.stack.last_mut().expect("stack is not empty");
            if top.1 == 9 {
                self.stack.pop();
                continue;
            }
            let letter = Letter::ALL[top.1];
            top.1 += 1;
            let s2 = self.automaton.next(top.0, letter);
            if !self.live[self.len - depth - 1][s2] {
                continue;
            }
            self.word.truncate(depth);
            self.word.push(letter);
            if depth + 1 == self.len {
                return Some(self.word.clone());
            }
            self.stack.push((s2, 0));
        }
        self.done = true;
        None
    }
}

/// A unit of parallel work: fixed loop colours and a fixed word prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Shard {
    pub alpha: ColorZ3,
    pub delta: ColorZ3,
    pub prefix: Vec<Letter>,
}

/// All shards for `n`, in census order.
pub fn shards(n: usize, prefix_len: usize) -> Vec<Shard> {
    let a = Automaton::standard();
    let len = n - 1;
    let k = prefix_len.min(len);
    let live = live_table(&a, len);
    let mut prefixes: Vec<Vec<Letter>> = vec![Vec::new()];
    for depth in 0..k {
        prefixes = prefixes
            .into_iter()
            .flat_map(|p| {
                Letter::ALL.iter().map(move |&l| {
                    let mut q = p.clone();
                    q.push(l);
                    q
                })
            })
            .filter(|p| live[len - depth - 1][a.run(p)])
            .collect();
    }
    HEADS
        .iter()
        .flat_map(|&(alpha, delta)| prefixes.iter().map(move |p| Shard { alpha, delta, prefix: p.clone() }))
        .collect()
}

fn record_for(tracer: &Tracer, params: OpenChainParams) -> Option<Result<CensusRecord, CensusError>> {
    if !params.is_canonical() {
        return None;
    }
    // Independent check: do not trust the automaton path.
    if !tracer.is_single_face(&make_open_chain(&params)) {
        return Some(Err(CensusError::NotSingleFace(params.to_string())));
    }
    Some(Ok(CensusRecord::new(params)))
}

/// Records of one shard, in census order.
pub fn enumerate_shard(n: usize, shard: &Shard) -> impl Iterator<Item = Result<CensusRecord, CensusError>> + '_ {
    let tracer = Tracer::default();
    let automaton: &'static Automaton = standard_automaton();
    AcceptedWords::new(automaton, n - 1, &shard.prefix).filter_map(move |word| {
        let params = OpenChainParams { alpha: shard.alpha, delta: shard.delta, word };
        record_for(&tracer, params)
    })
}

fn standard_automaton() -> &'static Automaton {
    static CELL: std::sync::OnceLock<Automaton> = std::sync::OnceLock::new();
    CELL.get_or_init(Automaton::standard)
}

/// Streams the census at `n` in lexicographic order of canonical parameters.
pub fn enumerate_open_chain(n: usize) -> Result<impl Iterator<Item = Result<CensusRecord, CensusError>>, CensusError> {
    if n < 2 {
        return Err(CensusError::TooFewVertices(n));
    }
    let tracer = Tracer::default();
    let automaton = standard_automaton();
    Ok(HEADS.into_iter().flat_map(move |(alpha, delta)| {
        AcceptedWords::new(automaton, n - 1, &[])
            .filter_map(move |word| record_for(&tracer, OpenChainParams { alpha, delta, word }))
    }))
}

/// The census at `n`, sharded over the current rayon pool. The result is in
/// the same order as [`enumerate_open_chain`].
pub fn enumerate_open_chain_parallel(n: usize) -> Result<Vec<CensusRecord>, CensusError> {
    if n < 2 {
        return Err(CensusError::TooFewVertices(n));
    }
    let parts: Vec<Vec<CensusRecord>> = shards(n, 3)
        .par_iter()
        .map(|s| enumerate_shard(n, s).collect::<Result<Vec<_>, _>>())
        .collect::<Result<_, _>>()?;
    Ok(parts.into_iter().flatten().collect())
}

/// Number of census records at `n`, without keeping them.
pub fn census_count(n: usize) -> Result<u64, CensusError> {
    if n < 2 {
        return Err(CensusError::TooFewVertices(n));
    }
    shards(n, 3)
        .par_iter()
        .map(|s| enumerate_shard(n, s).try_fold(0u64, |acc, r| r.map(|_| acc + 1)))
        .try_reduce(|| 0, |a, b| Ok(a + b))
}

/// Number of census records over `2 <= n <= max_n`.
pub fn cumulative_count(max_n: usize) -> Result<u64, CensusError> {
    if max_n < 2 {
        return Err(CensusError::TooFewVertices(max_n));
    }
    (2..=max_n).map(census_count).sum()
}
