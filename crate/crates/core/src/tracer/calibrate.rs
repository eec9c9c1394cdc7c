//! Selection of the vertex convention, gluing rule and chain layout.
//!
//! Candidates are all slot tables realizable by a quadripus in space, both
//! gluing rules and all sixteen chain layouts. A candidate survives if the
//! automaton derived from it is well defined (alpha and delta in `{0, 1}`
//! interchangeable, colour 2 on a loop never giving one face) and has the
//! structure the single-face theorem describes. Survivors must all agree on
//! the face count of every short open chain, otherwise the choice would
//! matter and calibration fails.

use std::collections::BTreeMap;

use rayon::prelude::*;
use thiserror::Error;

use super::{GluingRule, Tracer, VertexMatching};
use crate::automaton::{derive_fsa, Automaton};
use crate::ograph::{make_open_chain_with, ChainLayout, ColorZ3, Letter, OpenChainParams};

/// Counterclockwise order of the other three ports seen from outside along
/// port `p`, for the quadripus with ports at azimuth `90 * p` degrees, raised
/// for the overstrand `{0, 2}` and lowered for the understrand `{1, 3}`.
const OUTWARD_CCW: [[u8; 3]; 4] = [[1, 2, 3], [0, 3, 2], [0, 1, 3], [2, 1, 0]];

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CalibrationError {
    #[error("no consistent convention among {examined} candidates")]
    NoConsistentConvention { examined: usize },
    #[error("ambiguous convention: survivors split into {classes} trace classes")]
    AmbiguousConvention { classes: usize },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Candidate {
    pub matching: VertexMatching,
    pub rule: GluingRule,
    pub layout: ChainLayout,
}

impl Candidate {
    pub fn tracer(&self) -> Tracer {
        Tracer::new(self.matching, self.rule)
    }

    /// The shipped convention.
    pub fn standard() -> Self {
        Candidate { matching: VertexMatching::standard(), rule: GluingRule::Sum, layout: ChainLayout::STANDARD }
    }
}

#[derive(Clone, Debug)]
pub struct Calibration {
    /// The shipped convention when it survives, otherwise the first survivor.
    pub chosen: Candidate,
    pub automaton: Automaton,
    pub survivors: Vec<Candidate>,
    pub examined: usize,
}

/// Every table whose rows order the other three ports: `6^4` of them.
pub fn structural_tables() -> Vec<[[u8; 3]; 4]> {
    let rows: Vec<Vec<[u8; 3]>> = (0..4u8)
        .map(|p| {
            let others: Vec<u8> = (0..4).filter(|&q| q != p).collect();
            let mut perms = Vec::new();
            for a in 0..3 {
                for b in 0..3 {
                    for c in 0..3 {
                        if a != b && b != c && a != c {
                            perms.push([others[a], others[b], others[c]]);
                        }
                    }
                }
            }
            perms
        })
        .collect();
    let mut out = Vec::with_capacity(1296);
    for r0 in &rows[0] {
        for r1 in &rows[1] {
            for r2 in &rows[2] {
                for r3 in &rows[3] {
                    out.push([*r0, *r1, *r2, *r3]);
                }
            }
        }
    }
    out
}

fn same_cycle(a: [u8; 3], b: [u8; 3]) -> bool {
    (0..3).any(|r| (0..3).all(|i| a[(i + r) % 3] == b[i]))
}

/// Structural tables whose slot order turns the same way around every port,
/// all counterclockwise or all clockwise: `2 * 3^4` of them.
pub fn geometric_tables() -> Vec<[[u8; 3]; 4]> {
    structural_tables()
        .into_iter()
        .filter(|t| {
            let ccw = (0..4).all(|p| same_cycle(t[p], OUTWARD_CCW[p]));
            let cw = (0..4).all(|p| {
                let [a, b, c] = OUTWARD_CCW[p];
                same_cycle(t[p], [c, b, a])
            });
            ccw || cw
        })
        .collect()
}

fn survives(c: &Candidate) -> Option<Automaton> {
    let a = derive_fsa(&c.tracer(), c.layout).ok()?;
    a.structural_violations().is_empty().then_some(a)
}

/// Face counts of every open chain with at most four vertices and any loop colours.
fn trace_signature(c: &Candidate) -> Vec<u8> {
    let tracer = c.tracer();
    let mut sig = Vec::new();
    for len in 1..=3 {
        let words = 9usize.pow(len as u32);
        for code in 0..words {
            let word: Vec<Letter> =
                (0..len).map(|i| Letter::from_index(code / 9usize.pow(i as u32) % 9)).collect();
            for alpha in ColorZ3::ALL {
                for delta in ColorZ3::ALL {
                    let p = OpenChainParams::new(alpha, delta, word.clone()).expect("word is nonempty");
                    sig.push(tracer.face_count(&make_open_chain_with(&p, c.layout)) as u8);
                }
            }
        }
    }
    sig
}

/// Calibrates over the given raw tables; invalid tables are skipped.
pub fn calibrate_tables(tables: &[[[u8; 3]; 4]]) -> Result<Calibration, CalibrationError> {
    let candidates: Vec<Candidate> = tables
        .iter()
        .filter_map(|t| VertexMatching::new(*t).ok())
        .flat_map(|matching| {
            GluingRule::ALL
                .into_iter()
                .flat_map(move |rule| ChainLayout::all().map(move |layout| Candidate { matching, rule, layout }))
        })
        .collect();
    let examined = candidates.len();
    let kept: Vec<(Candidate, Automaton)> =
        candidates.par_iter().filter_map(|c| survives(c).map(|a| (*c, a))).collect();
    if kept.is_empty() {
        return Err(CalibrationError::NoConsistentConvention { examined });
    }
    let mut classes: BTreeMap<Vec<u8>, usize> = BTreeMap::new();
    for sig in kept.par_iter().map(|(c, _)| trace_signature(c)).collect::<Vec<_>>() {
        *classes.entry(sig).or_default() += 1;
    }
    if classes.len() > 1 {
        return Err(CalibrationError::AmbiguousConvention { classes: classes.len() });
    }
    let standard = Candidate::standard();
    let (chosen, automaton) = kept.iter().find(|(c, _)| *c == standard).unwrap_or(&kept[0]).clone();
    Ok(Calibration { chosen, automaton, survivors: kept.into_iter().map(|(c, _)| c).collect(), examined })
}

/// Calibrates over all geometrically realizable tables.
pub fn calibrate() -> Result<Calibration, CalibrationError> {
    calibrate_tables(&geometric_tables())
}
