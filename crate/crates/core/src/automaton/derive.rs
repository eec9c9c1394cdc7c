//! Regenerates the automaton from the tracer.
//!
//! Cutting an open chain just after vertex `v_k` leaves six strand ends on
//! the two free ports of `v_k`. The strands already laid down either pair
//! these ends up or close into cycles; a closed cycle is a face that can never
//! grow, so the word fails. The pairing (with the parity of `k`, which matters
//! for layouts that differ on odd and even vertices) is a complete state: the
//! rest of the chain only sees the free ends. Acceptance means that closing
//! the chain with the `delta` loop yields one face. Moore minimization then
//! gives the automaton.

use std::collections::HashMap;

use thiserror::Error;

use super::{Automaton, PatternState};
use crate::ograph::{open_chain_prefix, ChainLayout, ColorZ3, Edge, Letter, OGraph};
use crate::tracer::Tracer;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DeriveError {
    #[error("alpha = 0 and alpha = 1 lead to different automata")]
    AlphaDependent,
    #[error("alpha = 2 admits a single-face completion")]
    AlphaTwoAccepts,
    #[error("delta = 0 and delta = 1 disagree on a cut state")]
    DeltaDependent,
    #[error("delta = 2 closes a single face")]
    DeltaTwoAccepts,
    #[error("no word is accepted")]
    EmptyLanguage,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Cut {
    Fail,
    Open([u8; 6], u8),
}

struct Deriver<'a> {
    tracer: &'a Tracer,
    layout: ChainLayout,
}

impl Deriver<'_> {
    fn cut(&self, alpha: ColorZ3, word: &[Letter]) -> Cut {
        let prefix = open_chain_prefix(alpha, word, self.layout);
        let t = self.tracer.tangle(prefix.vertex_count, &prefix.edges, &prefix.open);
        if t.closed > 0 {
            return Cut::Fail;
        }
        let mut partner = [0u8; 6];
        for (i, p) in t.partner.iter().enumerate() {
            partner[i] = *p as u8;
        }
        Cut::Open(partner, (word.len() % 2) as u8)
    }

    /// Single-face status after closing with each of the three `delta`s.
    fn closes(&self, alpha: ColorZ3, word: &[Letter]) -> [bool; 3] {
        let prefix = open_chain_prefix(alpha, word, self.layout);
        ColorZ3::ALL.map(|delta| {
            let mut edges = prefix.edges.clone();
            edges.push(Edge::new(prefix.open[0], prefix.open[1], delta));
            let g = OGraph::new(prefix.vertex_count, edges).expect("closed chain prefix is four-valent");
            self.tracer.is_single_face(&g)
        })
    }
}

/// Derives the minimal automaton for the given tracer convention and chain
/// layout. The result has its start state labelled XYYX and FAIL as the dead
/// state; the accepting state reached from the start in one letter is XXYY
/// and a second accepting state, if unique, is XYXY.
pub fn derive_fsa(tracer: &Tracer, layout: ChainLayout) -> Result<Automaton, DeriveError> {
    let d = Deriver { tracer, layout };
    let mut ids: HashMap<Cut, usize> = HashMap::from([(Cut::Fail, 0)]);
    // Representative (alpha, word) for each raw state; FAIL has none.
    let mut reps: Vec<Option<(ColorZ3, Vec<Letter>)>> = vec![None];
    let mut starts = [0usize; 3];
    for alpha in ColorZ3::ALL {
        let c = d.cut(alpha, &[]);
        let next = ids.len();
        let id = *ids.entry(c).or_insert(next);
        if id == reps.len() {
            reps.push(Some((alpha, Vec::new())));
        }
        starts[alpha.value() as usize] = id;
    }
    let mut trans: Vec<[usize; 9]> = Vec::new();
    let mut accepting: Vec<bool> = Vec::new();
    let mut i = 0;
    while i < reps.len() {
        let Some((alpha, word)) = reps[i].clone() else {
            trans.push([0; 9]);
            accepting.push(false);
            i += 1;
            continue;
        };
        let [c0, c1, c2] = d.closes(alpha, &word);
        if c2 {
            return Err(DeriveError::DeltaTwoAccepts);
        }
        if c0 != c1 {
            return Err(DeriveError::DeltaDependent);
        }
        accepting.push(c0);
        let mut row = [0; 9];
        for l in Letter::ALL {
            let mut w = word.clone();
            w.push(l);
            let c = d.cut(alpha, &w);
            let next = ids.len();
            let id = *ids.entry(c).or_insert(next);
            if id == reps.len() {
                reps.push(Some((alpha, w)));
            }
            row[l.index()] = id;
        }
        trans.push(row);
        i += 1;
    }

    let class = minimize(&trans, &accepting);
    if class[starts[0]] != class[starts[1]] {
        return Err(DeriveError::AlphaDependent);
    }
    if class[starts[2]] != class[0] {
        return Err(DeriveError::AlphaTwoAccepts);
    }
    let start = class[starts[0]];
    let fail = class[0];
    if start == fail {
        return Err(DeriveError::EmptyLanguage);
    }

    // Quotient automaton on classes reachable from the start.
    let classes = class.iter().max().map_or(0, |m| m + 1);
    let mut q_trans = vec![[usize::MAX; 9]; classes];
    let mut q_acc = vec![false; classes];
    for (raw, &c) in class.iter().enumerate() {
        q_acc[c] = accepting[raw];
        for l in 0..9 {
            q_trans[c][l] = class[trans[raw][l]];
        }
    }
    let mut order = vec![start];
    let mut k = 0;
    while k < order.len() {
        for &t in &q_trans[order[k]] {
            if !order.contains(&t) {
                order.push(t);
            }
        }
        k += 1;
    }
    if !order.contains(&fail) {
        order.push(fail);
    }

    let first_accepts: Vec<usize> = {
        let mut v: Vec<usize> = q_trans[start].iter().copied().filter(|&t| q_acc[t]).collect();
        v.sort();
        v.dedup();
        v
    };
    let xxyy = (first_accepts.len() == 1).then(|| first_accepts[0]);
    let others_acc: Vec<usize> = order.iter().copied().filter(|&c| q_acc[c] && Some(c) != xxyy).collect();
    let xyxy = (others_acc.len() == 1).then(|| others_acc[0]);

    let mut sorted = vec![start];
    sorted.extend(xxyy);
    sorted.extend(xyxy);
    sorted.push(fail);
    for &c in &order {
        if !sorted.contains(&c) {
            sorted.push(c);
        }
    }
    let mut extra = 0u8;
    let states: Vec<PatternState> = sorted
        .iter()
        .map(|&c| {
            if c == start {
                PatternState::Xyyx
            } else if Some(c) == xxyy {
                PatternState::Xxyy
            } else if Some(c) == xyxy {
                PatternState::Xyxy
            } else if c == fail {
                PatternState::Fail
            } else {
                extra += 1;
                PatternState::Other(extra - 1)
            }
        })
        .collect();
    let pos = |c: usize| sorted.iter().position(|&x| x == c).expect("reachable class");
    let transitions = sorted.iter().map(|&c| q_trans[c].map(pos)).collect();
    let accepting = sorted.iter().map(|&c| q_acc[c]).collect();
    Ok(Automaton::from_parts(states, transitions, 0, accepting))
}

/// Moore partition refinement. Returns the class of every state.
fn minimize(trans: &[[usize; 9]], accepting: &[bool]) -> Vec<usize> {
    let mut class: Vec<usize> = accepting.iter().map(|&a| a as usize).collect();
    loop {
        let mut sig_ids: HashMap<(usize, [usize; 9]), usize> = HashMap::new();
        let next: Vec<usize> = (0..trans.len())
            .map(|s| {
                let sig = (class[s], trans[s].map(|t| class[t]));
                let n = sig_ids.len();
                *sig_ids.entry(sig).or_insert(n)
            })
            .collect();
        let before = class.iter().max().map_or(0, |m| m + 1);
        if sig_ids.len() == before {
            return next;
        }
        class = next;
    }
}
