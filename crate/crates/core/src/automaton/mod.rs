//! The finite state automaton deciding single-facedness of open-chain o-graphs.
//!
//! A word `w` of letters `(beta_k, gamma_k)` together with `alpha, delta in
//! {0, 1}` gives a one-face polyhedron iff `w` is accepted. The table shipped
//! here is regenerated from the tracer by [`derive_fsa`] in the test suite.

mod bounds;
mod derive;

use std::fmt::{self, Write};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::Serialize;

use crate::ograph::{Letter, LetterClass};

pub use bounds::{lower_bound_refined, lower_bound_simple, lower_bound_simple_ceil, upper_bounds, UpperBounds};
pub use derive::{derive_fsa, DeriveError};

/// A state of the automaton, named by the pattern of frontier sheets it
/// records. Derivations that find more states than the four named ones label
/// the extra ones `Other(i)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
pub enum PatternState {
    Xyyx,
    Xxyy,
    Xyxy,
    Fail,
    Other(u8),
}

impl fmt::Display for PatternState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PatternState::Xyyx => f.write_str("XYYX"),
            PatternState::Xxyy => f.write_str("XXYY"),
            PatternState::Xyxy => f.write_str("XYXY"),
            PatternState::Fail => f.write_str("FAIL"),
            PatternState::Other(i) => write!(f, "S{i}"),
        }
    }
}

/// A complete deterministic automaton over the nine letters.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Automaton {
    states: Vec<PatternState>,
    transitions: Vec<[usize; 9]>,
    start: usize,
    accepting: Vec<bool>,
}

// Per state, the successor for classes A0..A3. Order: XYYX, XXYY, XYXY, FAIL.
const SHIPPED: [[usize; 4]; 4] = [[3, 3, 1, 1], [3, 0, 1, 2], [3, 0, 3, 0], [3, 3, 3, 3]];

fn class_index(c: LetterClass) -> usize {
    match c {
        LetterClass::A0 => 0,
        LetterClass::A1 => 1,
        LetterClass::A2 => 2,
        LetterClass::A3 => 3,
    }
}

impl Automaton {
    pub(crate) fn from_parts(
        states: Vec<PatternState>,
        transitions: Vec<[usize; 9]>,
        start: usize,
        accepting: Vec<bool>,
    ) -> Self {
        Automaton { states, transitions, start, accepting }
    }

    /// The shipped table.
    pub fn standard() -> Self {
        let transitions = SHIPPED
            .iter()
            .map(|row| {
                let mut t = [0; 9];
                for l in Letter::ALL {
                    t[l.index()] = row[class_index(l.class())];
                }
                t
            })
            .collect();
        Automaton {
            states: vec![PatternState::Xyyx, PatternState::Xxyy, PatternState::Xyxy, PatternState::Fail],
            transitions,
            start: 0,
            accepting: vec![false, true, true, false],
        }
    }

    pub fn states(&self) -> &[PatternState] {
        &self.states
    }

    pub fn state_count(&self) -> usize {
        self.states.len()
    }

    pub fn start(&self) -> usize {
        self.start
    }

    pub fn index_of(&self, state: PatternState) -> Option<usize> {
        self.states.iter().position(|&s| s == state)
    }

    pub fn is_accepting(&self, state: usize) -> bool {
        self.accepting[state]
    }

    pub fn accept_states(&self) -> Vec<PatternState> {
        (0..self.states.len()).filter(|&i| self.accepting[i]).map(|i| self.states[i]).collect()
    }

    #[inline]
    pub fn next(&self, state: usize, letter: Letter) -> usize {
        self.transitions[state][letter.index()]
    }

    pub fn run(&self, word: &[Letter]) -> usize {
        word.iter().fold(self.start, |s, &l| self.next(s, l))
    }

    pub fn accepts(&self, word: &[Letter]) -> bool {
        self.accepting[self.run(word)]
    }

    /// Letters taking `from` to `to`.
    pub fn letters_between(&self, from: PatternState, to: PatternState) -> Vec<Letter> {
        match (self.index_of(from), self.index_of(to)) {
            (Some(f), Some(t)) => Letter::ALL.into_iter().filter(|&l| self.next(f, l) == t).collect(),
            _ => Vec::new(),
        }
    }

    /// The common successor of `state` over a class, or `None` if the letters
    /// of the class disagree.
    pub fn class_successor(&self, state: usize, class: LetterClass) -> Option<usize> {
        let mut succ = class.letters().map(|l| self.next(state, l));
        let first = succ.next()?;
        succ.all(|s| s == first).then_some(first)
    }

    pub fn is_class_constant(&self) -> bool {
        (0..self.states.len()).all(|s| LetterClass::ALL.iter().all(|&c| self.class_successor(s, c).is_some()))
    }

    /// Disagreements with the structure the single-face theorem describes.
    /// An empty list means the automaton matches it.
    pub fn structural_violations(&self) -> Vec<String> {
        use PatternState::*;
        let mut out = Vec::new();
        if self.states.get(self.start) != Some(&Xyyx) {
            out.push("start state is not XYYX".to_string());
        }
        let mut accept = self.accept_states();
        accept.sort();
        if accept != vec![Xxyy, Xyxy] {
            out.push(format!("accept set is {accept:?}, expected XXYY and XYXY"));
        }
        match self.index_of(Fail) {
            Some(f) if Letter::ALL.iter().all(|&l| self.next(f, l) == f) && !self.accepting[f] => {}
            _ => out.push("no absorbing non-accepting FAIL state".to_string()),
        }
        if !self.is_class_constant() {
            out.push("transitions are not constant on the letter classes".to_string());
        }
        for (from, to, want) in [(Xyyx, Xxyy, 6), (Xxyy, Xyxy, 4), (Xyxy, Xyyx, 6)] {
            let got = self.letters_between(from, to).len();
            if got != want {
                out.push(format!("{got} letters lead from {from} to {to}, expected {want}"));
            }
        }
        if self.letters_between(Xxyy, Xxyy).is_empty() {
            out.push("no XXYY self-loop".to_string());
        }
        out
    }

    /// State occupancy after each of `0..=length` letters, starting from the
    /// start state with count one.
    pub fn occupancy(&self, length: usize) -> Vec<Vec<BigUint>> {
        let mut v = vec![BigUint::zero(); self.states.len()];
        v[self.start] = BigUint::one();
        let mut out = vec![v.clone()];
        for _ in 0..length {
            let mut next = vec![BigUint::zero(); self.states.len()];
            for (s, count) in v.iter().enumerate() {
                if count.is_zero() {
                    continue;
                }
                for t in &self.transitions[s] {
                    next[*t] += count;
                }
            }
            out.push(next.clone());
            v = next;
        }
        out
    }

    /// Number of accepted words of the given length.
    pub fn count_accepted(&self, length: usize) -> BigUint {
        let last = self.occupancy(length).pop().expect("occupancy has length + 1 rows");
        last.iter().enumerate().filter(|(s, _)| self.accepting[*s]).map(|(_, c)| c).sum()
    }

    /// Stable text rendering: one row per state, one column per letter.
    pub fn table_text(&self) -> String {
        let mut out = String::new();
        write!(out, "state ").unwrap();
        for l in Letter::ALL {
            write!(out, " {l:>4}").unwrap();
        }
        writeln!(out).unwrap();
        for (i, s) in self.states.iter().enumerate() {
            let mark = match (i == self.start, self.accepting[i]) {
                (true, true) => "->*",
                (true, false) => "-> ",
                (false, true) => "  *",
                (false, false) => "   ",
            };
            write!(out, "{mark}{:<4}", s.to_string()).unwrap();
            for t in &self.transitions[i] {
                write!(out, " {:>4}", self.states[*t].to_string()).unwrap();
            }
            writeln!(out).unwrap();
        }
        let accept: Vec<String> = self.accept_states().iter().map(|s| s.to_string()).collect();
        writeln!(out, "start {}", self.states[self.start]).unwrap();
        writeln!(out, "accept {}", accept.join(" ")).unwrap();
        out
    }
}

impl Default for Automaton {
    fn default() -> Self {
        Self::standard()
    }
}

/// Runs the shipped automaton.
pub fn accepts(a: &Automaton, word: &[Letter]) -> bool {
    a.accepts(word)
}

/// Accepted words of the given length for the shipped automaton.
pub fn count_accepted(length: usize) -> BigUint {
    Automaton::standard().count_accepted(length)
}
