use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{ColorZ3, Edge, Letter, OGraph, PortRef};

// Physical directions around a chain vertex, counterclockwise.
const NE: u8 = 0;
const NW: u8 = 1;
const SW: u8 = 2;
const SE: u8 = 3;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParamsError {
    #[error("an open chain needs n >= 2 (got a word of length {0})")]
    OpenChainTooShort(usize),
    #[error("a closed chain needs n >= 1")]
    EmptyClosedChain,
    #[error("cannot parse word `{0}`: expected comma-separated two-digit letters such as 02,11")]
    BadWord(String),
}

/// Where the normalized port 0 (the first overstrand port) sits at each vertex
/// of a chain, as a counterclockwise offset from the north-east direction.
///
/// Vertices `v_1, v_3, ...` use `odd`, vertices `v_2, v_4, ...` use `even`.
/// The shipped layout puts the overstrand on the NE-SW diagonal everywhere.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct ChainLayout {
    pub odd: u8,
    pub even: u8,
}

impl ChainLayout {
    pub const STANDARD: ChainLayout = ChainLayout { odd: 0, even: 0 };

    /// All sixteen layouts considered during calibration.
    pub fn all() -> impl Iterator<Item = ChainLayout> {
        (0..4).flat_map(|odd| (0..4).map(move |even| ChainLayout { odd, even }))
    }

    fn port(&self, vertex: usize, direction: u8) -> PortRef {
        let rot = if vertex.is_multiple_of(2) { self.odd } else { self.even };
        PortRef::new(vertex, (direction + 4 - rot % 4) % 4)
    }
}

/// Colours of an o-graph on the open chain `G_n`: the loop at `v_1` carries
/// `alpha`, the loop at `v_n` carries `delta`, and the double edge between
/// `v_k` and `v_{k+1}` carries the letter `word[k-1]`.
///
/// The derived order compares `(alpha, delta, word)` lexicographically, which
/// is the order used for canonical forms.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct OpenChainParams {
    pub alpha: ColorZ3,
    pub delta: ColorZ3,
    pub word: Vec<Letter>,
}

impl OpenChainParams {
    pub fn new(alpha: ColorZ3, delta: ColorZ3, word: Vec<Letter>) -> Result<Self, ParamsError> {
        if word.is_empty() {
            return Err(ParamsError::OpenChainTooShort(0));
        }
        Ok(OpenChainParams { alpha, delta, word })
    }

    /// Number of vertices of the underlying chain.
    pub fn n(&self) -> usize {
        self.word.len() + 1
    }

    /// Flat residue tuple `(alpha, delta, beta_1, gamma_1, ...)`.
    pub fn residues(&self) -> Vec<u8> {
        let mut out = Vec::with_capacity(2 * self.n());
        out.push(self.alpha.value());
        out.push(self.delta.value());
        for l in &self.word {
            out.push(l.beta.value());
            out.push(l.gamma.value());
        }
        out
    }

    /// The `beta <-> gamma` interchange.
    pub fn swapped(&self) -> Self {
        OpenChainParams {
            alpha: self.alpha,
            delta: self.delta,
            word: self.word.iter().map(|l| l.swapped()).collect(),
        }
    }

    /// The half-turn of the chain: ends exchanged, word read backwards.
    pub fn rotated(&self) -> Self {
        OpenChainParams {
            alpha: self.delta,
            delta: self.alpha,
            word: self.word.iter().rev().copied().collect(),
        }
    }

    /// True iff these parameters are the least member of their orbit.
    /// Allocation-free equivalent of `canonical_form(self) == *self`.
    pub fn is_canonical(&self) -> bool {
        let w = &self.word;
        let swap = w.iter().map(|l| l.swapped());
        let rot = w.iter().rev().copied();
        let rot_swap = w.iter().rev().map(|l| l.swapped());
        let base = (self.alpha, self.delta);
        let flipped = (self.delta, self.alpha);
        cmp_image(base, w.iter().copied(), base, swap) != Ordering::Greater
            && cmp_image(base, w.iter().copied(), flipped, rot) != Ordering::Greater
            && cmp_image(base, w.iter().copied(), flipped, rot_swap) != Ordering::Greater
    }
}

fn cmp_image(
    head_a: (ColorZ3, ColorZ3),
    word_a: impl Iterator<Item = Letter>,
    head_b: (ColorZ3, ColorZ3),
    word_b: impl Iterator<Item = Letter>,
) -> Ordering {
    head_a.cmp(&head_b).then_with(|| word_a.cmp(word_b))
}

impl fmt::Display for OpenChainParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "alpha={} delta={} word=", self.alpha, self.delta)?;
        for (i, l) in self.word.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

/// Parses a word written as comma-separated letters, e.g. `02,11,20`.
pub fn parse_word(text: &str) -> Result<Vec<Letter>, ParamsError> {
    let bad = || ParamsError::BadWord(text.to_string());
    text.split(',')
        .map(|tok| {
            let tok = tok.trim().as_bytes();
            if tok.len() != 2 {
                return Err(bad());
            }
            let digit = |b: u8| b.checked_sub(b'0').and_then(ColorZ3::new).ok_or_else(bad);
            Ok(Letter::new(digit(tok[0])?, digit(tok[1])?))
        })
        .collect()
}

/// Colours of an o-graph on the closed chain with `n` vertices; the double
/// edge from `v_i` to `v_{i+1}` (indices mod n) carries `pairs[i-1]`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ClosedChainParams {
    pub pairs: Vec<Letter>,
}

impl ClosedChainParams {
    pub fn new(pairs: Vec<Letter>) -> Result<Self, ParamsError> {
        if pairs.is_empty() {
            return Err(ParamsError::EmptyClosedChain);
        }
        Ok(ClosedChainParams { pairs })
    }

    pub fn n(&self) -> usize {
        self.pairs.len()
    }
}

/// Builds the open-chain o-graph with the shipped layout.
pub fn make_open_chain(params: &OpenChainParams) -> OGraph {
    make_open_chain_with(params, ChainLayout::STANDARD)
}

/// Builds the open-chain o-graph with an explicit layout.
///
/// Edge order: the `alpha` loop, then for each letter the upper edge
/// (`beta`, NE of `v_k` to NW of `v_{k+1}`) and the lower edge (`gamma`, SE to
/// SW), then the `delta` loop. The `alpha` loop joins NW and SW of `v_1`; the
/// `delta` loop joins NE and SE of `v_n`.
pub fn make_open_chain_with(params: &OpenChainParams, layout: ChainLayout) -> OGraph {
    let mut prefix = open_chain_prefix(params.alpha, &params.word, layout);
    let [ne, se] = prefix.open;
    prefix.edges.push(Edge::new(ne, se, params.delta));
    OGraph::new(prefix.vertex_count, prefix.edges).expect("open chain layout is four-valent")
}

/// An open chain cut just after its last vertex: everything but the `delta`
/// loop. `open` holds the NE and SE ports of the last vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChainPrefix {
    pub vertex_count: usize,
    pub edges: Vec<Edge>,
    pub open: [PortRef; 2],
}

/// Builds the chain on `word.len() + 1` vertices without its closing loop.
/// An empty word gives the single vertex `v_1` with its `alpha` loop.
pub fn open_chain_prefix(alpha: ColorZ3, word: &[Letter], layout: ChainLayout) -> ChainPrefix {
    let n = word.len() + 1;
    let mut edges = Vec::with_capacity(2 * n);
    edges.push(Edge::new(layout.port(0, NW), layout.port(0, SW), alpha));
    for (k, letter) in word.iter().enumerate() {
        edges.push(Edge::new(layout.port(k, NE), layout.port(k + 1, NW), letter.beta));
        edges.push(Edge::new(layout.port(k, SE), layout.port(k + 1, SW), letter.gamma));
    }
    ChainPrefix { vertex_count: n, edges, open: [layout.port(n - 1, NE), layout.port(n - 1, SE)] }
}

/// Builds the closed-chain o-graph (shipped layout).
pub fn make_closed_chain(params: &ClosedChainParams) -> OGraph {
    let layout = ChainLayout::STANDARD;
    let n = params.n();
    let mut edges = Vec::with_capacity(2 * n);
    for (i, pair) in params.pairs.iter().enumerate() {
        let next = (i + 1) % n;
        edges.push(Edge::new(layout.port(i, NE), layout.port(next, NW), pair.beta));
        edges.push(Edge::new(layout.port(i, SE), layout.port(next, SW), pair.gamma));
    }
    OGraph::new(n, edges).expect("closed chain layout is four-valent")
}

/// Colours of `-Γ` in open-chain form: `alpha' = 1 - alpha`,
/// `delta' = 1 - delta`; odd-position letters become `(1 - gamma, 1 - beta)`
/// and even-position letters `(1 - beta, 1 - gamma)` (positions 1-based).
pub fn mirror_open_chain(params: &OpenChainParams) -> OpenChainParams {
    let word = params
        .word
        .iter()
        .enumerate()
        .map(|(i, l)| {
            if i % 2 == 0 {
                Letter::new(l.gamma.one_minus(), l.beta.one_minus())
            } else {
                Letter::new(l.beta.one_minus(), l.gamma.one_minus())
            }
        })
        .collect();
    OpenChainParams { alpha: params.alpha.one_minus(), delta: params.delta.one_minus(), word }
}

/// The orbit under the group generated by the `beta <-> gamma` swap and the
/// half-turn of the chain. Its size is 1, 2 or 4.
pub fn open_chain_orbit(params: &OpenChainParams) -> BTreeSet<OpenChainParams> {
    let swapped = params.swapped();
    let rotated = params.rotated();
    let both = swapped.rotated();
    [params.clone(), swapped, rotated, both].into_iter().collect()
}

/// Lexicographically least member of the orbit.
pub fn canonical_form(params: &OpenChainParams) -> OpenChainParams {
    open_chain_orbit(params).into_iter().next().expect("orbit is never empty")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(v: u8) -> ColorZ3 {
        ColorZ3::new(v).unwrap()
    }

    pub(crate) fn params_strategy(max_n: usize) -> impl Strategy<Value = OpenChainParams> {
        (0u8..3, 0u8..3, prop::collection::vec((0u8..3, 0u8..3), 1..max_n)).prop_map(|(a, d, w)| {
            OpenChainParams::new(
                c(a),
                c(d),
                w.into_iter().map(|(b, g)| Letter::from_values(b, g)).collect(),
            )
            .unwrap()
        })
    }

    #[test]
    fn two_vertex_chain() {
        let p = OpenChainParams::new(c(0), c(0), vec![Letter::from_values(0, 2)]).unwrap();
        let g = make_open_chain(&p);
        assert_eq!(g.vertex_count(), 2);
        assert_eq!(g.edge_count(), 4);
        let mut colors: Vec<u8> = g.edges().iter().map(|e| e.color.value()).collect();
        colors.sort();
        assert_eq!(colors, vec![0, 0, 0, 2]);
    }

    #[test]
    fn closed_chain_sizes() {
        let one = ClosedChainParams::new(vec![Letter::from_values(0, 1)]).unwrap();
        let g = make_closed_chain(&one);
        assert_eq!((g.vertex_count(), g.edge_count()), (1, 2));
        assert!(g.edges().iter().all(|e| e.is_loop()));
        let four = ClosedChainParams::new(vec![Letter::from_values(2, 1); 4]).unwrap();
        let g = make_closed_chain(&four);
        assert_eq!((g.vertex_count(), g.edge_count()), (4, 8));
        assert_eq!(ClosedChainParams::new(vec![]), Err(ParamsError::EmptyClosedChain));
    }

    #[test]
    fn open_chain_rejects_empty_word() {
        assert_eq!(OpenChainParams::new(c(0), c(0), vec![]), Err(ParamsError::OpenChainTooShort(0)));
    }

    #[test]
    fn every_layout_is_four_valent() {
        let p = OpenChainParams::new(c(1), c(2), vec![Letter::from_values(0, 1); 4]).unwrap();
        for layout in ChainLayout::all() {
            let g = make_open_chain_with(&p, layout);
            assert_eq!(g.edge_count(), 10);
        }
    }

    #[test]
    fn mirror_formula_examples() {
        let p = OpenChainParams::new(
            c(0),
            c(1),
            vec![Letter::from_values(0, 2), Letter::from_values(0, 2)],
        )
        .unwrap();
        let m = mirror_open_chain(&p);
        assert_eq!(m.alpha, c(1));
        assert_eq!(m.delta, c(0));
        // position 1 is odd: (1 - 2, 1 - 0)
        assert_eq!(m.word[0], Letter::from_values(2, 1));
        // position 2 is even: (1 - 0, 1 - 2)
        assert_eq!(m.word[1], Letter::from_values(1, 2));
    }

    #[test]
    fn parse_word_accepts_and_rejects() {
        let w = parse_word("02, 11,20").unwrap();
        assert_eq!(w, vec![Letter::from_values(0, 2), Letter::from_values(1, 1), Letter::from_values(2, 0)]);
        assert!(parse_word("03").is_err());
        assert!(parse_word("0").is_err());
    }

    #[test]
    fn symmetric_word_has_small_orbit() {
        let p = OpenChainParams::new(c(0), c(1), vec![Letter::from_values(1, 1), Letter::from_values(2, 2)])
            .unwrap();
        assert!(open_chain_orbit(&p).len() <= 2);
    }

    proptest! {
        #[test]
        fn constructors_are_four_valent(p in params_strategy(12)) {
            let g = make_open_chain(&p);
            prop_assert_eq!(g.vertex_count(), p.n());
            prop_assert_eq!(g.edge_count(), 2 * p.n());
        }

        #[test]
        fn mirror_formula_is_involution(p in params_strategy(12)) {
            prop_assert_eq!(mirror_open_chain(&mirror_open_chain(&p)), p);
        }

        #[test]
        fn orbit_size_divides_four(p in params_strategy(10)) {
            let orbit = open_chain_orbit(&p);
            prop_assert!([1, 2, 4].contains(&orbit.len()));
            for q in &orbit {
                prop_assert_eq!(&open_chain_orbit(q), &orbit);
            }
        }

        #[test]
        fn canonical_form_picks_orbit_representative(p in params_strategy(10), pick in 0usize..4) {
            let cf = canonical_form(&p);
            prop_assert!(open_chain_orbit(&p).contains(&cf));
            prop_assert_eq!(canonical_form(&cf), cf.clone());
            let orbit: Vec<_> = open_chain_orbit(&p).into_iter().collect();
            let q = &orbit[pick % orbit.len()];
            prop_assert_eq!(canonical_form(q), cf.clone());
            prop_assert_eq!(p.is_canonical(), cf == p);
        }
    }
}
