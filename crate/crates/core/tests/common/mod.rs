//! Oracles shared by the integration tests. Nothing here calls the automaton.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use num_bigint::BigUint;
use num_traits::{One, Zero};
use spinecensus::census::{Chirality, CLOSED_CHAIN_LETTERS};
use spinecensus::ograph::{make_open_chain, mirror_open_chain, ColorZ3, Letter, OpenChainParams};
use spinecensus::tracer::Tracer;

/// Every word of length `len`, in lexicographic order.
pub fn all_words(len: usize) -> impl Iterator<Item = Vec<Letter>> {
    let total = 9usize.pow(len as u32);
    (0..total).map(move |mut code| {
        let mut w = vec![Letter::ALL[0]; len];
        for slot in w.iter_mut().rev() {
            *slot = Letter::ALL[code % 9];
            code /= 9;
        }
        w
    })
}

/// The four images under swap and half-turn, written out by hand.
pub fn four_images(p: &OpenChainParams) -> [OpenChainParams; 4] {
    let swap = |w: &[Letter]| w.iter().map(|l| Letter::new(l.gamma, l.beta)).collect::<Vec<_>>();
    let rev = |w: &[Letter]| w.iter().rev().copied().collect::<Vec<_>>();
    [
        p.clone(),
        OpenChainParams { alpha: p.alpha, delta: p.delta, word: swap(&p.word) },
        OpenChainParams { alpha: p.delta, delta: p.alpha, word: rev(&p.word) },
        OpenChainParams { alpha: p.delta, delta: p.alpha, word: swap(&rev(&p.word)) },
    ]
}

/// Census by brute force: trace every colouring (all loop colours included)
/// and group the single-face ones into orbits. Returns each orbit's least
/// member with the orbit size.
pub fn brute_force_census(n: usize) -> BTreeMap<OpenChainParams, usize> {
    let tracer = Tracer::default();
    let mut single: BTreeSet<OpenChainParams> = BTreeSet::new();
    for alpha in ColorZ3::ALL {
        for delta in ColorZ3::ALL {
            for word in all_words(n - 1) {
                let p = OpenChainParams { alpha, delta, word };
                if tracer.is_single_face(&make_open_chain(&p)) {
                    single.insert(p);
                }
            }
        }
    }
    let mut out = BTreeMap::new();
    let mut seen = BTreeSet::new();
    for p in &single {
        if seen.contains(p) {
            continue;
        }
        let orbit: BTreeSet<_> = four_images(p).into_iter().collect();
        assert!(orbit.iter().all(|q| single.contains(q)), "orbit of {p} leaves the single-face set");
        seen.extend(orbit.iter().cloned());
        out.insert(orbit.iter().next().unwrap().clone(), orbit.len());
    }
    out
}

/// Chirality by comparing the mirrored tuple with each of the four images.
pub fn brute_force_chirality(p: &OpenChainParams) -> Chirality {
    let m = mirror_open_chain(p);
    if four_images(p).contains(&m) {
        Chirality::Amphichiral
    } else {
        Chirality::Chiral
    }
}

/// Orbit count by Burnside's lemma over the raw accepted tuples, counting
/// fixed points of each symmetry by tracing. `len = n - 1`.
pub fn burnside_count(len: usize) -> u64 {
    let tracer = Tracer::default();
    let single = |w: &[Letter]| {
        let p = OpenChainParams { alpha: ColorZ3::ZERO, delta: ColorZ3::ZERO, word: w.to_vec() };
        tracer.is_single_face(&make_open_chain(&p))
    };
    let half = len / 2;
    // Words determined by their first half (and middle letter).
    let mut fixed_rot = 0u64;
    let mut fixed_rot_swap = 0u64;
    for head in all_words(half) {
        let middles: Vec<Option<Letter>> =
            if len % 2 == 1 { Letter::ALL.iter().map(|&l| Some(l)).collect() } else { vec![None] };
        for mid in middles {
            let mut w = head.clone();
            w.extend(mid);
            w.extend(head.iter().rev());
            if single(&w) {
                fixed_rot += 1;
            }
            if mid.is_none_or(|m| m.beta == m.gamma) {
                let mut v = head.clone();
                v.extend(mid);
                v.extend(head.iter().rev().map(|l| l.swapped()));
                if single(&v) {
                    fixed_rot_swap += 1;
                }
            }
        }
    }
    // Swap-fixed words use only 00, 11, 22.
    let diag = [Letter::ALL[0], Letter::ALL[4], Letter::ALL[8]];
    let mut fixed_swap = 0u64;
    for code in 0..3usize.pow(len as u32) {
        let mut c = code;
        let w: Vec<Letter> = (0..len)
            .map(|_| {
                let l = diag[c % 3];
                c /= 3;
                l
            })
            .collect();
        if single(&w) {
            fixed_swap += 1;
        }
    }
    let total = raw_single_face_words(len);
    // Loop colours: 4 choices in general, 2 (alpha = delta) under the half-turn.
    (4 * total + 4 * fixed_swap + 2 * fixed_rot + 2 * fixed_rot_swap) / 4
}

/// Words of length `len` that trace to one face (loop colours 0, 0).
pub fn raw_single_face_words(len: usize) -> u64 {
    let tracer = Tracer::default();
    let mut count = 0;
    for w in all_words(len) {
        let p = OpenChainParams { alpha: ColorZ3::ZERO, delta: ColorZ3::ZERO, word: w };
        if tracer.is_single_face(&make_open_chain(&p)) {
            count += 1;
        }
    }
    count
}

/// Exact single-face counts for the closed chain with first letter `start`
/// and every other letter from the allowed four, by a transfer over the
/// strand matching of the twelve open slot ends. Returns
/// `(single_face_words, all_words)`.
pub fn closed_chain_exact(n: usize, start: Letter) -> (BigUint, BigUint) {
    let tracer = Tracer::default();
    let m = tracer.matching;
    let rule = tracer.rule;
    // Ends: 3k + s with k = 0 NW of v0, 1 SW of v0, 2 NE of last, 3 SE of last.
    const NE: u8 = 0;
    const NW: u8 = 1;
    const SW: u8 = 2;
    const SE: u8 = 3;
    let port_to_k = |p: u8| match p {
        NW => 0,
        SW => 1,
        NE => 2,
        _ => 3,
    };
    let mut first = [0u8; 12];
    for p in 0..4u8 {
        for s in 0..3u8 {
            let (q, t) = m.germ(p, s);
            first[3 * port_to_k(p) + s as usize] = (3 * port_to_k(q) + t as usize) as u8;
        }
    }

    // Appends a vertex joined to the last one by `letter`; None if a strand closes up.
    let append = |old: &[u8; 12], letter: Letter| -> Option<[u8; 12]> {
        let colour = |k: usize| if k == 2 { letter.beta } else { letter.gamma };
        let mut used = [false; 12];
        // Leaving the new vertex through port q, slot t.
        let run = |mut q: u8, mut t: u8, used: &mut [bool; 12]| -> u8 {
            loop {
                match q {
                    NE => return 6 + t,
                    SE => return 9 + t,
                    _ => {
                        let k = if q == NW { 2 } else { 3 };
                        let j = rule.to_a(t, colour(k));
                        let here = 3 * k + j as usize;
                        used[here] = true;
                        let p = old[here] as usize;
                        if p < 6 {
                            return p as u8;
                        }
                        used[p] = true;
                        let (kk, jj) = (p / 3, (p % 3) as u8);
                        let port = if kk == 2 { NW } else { SW };
                        let (q2, t2) = m.germ(port, rule.to_b(jj, colour(kk)));
                        q = q2;
                        t = t2;
                    }
                }
            }
        };
        let mut new = [u8::MAX; 12];
        for e in 0..6usize {
            if new[e] != u8::MAX {
                continue;
            }
            let p = old[e] as usize;
            let other = if p < 6 {
                p as u8
            } else {
                used[p] = true;
                let (kk, jj) = (p / 3, (p % 3) as u8);
                let port = if kk == 2 { NW } else { SW };
                let (q, t) = m.germ(port, rule.to_b(jj, colour(kk)));
                run(q, t, &mut used)
            };
            new[e] = other;
            new[other as usize] = e as u8;
        }
        for (e, port) in [(6usize, NE), (9, SE)] {
            for s in 0..3u8 {
                if new[e + s as usize] != u8::MAX {
                    continue;
                }
                let (q, t) = m.germ(port, s);
                let other = run(q, t, &mut used);
                new[e + s as usize] = other;
                new[other as usize] = (e + s as usize) as u8;
            }
        }
        if used[6..].iter().all(|&u| u) {
            Some(new)
        } else {
            None
        }
    };

    let close = |st: &[u8; 12], letter: Letter| -> bool {
        // Joins NE slot j of the last vertex to NW slot to_b(j) of v0, same for SE/SW.
        let mut link = [0u8; 12];
        for j in 0..3u8 {
            let a = 6 + j as usize;
            let b = rule.to_b(j, letter.beta) as usize;
            link[a] = b as u8;
            link[b] = a as u8;
            let a = 9 + j as usize;
            let b = 3 + rule.to_b(j, letter.gamma) as usize;
            link[a] = b as u8;
            link[b] = a as u8;
        }
        // Alternate the two matchings from end 0; one face iff all 12 are visited.
        let mut seen = 0;
        let mut e = 0usize;
        loop {
            let f = st[e] as usize;
            seen += 2;
            e = link[f] as usize;
            if e == 0 {
                break;
            }
        }
        seen == 12
    };

    let pool = CLOSED_CHAIN_LETTERS;
    let letter_at = |i: usize| -> Vec<Letter> { if i == 0 { vec![start] } else { pool.to_vec() } };
    // Edge i joins v_i and v_{i+1}; edge n - 1 closes the cycle.
    let mut states: HashMap<[u8; 12], BigUint> = HashMap::new();
    states.insert(first, BigUint::one());
    for i in 0..n - 1 {
        let mut next: HashMap<[u8; 12], BigUint> = HashMap::new();
        for (st, c) in &states {
            for l in letter_at(i) {
                if let Some(s2) = append(st, l) {
                    *next.entry(s2).or_insert_with(BigUint::zero) += c;
                }
            }
        }
        states = next;
    }
    let mut single = BigUint::zero();
    for (st, c) in &states {
        for l in letter_at(n - 1) {
            if close(st, l) {
                single += c;
            }
        }
    }
    (single, BigUint::from(4u32).pow((n - 1) as u32))
}
