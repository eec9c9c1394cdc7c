//! Acceptance criteria 1 to 10. Runs without the test harness so that every
//! criterion prints one PASS/FAIL line; exits nonzero if any fails.

mod common;

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::time::Instant;

use num_bigint::BigUint;
use spinecensus::automaton::{
    derive_fsa, lower_bound_refined, lower_bound_simple_ceil, Automaton, PatternState,
};
use spinecensus::census::{
    classify_chirality, closed_chain_monte_carlo, cumulative_count, enumerate_open_chain, enumerate_open_chain_parallel,
    Chirality, CLOSED_CHAIN_STARTS,
};
use spinecensus::invariants::{
    homology_h1, lobachevsky, manifold_volume_with, turaev_viro, QuadratureBackend, QuantumContext, ReportTemplate,
};
use spinecensus::ograph::{canonical_form, make_open_chain, mirror_open_chain, ChainLayout, ColorZ3, OpenChainParams};
use spinecensus::tracer::{boundary_word, PolyhedronCode, Tracer};

type Outcome = Result<String, String>;

fn check(cond: bool, what: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(what())
    }
}

fn criterion_1() -> Outcome {
    let t0 = Instant::now();
    let a = derive_fsa(&Tracer::default(), ChainLayout::STANDARD).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    use PatternState::*;
    check(a.states()[a.start()] == Xyyx, || "start is not XYYX".into())?;
    check(a.accept_states() == vec![Xxyy, Xyxy], || format!("accept set {:?}", a.accept_states()))?;
    let fail = a.index_of(Fail).ok_or("no FAIL state")?;
    check(!a.is_accepting(fail), || "FAIL accepts".into())?;
    check((0..9).all(|i| a.next(fail, spinecensus::ograph::Letter::ALL[i]) == fail), || "FAIL not absorbing".into())?;
    check(a.is_class_constant(), || "transitions not constant on A0..A3".into())?;
    let n1 = a.letters_between(Xyyx, Xxyy).len();
    let n2 = a.letters_between(Xxyy, Xyxy).len();
    let n3 = a.letters_between(Xyxy, Xyyx).len();
    let self_loop = a.letters_between(Xxyy, Xxyy).len();
    check((n1, n2, n3) == (6, 4, 6), || format!("letter counts {n1}, {n2}, {n3}"))?;
    check(self_loop > 0, || "no XXYY self-loop".into())?;
    check(a == Automaton::standard(), || "derived table differs from shipped table".into())?;
    check(elapsed.as_secs_f64() < 1.0, || format!("derivation took {elapsed:?}"))?;
    Ok(format!("6/4/6 letters, {self_loop} self-loop letters, derived in {:.1} ms", elapsed.as_secs_f64() * 1e3))
}

fn criterion_2() -> Outcome {
    let a = Automaton::standard();
    let tracer = Tracer::default();
    let mut traces = 0u64;
    for k in 1..=7 {
        let mut mismatches = 0u64;
        for word in common::all_words(k) {
            let p = OpenChainParams { alpha: ColorZ3::ZERO, delta: ColorZ3::ZERO, word };
            let traced = tracer.is_single_face(&make_open_chain(&p));
            traces += 1;
            if traced != a.accepts(&p.word) {
                mismatches += 1;
            }
        }
        check(mismatches == 0, || format!("{mismatches} discrepancies at length {k}"))?;
    }
    // The loop colours: alpha, delta in {0, 1} never matter; 2 never gives one face.
    for k in 1..=4 {
        for word in common::all_words(k) {
            let acc = a.accepts(&word);
            for alpha in ColorZ3::ALL {
                for delta in ColorZ3::ALL {
                    let p = OpenChainParams { alpha, delta, word: word.clone() };
                    let expect = acc && alpha != ColorZ3::TWO && delta != ColorZ3::TWO;
                    traces += 1;
                    check(tracer.is_single_face(&make_open_chain(&p)) == expect, || format!("discrepancy at {p}"))?;
                }
            }
        }
    }
    Ok(format!("{traces} traces, zero discrepancies"))
}

fn criterion_3() -> Outcome {
    let a = Automaton::standard();
    for n in 2..=40u32 {
        let exact = BigUint::from(4u32) * a.count_accepted(n as usize - 1);
        let refined = lower_bound_refined(n);
        let simple = lower_bound_simple_ceil(n);
        check(exact >= refined && refined >= simple, || format!("n={n}: {exact} / {refined} / {simple}"))?;
    }
    Ok("4*count_accepted(n-1) >= refined >= ceil(4*12^((2n-5)/3)) for 2 <= n <= 40".into())
}

fn criterion_4() -> Outcome {
    let t0 = Instant::now();
    let total = cumulative_count(9).map_err(|e| e.to_string())?;
    let elapsed = t0.elapsed();
    check(total >= 115_000, || format!("only {total} records"))?;
    // Independent count by Burnside's lemma over traced colourings.
    for n in 2..=7 {
        let streamed = enumerate_open_chain(n).unwrap().count() as u64;
        let burnside = common::burnside_count(n - 1);
        check(streamed == burnside, || format!("n={n}: census {streamed}, Burnside {burnside}"))?;
    }
    let threads = rayon::current_num_threads();
    check(elapsed.as_secs() < 600, || format!("enumeration took {elapsed:?}"))?;
    Ok(format!("{total} records for n <= 9 in {:.1} s on {threads} thread(s); Burnside agrees for n <= 7", elapsed.as_secs_f64()))
}

fn criterion_5() -> Outcome {
    let tracer = Tracer::default();
    let mut total = 0;
    for n in 2..=6 {
        let streamed: Vec<_> = enumerate_open_chain(n).unwrap().map(Result::unwrap).collect();
        let brute = common::brute_force_census(n);
        check(streamed.len() == brute.len(), || format!("n={n}: {} vs {}", streamed.len(), brute.len()))?;
        for r in &streamed {
            let size = brute.get(&r.params).ok_or_else(|| format!("n={n}: {} not in brute-force census", r.params))?;
            check(*size == r.orbit_size as usize, || format!("orbit size of {}", r.params))?;
            check(matches!(r.orbit_size, 1 | 2 | 4), || format!("orbit size {}", r.orbit_size))?;
        }
        // Distinct records give non-isomorphic polyhedra.
        let mut codes: Vec<_> =
            streamed.iter().map(|r| PolyhedronCode::new(&tracer, &make_open_chain(&r.params), false)).collect();
        codes.sort();
        codes.dedup();
        check(codes.len() == streamed.len(), || format!("n={n}: two records share a polyhedron"))?;
        total += streamed.len();
    }
    Ok(format!("{total} records for n <= 6 match brute force; orbit sizes in {{1,2,4}}; polyhedra pairwise distinct"))
}

fn criterion_6() -> Outcome {
    let tracer = Tracer::default();
    let mut checked = 0u64;
    for n in 2..=8 {
        for r in enumerate_open_chain_parallel(n).map_err(|e| e.to_string())? {
            let g = make_open_chain(&r.params);
            let h = homology_h1(&g).map_err(|e| e.to_string())?;
            check(h.rank == n && h.torsion.is_empty(), || format!("{}: H1 = {h:?}", r.params))?;
            let rel = boundary_word(&tracer.trace_faces(&g), &g).map_err(|e| e.to_string())?;
            check(rel.relations.len() == 1 && rel.relations[0].len() == n + 1, || "relation shape".into())?;
            let row = &rel.relations[0];
            check(row.iter().all(|x| [-3, -1, 1, 3].contains(x)), || format!("relation {row:?}"))?;
            check(row.iter().any(|x| x.abs() == 1), || format!("relation {row:?} has no unit"))?;
            checked += 1;
        }
    }
    Ok(format!("{checked} records: H1 = Z^n, relations in {{-3,-1,1,3}} with a unit entry"))
}

fn criterion_7() -> Outcome {
    let oct = 8.0 * lobachevsky(PI / 4.0);
    let mut worst = 0.0f64;
    for n in 2..=50 {
        let a = manifold_volume_with(n, QuadratureBackend::AdaptiveSimpson).map_err(|e| e.to_string())?;
        let b = manifold_volume_with(n, QuadratureBackend::GaussLegendre).map_err(|e| e.to_string())?;
        worst = worst.max((a - b).abs());
        check((a - b).abs() < 1e-8, || format!("n={n}: {a} vs {b}"))?;
        check(a < n as f64 * oct, || format!("n={n}: volume {a} not below n*8L(pi/4)"))?;
    }
    let v100 = manifold_volume_with(100, QuadratureBackend::AdaptiveSimpson).map_err(|e| e.to_string())?;
    let gap = oct - v100 / 100.0;
    check(gap > 0.0 && gap < 0.01, || format!("per-tetrahedron gap at n=100: {gap}"))?;
    Ok(format!("backends agree to {worst:.1e}; gap at n=100 is {gap:.2e}"))
}

fn criterion_8() -> Outcome {
    for n in 2..=12 {
        let ctx = QuantumContext::new(3).unwrap();
        let tv = turaev_viro(n, &ctx).map_err(|e| e.to_string())?;
        check((tv - 1.0).abs() < 1e-12, || format!("TV_3 = {tv} at n={n}"))?;
        for r in 3..=12 {
            turaev_viro(n, &QuantumContext::new(r).unwrap()).map_err(|e| format!("n={n} r={r}: {e}"))?;
        }
    }
    let levels: Vec<u32> = (3..=12).collect();
    let mut members = 0;
    for n in 2..=5 {
        let mut reference = None;
        for r in enumerate_open_chain(n).unwrap() {
            // A fresh template per record, so nothing is shared between them.
            let rep = ReportTemplate::new(n as u32, &levels)
                .and_then(|t| t.report(&r.unwrap().params))
                .map_err(|e| e.to_string())?;
            match &reference {
                None => reference = Some(rep.tv.clone()),
                Some(tv) => check(*tv == rep.tv, || format!("n={n}: TV differs between members"))?,
            }
            members += 1;
        }
    }
    Ok(format!("TV_3 = 1 for n <= 12; real for r in 3..=12; identical over {members} members (n <= 5)"))
}

fn criterion_9() -> Outcome {
    let seed = 20_240_601;
    let report = closed_chain_monte_carlo(40, 10_000, seed).map_err(|e| e.to_string())?;
    check((0.45..=0.55).contains(&report.frequency), || format!("frequency {}", report.frequency))?;
    // Trend: exact probabilities at n = 10, 20, 40, 80 by transfer, and the
    // sampled frequencies inside a 5-sigma band around them.
    let mut prev_gap = f64::INFINITY;
    let mut sampled = Vec::new();
    for n in [10usize, 20, 40, 80] {
        let (mut single, mut total) = (BigUint::ZERO, BigUint::ZERO);
        for start in CLOSED_CHAIN_STARTS {
            let (s, t) = common::closed_chain_exact(n, start);
            single += s;
            total += t;
        }
        let exact = single.to_string().parse::<f64>().unwrap() / total.to_string().parse::<f64>().unwrap();
        let gap = (exact - 0.5).abs();
        check(gap <= prev_gap, || format!("exact gap grows at n={n}"))?;
        prev_gap = gap;
        let mc = closed_chain_monte_carlo(n, 10_000, seed).map_err(|e| e.to_string())?;
        let sigma = (exact * (1.0 - exact) / 10_000.0).sqrt();
        check((mc.frequency - exact).abs() <= 5.0 * sigma, || format!("n={n}: {} vs exact {exact}", mc.frequency))?;
        sampled.push(format!("{n}:{:.4}", mc.frequency));
    }
    Ok(format!(
        "n=40 frequency {:.4}; exact probability 1/2 at n = 10, 20, 40, 80; sampled {}",
        report.frequency,
        sampled.join(" ")
    ))
}

fn criterion_10() -> Outcome {
    let tracer = Tracer::default();
    let mut amphichiral = Vec::new();
    for n in 2..=6 {
        let mut count = 0;
        let census: BTreeMap<_, _> =
            enumerate_open_chain(n).unwrap().map(|r| r.unwrap()).map(|r| (r.params.clone(), r)).collect();
        for r in census.values() {
            let c = classify_chirality(r);
            let mirror = canonical_form(&mirror_open_chain(&r.params));
            let mirror_rec = census.get(&mirror).ok_or_else(|| format!("mirror of {} not in census", r.params))?;
            check(classify_chirality(mirror_rec) == c, || format!("{}: not involution-consistent", r.params))?;
            check(common::brute_force_chirality(&r.params) == c, || format!("{}: brute force disagrees", r.params))?;
            // Orientation reversal of the polyhedron itself.
            let g = make_open_chain(&r.params);
            let same = PolyhedronCode::new(&tracer, &g, false) == PolyhedronCode::new(&tracer, &g, true);
            check(same == (c == Chirality::Amphichiral), || format!("{}: polyhedron check disagrees", r.params))?;
            count += (c == Chirality::Amphichiral) as usize;
        }
        amphichiral.push(format!("{n}:{count}"));
    }
    Ok(format!("amphichiral counts {}", amphichiral.join(" ")))
}

type Criterion = (&'static str, fn() -> Outcome);

fn main() {
    let criteria: [Criterion; 10] = [
        ("FSA structure", criterion_1),
        ("oracle equivalence", criterion_2),
        ("growth bounds", criterion_3),
        ("census scale", criterion_4),
        ("dedup soundness", criterion_5),
        ("homology", criterion_6),
        ("volume numerics", criterion_7),
        ("Turaev-Viro", criterion_8),
        ("closed-chain Monte Carlo", criterion_9),
        ("chirality", criterion_10),
    ];
    let mut failed = 0;
    for (i, (name, f)) in criteria.iter().enumerate() {
        let t0 = Instant::now();
        let outcome = std::panic::catch_unwind(f).unwrap_or_else(|_| Err("panicked".into()));
        let secs = t0.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {:>2} {name}: PASS ({detail}) [{secs:.1} s]", i + 1),
            Err(why) => {
                failed += 1;
                println!("criterion {:>2} {name}: FAIL ({why}) [{secs:.1} s]", i + 1);
            }
        }
    }
    if failed > 0 {
        println!("{failed} criteria failed");
        std::process::exit(1);
    }
    println!("all 10 criteria passed");
}
