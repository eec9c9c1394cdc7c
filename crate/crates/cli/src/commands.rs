use std::fs::{File, OpenOptions};
use std::io::{self, BufWriter, Read, Write};
use std::ops::RangeInclusive;
use std::path::{Path, PathBuf};

use anyhow::{anyhow, bail, Context, Result};
use rayon::prelude::*;
use serde_json::{json, Value};
use spinecensus::automaton::{
    count_accepted, derive_fsa, lower_bound_refined, lower_bound_simple_ceil, upper_bounds, Automaton, DeriveError,
};
use spinecensus::census::{
    chirality_of, closed_chain_monte_carlo, enumerate_open_chain, enumerate_shard, export_gluing_table,
    finalize_census, orbit_size, shards, CensusError, CensusLine, CensusRecord, CensusWriter, Chirality,
};
use spinecensus::invariants::{InvariantError, QuantumContext, ReportTemplate};
use spinecensus::ograph::{canonical_form, make_open_chain, parse_ograph, parse_word, ChainLayout, ColorZ3, Letter, OpenChainParams};
use spinecensus::tracer::{calibrate, is_single_face, CalibrationError, Candidate, Tracer};

use crate::{ChainArgs, Cli, Command, Format, Internal, TvArgs};

const SCHEMA: u32 = 1;
// Shards handed to the pool at a time; bounds memory on large n.
const BATCH: usize = 64;

pub fn run(cli: &Cli) -> Result<()> {
    if cli.jobs == 0 {
        bail!("--jobs must be at least 1");
    }
    let pool = rayon::ThreadPoolBuilder::new().num_threads(cli.jobs).build()?;
    pool.install(|| dispatch(cli))
}

fn dispatch(cli: &Cli) -> Result<()> {
    match &cli.command {
        Command::Enumerate { n, tv, no_invariants, append } => {
            enumerate(cli, parse_range(n)?, (!no_invariants).then_some(tv), *append)
        }
        Command::Count { n } => count(cli, parse_range(n)?),
        Command::Invariants { n, chain, tv } => invariants(cli, *n, chain, tv),
        Command::Chirality { n, chain } => chirality(cli, n.as_deref(), chain),
        Command::Trace { input, faces } => trace(cli, input.as_deref(), *faces),
        Command::Fsa { calibrate } => fsa(cli, *calibrate),
        Command::Simulate { n, samples, seed, .. } => simulate(cli, *n, *samples, *seed),
        Command::Export { chain } => export(cli, chain),
        Command::Merge { parts } => merge(cli, parts),
    }
}

fn census_err(e: CensusError) -> anyhow::Error {
    match e {
        CensusError::NotSingleFace(_) | CensusError::EdgeOrbitMismatch { .. } => Internal(e.to_string()).into(),
        CensusError::Invariant(e) => invariant_err(e),
        e => e.into(),
    }
}

fn invariant_err(e: InvariantError) -> anyhow::Error {
    match e {
        InvariantError::H1Mismatch { .. } | InvariantError::Trace(_) => Internal(e.to_string()).into(),
        e => e.into(),
    }
}

fn derive_err(e: DeriveError) -> anyhow::Error {
    Internal(e.to_string()).into()
}

fn calibration_err(e: CalibrationError) -> anyhow::Error {
    Internal(e.to_string()).into()
}

/// `k`, `a..b` or `a..=b`; both ends inclusive.
fn parse_range(text: &str) -> Result<RangeInclusive<usize>> {
    let num = |s: &str| s.trim().parse::<usize>().with_context(|| format!("bad n `{text}`"));
    let (lo, hi) = match text.split_once("..") {
        Some((a, b)) => (num(a)?, num(b.strip_prefix('=').unwrap_or(b))?),
        None => {
            let k = num(text)?;
            (k, k)
        }
    };
    if lo < 2 {
        bail!("n must be at least 2 (got {lo})");
    }
    if hi < lo {
        bail!("empty range `{text}`");
    }
    Ok(lo..=hi)
}

fn open_sink(out: Option<&Path>, append: bool) -> Result<Box<dyn Write>> {
    Ok(match out {
        Some(path) => {
            let file = OpenOptions::new()
                .write(true)
                .create(true)
                .append(append)
                .truncate(!append)
                .open(path)
                .with_context(|| format!("cannot open {}", path.display()))?;
            Box::new(BufWriter::new(file))
        }
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn sink(cli: &Cli) -> Result<Box<dyn Write>> {
    open_sink(cli.out.as_deref(), false)
}

fn json_line(out: &mut dyn Write, v: &Value) -> Result<()> {
    serde_json::to_writer(&mut *out, v)?;
    out.write_all(b"\n")?;
    Ok(())
}

fn contexts(tv: &TvArgs) -> Result<Vec<QuantumContext>> {
    let k = match tv.q0.strip_suffix("pi-over-r") {
        Some("") => 1,
        Some(m) => m
            .strip_suffix('*')
            .and_then(|m| m.parse::<u32>().ok())
            .ok_or_else(|| anyhow!("bad --q0 `{}`: expected pi-over-r or K*pi-over-r", tv.q0))?,
        None => bail!("bad --q0 `{}`: expected pi-over-r or K*pi-over-r", tv.q0),
    };
    Ok(tv.tv_levels.iter().map(|&r| QuantumContext::with_multiple(r, k)).collect::<Result<_, _>>()?)
}

fn chain_params(chain: &ChainArgs) -> Result<Option<OpenChainParams>> {
    let (alpha, delta, word) = match (chain.alpha, chain.delta, &chain.word) {
        (None, None, None) => return Ok(None),
        (Some(a), Some(d), Some(w)) => (a, d, w),
        _ => bail!("--alpha, --delta and --word go together"),
    };
    let colour = |v: u8| ColorZ3::new(v).ok_or_else(|| anyhow!("colour {v} is not in 0..=2"));
    Ok(Some(OpenChainParams::new(colour(alpha)?, colour(delta)?, parse_word(word)?)?))
}

fn require_single_face(p: &OpenChainParams) -> Result<()> {
    if !is_single_face(&make_open_chain(p)) {
        bail!("colouring ({}, {}, {}) does not trace to a single face", p.alpha, p.delta, word_text(p));
    }
    Ok(())
}

fn word_text(p: &OpenChainParams) -> String {
    p.word.iter().map(|l| l.to_string()).collect::<Vec<_>>().join(",")
}

fn enumerate(cli: &Cli, range: RangeInclusive<usize>, tv: Option<&TvArgs>, append: bool) -> Result<()> {
    if !matches!(cli.format, None | Some(Format::Json)) {
        bail!("enumerate writes JSON lines only");
    }
    let ctx = tv.map(contexts).transpose()?;
    let mut w = CensusWriter::new(open_sink(cli.out.as_deref(), append)?);
    for n in range {
        let template = match &ctx {
            Some(c) => Some(ReportTemplate::with_contexts(n as u32, c).map_err(invariant_err)?),
            None => None,
        };
        let before = w.written();
        for batch in shards(n, 3).chunks(BATCH) {
            let lines: Vec<Vec<CensusLine>> = batch
                .par_iter()
                .map(|s| {
                    enumerate_shard(n, s)
                        .map(|r| {
                            let r = r.map_err(census_err)?;
                            let r = match &template {
                                Some(t) => r.with_invariants(t).map_err(invariant_err)?,
                                None => r,
                            };
                            Ok(CensusLine::from_record(&r))
                        })
                        .collect::<Result<Vec<_>>>()
                })
                .collect::<Result<_>>()?;
            for line in lines.iter().flatten() {
                w.append_line(line)?;
            }
        }
        eprintln!("n={n}: {} records", w.written() - before);
    }
    w.finish()?;
    Ok(())
}

fn count(cli: &Cli, range: RangeInclusive<usize>) -> Result<()> {
    let mut out = sink(cli)?;
    let format = cli.format.unwrap_or(Format::Csv);
    if format == Format::Csv {
        writeln!(out, "n,exact_accepted,refined_lower,simple_lower,upper_9n")?;
    }
    for n in range {
        let exact = count_accepted(n - 1) * 4u32;
        let refined = lower_bound_refined(n as u32);
        let simple = lower_bound_simple_ceil(n as u32);
        let upper = upper_bounds(n as u32).open_chain;
        match format {
            Format::Csv => writeln!(out, "{n},{exact},{refined},{simple},{upper}")?,
            Format::Text => writeln!(out, "n={n} exact={exact} refined>={refined} simple>={simple} upper<={upper}")?,
            // Decimal strings: the values outgrow 64 bits.
            Format::Json => json_line(
                &mut out,
                &json!({
                    "schema": SCHEMA, "n": n, "exact_accepted": exact.to_string(),
                    "refined_lower": refined.to_string(), "simple_lower": simple.to_string(),
                    "upper_9n": upper.to_string(),
                }),
            )?,
        }
    }
    out.flush()?;
    Ok(())
}

fn invariants(cli: &Cli, n: Option<usize>, chain: &ChainArgs, tv: &TvArgs) -> Result<()> {
    let params = match (chain_params(chain)?, n) {
        (Some(p), Some(n)) if p.n() != n => bail!("--word gives n = {}, but --n is {n}", p.n()),
        (Some(p), _) => p,
        (None, Some(n)) => {
            parse_range(&n.to_string())?;
            enumerate_open_chain(n)
                .map_err(census_err)?
                .next()
                .ok_or_else(|| Internal(format!("census for n = {n} is empty")))?
                .map_err(census_err)?
                .params
        }
        (None, None) => bail!("give --n or a colouring"),
    };
    require_single_face(&params)?;
    let template = ReportTemplate::with_contexts(params.n() as u32, &contexts(tv)?).map_err(invariant_err)?;
    let report = template.report(&params).map_err(invariant_err)?;
    let mut v = json!({
        "schema": SCHEMA,
        "alpha": params.alpha.value(),
        "delta": params.delta.value(),
        "word": params.word.iter().map(|l| [l.beta.value(), l.gamma.value()]).collect::<Vec<_>>(),
        "q0": tv.q0,
    });
    v.as_object_mut().unwrap().extend(serde_json::to_value(&report)?.as_object().unwrap().clone());
    let mut out = sink(cli)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => json_line(&mut out, &v)?,
        _ => bail!("invariants writes JSON only"),
    }
    out.flush()?;
    Ok(())
}

fn chirality(cli: &Cli, n: Option<&str>, chain: &ChainArgs) -> Result<()> {
    let mut out = sink(cli)?;
    if let Some(p) = chain_params(chain)? {
        if n.is_some() {
            bail!("give either --n or a colouring");
        }
        require_single_face(&p)?;
        let canonical = canonical_form(&p);
        let class = chirality_of(&p);
        match cli.format.unwrap_or(Format::Text) {
            Format::Text | Format::Csv => writeln!(out, "{class}")?,
            Format::Json => json_line(
                &mut out,
                &json!({
                    "schema": SCHEMA, "n": p.n(),
                    "canonical": { "alpha": canonical.alpha.value(), "delta": canonical.delta.value(),
                                   "word": word_text(&canonical) },
                    "chirality": class,
                }),
            )?,
        }
        out.flush()?;
        return Ok(());
    }
    let range = parse_range(n.ok_or_else(|| anyhow!("give --n or a colouring"))?)?;
    let format = cli.format.unwrap_or(Format::Csv);
    if format == Format::Csv {
        writeln!(out, "n,records,chiral,amphichiral")?;
    }
    for n in range {
        let (records, amphi) = shards(n, 3)
            .par_iter()
            .map(|s| {
                enumerate_shard(n, s).try_fold((0u64, 0u64), |(t, a), r| {
                    let r = r.map_err(census_err)?;
                    Ok::<_, anyhow::Error>((t + 1, a + u64::from(r.chirality == Chirality::Amphichiral)))
                })
            })
            .try_reduce(|| (0, 0), |a, b| Ok((a.0 + b.0, a.1 + b.1)))?;
        let chiral = records - amphi;
        match format {
            Format::Csv => writeln!(out, "{n},{records},{chiral},{amphi}")?,
            Format::Text => writeln!(out, "n={n} records={records} chiral={chiral} amphichiral={amphi}")?,
            Format::Json => json_line(
                &mut out,
                &json!({ "schema": SCHEMA, "n": n, "records": records, "chiral": chiral, "amphichiral": amphi }),
            )?,
        }
    }
    out.flush()?;
    Ok(())
}

fn trace(cli: &Cli, input: Option<&Path>, faces: bool) -> Result<()> {
    let mut text = String::new();
    match input {
        Some(p) if p != Path::new("-") => {
            File::open(p).with_context(|| format!("cannot open {}", p.display()))?.read_to_string(&mut text)?
        }
        _ => io::stdin().read_to_string(&mut text)?,
    };
    let g = parse_ograph(&text)?;
    let t = Tracer::default().trace_faces(&g);
    let walks: Vec<String> =
        t.faces.iter().map(|f| f.iter().map(|s| s.to_string()).collect::<Vec<_>>().join(" ")).collect();
    let mut out = sink(cli)?;
    match cli.format.unwrap_or(Format::Text) {
        Format::Json => {
            let mut v = json!({
                "schema": SCHEMA, "vertices": g.vertex_count(), "edges": g.edge_count(),
                "faces": t.face_count, "euler_characteristic": t.euler_characteristic,
            });
            if faces {
                v["walks"] = json!(walks);
            }
            json_line(&mut out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "vertices,edges,faces,euler_characteristic")?;
            writeln!(out, "{},{},{},{}", g.vertex_count(), g.edge_count(), t.face_count, t.euler_characteristic)?;
        }
        Format::Text => {
            writeln!(out, "faces {}", t.face_count)?;
            writeln!(out, "euler_characteristic {}", t.euler_characteristic)?;
            if faces {
                for (i, w) in walks.iter().enumerate() {
                    writeln!(out, "face {i}: {w}")?;
                }
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn fsa(cli: &Cli, recalibrate: bool) -> Result<()> {
    let (tracer, layout) = if recalibrate {
        let c = calibrate().map_err(calibration_err)?;
        eprintln!("calibration: {} candidates, {} survivors", c.examined, c.survivors.len());
        if c.chosen != Candidate::standard() {
            return Err(Internal("calibration does not select the shipped convention".into()).into());
        }
        (c.chosen.tracer(), c.chosen.layout)
    } else {
        (Tracer::default(), ChainLayout::STANDARD)
    };
    let a = derive_fsa(&tracer, layout).map_err(derive_err)?;
    if a != Automaton::standard() {
        return Err(Internal("derived automaton differs from the shipped table".into()).into());
    }
    let mut out = sink(cli)?;
    match cli.format.unwrap_or(Format::Text) {
        Format::Text | Format::Csv => out.write_all(a.table_text().as_bytes())?,
        Format::Json => {
            let names: Vec<String> = a.states().iter().map(|s| s.to_string()).collect();
            let transitions: Vec<Value> = (0..a.state_count())
                .map(|s| {
                    let row: serde_json::Map<String, Value> = Letter::ALL
                        .iter()
                        .map(|&l| (l.to_string(), json!(names[a.next(s, l)])))
                        .collect();
                    json!({ "state": names[s], "next": row })
                })
                .collect();
            json_line(
                &mut out,
                &json!({
                    "schema": SCHEMA, "start": names[a.start()],
                    "accept": a.accept_states().iter().map(|s| s.to_string()).collect::<Vec<_>>(),
                    "transitions": transitions,
                }),
            )?;
        }
    }
    out.flush()?;
    Ok(())
}

fn simulate(cli: &Cli, n: usize, samples: u64, seed: Option<u64>) -> Result<()> {
    let seed = match seed {
        Some(s) => s,
        None => match std::env::var("SPINECENSUS_SEED") {
            Ok(v) => v.trim().parse().with_context(|| format!("bad SPINECENSUS_SEED `{v}`"))?,
            Err(_) => 0,
        },
    };
    let report = closed_chain_monte_carlo(n, samples, seed).map_err(census_err)?;
    let mut out = sink(cli)?;
    match cli.format.unwrap_or(Format::Json) {
        Format::Json => {
            let mut v = serde_json::to_value(&report)?;
            v.as_object_mut().unwrap().insert("schema".into(), json!(SCHEMA));
            json_line(&mut out, &v)?;
        }
        Format::Csv => {
            writeln!(out, "start,samples,single_face,frequency")?;
            for s in &report.per_start {
                writeln!(out, "{},{},{},{}", s.start, s.samples, s.single_face_count, s.frequency)?;
            }
            writeln!(out, "all,{},{},{}", report.samples, report.single_face_count, report.frequency)?;
        }
        Format::Text => {
            writeln!(out, "n={} samples={} seed={}", report.n, report.samples, report.seed)?;
            writeln!(out, "single-face frequency {} ({})", report.frequency, report.single_face_count)?;
            for s in &report.per_start {
                writeln!(out, "  start {}: {} of {}", s.start, s.single_face_count, s.samples)?;
            }
        }
    }
    out.flush()?;
    Ok(())
}

fn export(cli: &Cli, chain: &ChainArgs) -> Result<()> {
    let p = chain_params(chain)?.ok_or_else(|| anyhow!("export needs --alpha, --delta and --word"))?;
    require_single_face(&p)?;
    let record = CensusRecord { n: p.n(), orbit_size: orbit_size(&p), params: p, chirality: Chirality::Chiral, invariants: None };
    let table = export_gluing_table(&record).map_err(census_err)?;
    let mut out = sink(cli)?;
    out.write_all(table.to_text().as_bytes())?;
    out.flush()?;
    Ok(())
}

fn merge(cli: &Cli, parts: &[PathBuf]) -> Result<()> {
    let out = cli.out.as_deref().ok_or_else(|| anyhow!("merge needs --out"))?;
    let written = finalize_census(parts, out).map_err(census_err)?;
    eprintln!("{written} records");
    Ok(())
}
