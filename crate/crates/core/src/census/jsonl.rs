//! JSON-lines census files: appended record by record, then merged into one
//! sorted file.

use std::collections::BTreeMap;
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::{CensusError, CensusRecord, Chirality};
use crate::ograph::{ColorZ3, Letter, OpenChainParams};

pub const SCHEMA_VERSION: u32 = 1;

/// One line of a census file.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CensusLine {
    pub schema: u32,
    pub n: usize,
    pub alpha: u8,
    pub delta: u8,
    pub word: Vec<[u8; 2]>,
    pub orbit_size: u8,
    pub chirality: Chirality,
    pub h1_rank: Option<usize>,
    pub volume: Option<f64>,
    pub tv: BTreeMap<u32, f64>,
}

impl CensusLine {
    pub fn from_record(r: &CensusRecord) -> Self {
        let p = &r.params;
        CensusLine {
            schema: SCHEMA_VERSION,
            n: r.n,
            alpha: p.alpha.value(),
            delta: p.delta.value(),
            word: p.word.iter().map(|l| [l.beta.value(), l.gamma.value()]).collect(),
            orbit_size: r.orbit_size,
            chirality: r.chirality,
            h1_rank: r.invariants.as_ref().map(|i| i.h1_rank),
            volume: r.invariants.as_ref().map(|i| i.volume),
            tv: r.invariants.as_ref().map(|i| i.tv.clone()).unwrap_or_default(),
        }
    }

    pub fn params(&self) -> Option<OpenChainParams> {
        let word = self
            .word
            .iter()
            .map(|&[b, g]| Some(Letter::new(ColorZ3::new(b)?, ColorZ3::new(g)?)))
            .collect::<Option<Vec<_>>>()?;
        OpenChainParams::new(ColorZ3::new(self.alpha)?, ColorZ3::new(self.delta)?, word).ok()
    }

    fn sort_key(&self) -> (usize, u8, u8, &[[u8; 2]]) {
        (self.n, self.alpha, self.delta, &self.word)
    }
}

/// Appends records to a census file, one JSON object per line.
pub struct CensusWriter<W: Write> {
    out: W,
    written: u64,
}

impl<W: Write> CensusWriter<W> {
    pub fn new(out: W) -> Self {
        CensusWriter { out, written: 0 }
    }

    pub fn append(&mut self, r: &CensusRecord) -> Result<(), CensusError> {
        self.append_line(&CensusLine::from_record(r))
    }

    pub fn append_line(&mut self, line: &CensusLine) -> Result<(), CensusError> {
        serde_json::to_writer(&mut self.out, line).map_err(std::io::Error::from)?;
        self.out.write_all(b"\n")?;
        self.written += 1;
        Ok(())
    }

    pub fn written(&self) -> u64 {
        self.written
    }

    pub fn finish(mut self) -> Result<W, CensusError> {
        self.out.flush()?;
        Ok(self.out)
    }
}

/// Reads a census file. Blank lines are skipped; a truncated last line (as
/// left by an interrupted run) is an error like any other malformed line.
pub fn read_census<R: BufRead>(input: R) -> Result<Vec<CensusLine>, CensusError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let rec: CensusLine =
            serde_json::from_str(&line).map_err(|e| CensusError::BadLine { line: i + 1, message: e.to_string() })?;
        if rec.schema != SCHEMA_VERSION {
            return Err(CensusError::BadLine { line: i + 1, message: format!("unknown schema {}", rec.schema) });
        }
        if rec.params().is_none() {
            return Err(CensusError::BadLine { line: i + 1, message: "colour out of range".into() });
        }
        out.push(rec);
    }
    Ok(out)
}

/// Merges partial census files into one file sorted by `(n, params)`.
/// Records present in several parts are kept once. Returns the line count.
pub fn finalize_census(parts: &[impl AsRef<Path>], out: &Path) -> Result<u64, CensusError> {
    let mut all = Vec::new();
    for p in parts {
        all.extend(read_census(BufReader::new(File::open(p)?))?);
    }
    all.sort_by(|a, b| a.sort_key().cmp(&b.sort_key()));
    all.dedup_by(|a, b| a.sort_key() == b.sort_key());
    let mut w = CensusWriter::new(BufWriter::new(File::create(out)?));
    for line in &all {
        w.append_line(line)?;
    }
    let written = w.written();
    w.finish()?;
    Ok(written)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::census::enumerate_open_chain;
    use crate::invariants::ReportTemplate;

    #[test]
    fn round_trip_and_merge() {
        let template = ReportTemplate::new(3, &[3, 5]).unwrap();
        let recs: Vec<_> =
            enumerate_open_chain(3).unwrap().map(|r| r.unwrap().with_invariants(&template).unwrap()).collect();
        let dir = tempfile::tempdir().unwrap();
        let (a, b) = (dir.path().join("a.jsonl"), dir.path().join("b.jsonl"));
        // Two overlapping parts written out of order.
        let mut wa = CensusWriter::new(File::create(&a).unwrap());
        for r in recs.iter().rev() {
            wa.append(r).unwrap();
        }
        wa.finish().unwrap();
        let mut wb = CensusWriter::new(File::create(&b).unwrap());
        wb.append(&recs[0]).unwrap();
        wb.finish().unwrap();

        let merged = dir.path().join("census.jsonl");
        assert_eq!(finalize_census(&[&a, &b], &merged).unwrap(), recs.len() as u64);
        let back = read_census(BufReader::new(File::open(&merged).unwrap())).unwrap();
        let expect: Vec<_> = recs.iter().map(CensusLine::from_record).collect();
        assert_eq!(back, expect);
        assert_eq!(back[0].params().unwrap(), recs[0].params);
        assert_eq!(back[0].tv.len(), 2);
    }

    #[test]
    fn field_names() {
        let r = enumerate_open_chain(2).unwrap().next().unwrap().unwrap();
        let v: serde_json::Value = serde_json::to_value(CensusLine::from_record(&r)).unwrap();
        for key in ["schema", "n", "alpha", "delta", "word", "orbit_size", "chirality", "h1_rank", "volume", "tv"] {
            assert!(v.get(key).is_some(), "{key}");
        }
        assert!(v["chirality"] == "CHIRAL" || v["chirality"] == "AMPHICHIRAL");
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(read_census("{\"schema\":1".as_bytes()), Err(CensusError::BadLine { line: 1, .. })));
        let line = r#"{"schema":2,"n":2,"alpha":0,"delta":0,"word":[[0,2]],"orbit_size":2,"chirality":"CHIRAL","h1_rank":null,"volume":null,"tv":{}}"#;
        assert!(read_census(format!("\n{line}\n").as_bytes()).is_err());
        let ok = line.replace("\"schema\":2", "\"schema\":1");
        assert_eq!(read_census(ok.as_bytes()).unwrap().len(), 1);
    }
}
