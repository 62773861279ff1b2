//! File formats: spectrum CSV/JSON, coefficient JSON, summary tables.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::fmt::Write as _;

use crate::dirac::{PointSample, Provenance};
use crate::error::{Error, Result};

/// Shortest representation that parses back to the same `f64`.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:?}")
}

/// Single-sample CSV: header `lambda`, one value per row.
pub fn spectrum_csv(sample: &PointSample) -> String {
    let mut s = String::from("lambda\n");
    for p in &sample.points {
        s.push_str(&fmt_f64(*p));
        s.push('\n');
    }
    s
}

/// Pooled CSV with the path index in the first column.
pub fn pooled_spectrum_csv(samples: &[PointSample]) -> String {
    let mut s = String::from("path,lambda\n");
    for (i, sample) in samples.iter().enumerate() {
        for p in &sample.points {
            let _ = writeln!(s, "{i},{}", fmt_f64(*p));
        }
    }
    s
}

/// Reads either CSV layout back; returns `(path, lambda)` rows.
pub fn parse_spectrum_csv(text: &str) -> Result<Vec<(usize, f64)>> {
    let mut lines = text.lines();
    let header = lines.next().ok_or_else(|| Error::Io("empty CSV".into()))?;
    let pooled = match header.trim() {
        "lambda" => false,
        "path,lambda" => true,
        h => return Err(Error::Io(format!("unexpected CSV header {h:?}"))),
    };
    let bad = |l: &str| Error::Io(format!("bad CSV row {l:?}"));
    lines
        .filter(|l| !l.is_empty())
        .map(|l| {
            if pooled {
                let (a, b) = l.split_once(',').ok_or_else(|| bad(l))?;
                Ok((a.parse().map_err(|_| bad(l))?, b.parse().map_err(|_| bad(l))?))
            } else {
                Ok((0, l.parse().map_err(|_| bad(l))?))
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumDocument {
    pub model: String,
    pub seed: Option<u64>,
    pub grid: Option<String>,
    pub window: (f64, f64),
    pub paths: Vec<Vec<f64>>,
}

impl SpectrumDocument {
    pub fn from_samples(samples: &[PointSample], window: (f64, f64), fallback: &Provenance) -> Self {
        let p = samples.first().map(|s| &s.provenance).unwrap_or(fallback);
        SpectrumDocument {
            model: p.model.clone(),
            seed: fallback.seed.or(p.seed),
            grid: p.grid.clone().or_else(|| fallback.grid.clone()),
            window,
            paths: samples.iter().map(|s| s.points.clone()).collect(),
        }
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }
}

/// Coefficient file: `{"n": .., "coeffs": [[re, im], ..]}`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CoefficientFile {
    pub n: usize,
    pub coeffs: Vec<[f64; 2]>,
    /// Set for deformed (normalized at 1) coefficients.
    #[serde(default, skip_serializing_if = "std::ops::Not::not")]
    pub deformed: bool,
}

impl CoefficientFile {
    pub fn new(c: &[Complex64]) -> Self {
        CoefficientFile { n: c.len(), coeffs: c.iter().map(|z| [z.re, z.im]).collect(), deformed: false }
    }

    pub fn deformed(c: &[Complex64]) -> Self {
        CoefficientFile { deformed: true, ..Self::new(c) }
    }

    pub fn complex(&self) -> Vec<Complex64> {
        self.coeffs.iter().map(|[re, im]| Complex64::new(*re, *im)).collect()
    }

    pub fn to_json(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)?)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        let f: CoefficientFile = serde_json::from_str(s)?;
        if f.n != f.coeffs.len() {
            return Err(Error::InvalidInput(format!("n = {} but {} coefficients", f.n, f.coeffs.len())));
        }
        Ok(f)
    }
}

/// One row of a validation summary.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SummaryRow {
    pub criterion: u32,
    pub model: String,
    pub window: Option<(f64, f64)>,
    pub paths: usize,
    pub estimate: f64,
    pub standard_error: Option<f64>,
    pub threshold: f64,
    pub passed: bool,
}

pub fn summary_csv(rows: &[SummaryRow]) -> String {
    let mut s = String::from("criterion,model,window_lo,window_hi,paths,estimate,se,threshold,decision\n");
    let opt = |x: Option<f64>| x.map(fmt_f64).unwrap_or_default();
    for r in rows {
        let _ = writeln!(
            s,
            "{},{},{},{},{},{},{},{},{}",
            r.criterion,
            r.model,
            opt(r.window.map(|w| w.0)),
            opt(r.window.map(|w| w.1)),
            r.paths,
            fmt_f64(r.estimate),
            opt(r.standard_error),
            fmt_f64(r.threshold),
            if r.passed { "pass" } else { "fail" }
        );
    }
    s
}
