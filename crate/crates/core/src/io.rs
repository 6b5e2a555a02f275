//! Input parsing, corpus tokenization, reports and curve files.
//!
//! Input grammars:
//!
//! * `integers`: one positive integer per line, blank lines ignored.
//! * `counts`: `value count` per line (whitespace separated), both >= 1.
//! * `corpus`: free text. Tokens are maximal runs of Unicode alphabetic characters after
//!   lowercasing; each distinct token contributes its frequency as one datum.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::model::{IntegerSample, PowerLawModel};
use crate::pipeline::{fit_at_a, scan, FitAtA, ScanConfig, ScanResult};
use crate::sample::RNG_ALGORITHM;

pub const SCHEMA_VERSION: u32 = 1;
pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

/// p-values at or below this are reported as a rejected power law.
pub const REJECTION_LEVEL: f64 = 0.05;

pub const CURVE_HEADER: &str = "n\temp_f\tfit_f\temp_S\tfit_S";

const TOKENIZER_NOTE: &str = "corpus tokens are lowercase runs of alphabetic characters; \
     counts may differ from other tokenizations";
const SCAN_P_NOTE: &str = "p-values are per cutoff; the p-value of the whole selection \
     procedure is not the one obtained for a fixed cutoff";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum InputFormat {
    Integers,
    Counts,
    Corpus,
}

impl FromStr for InputFormat {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "integers" => Ok(InputFormat::Integers),
            "counts" => Ok(InputFormat::Counts),
            "corpus" => Ok(InputFormat::Corpus),
            other => Err(Error::Config(format!(
                "unknown input format '{other}' (expected integers, counts or corpus)"
            ))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TextEncoding {
    Utf8,
    Latin1,
}

impl FromStr for TextEncoding {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "utf-8" | "utf8" => Ok(TextEncoding::Utf8),
            "latin-1" | "latin1" | "iso-8859-1" => Ok(TextEncoding::Latin1),
            other => Err(Error::Config(format!("unsupported encoding '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InputSpec {
    pub path: PathBuf,
    pub format: InputFormat,
    pub encoding: TextEncoding,
}

impl InputSpec {
    pub fn new(path: impl Into<PathBuf>, format: InputFormat) -> Self {
        InputSpec {
            path: path.into(),
            format,
            encoding: TextEncoding::Utf8,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CorpusStats {
    pub tokens: u64,
    pub types: u64,
}

/// A parsed input together with what the report needs to identify it.
#[derive(Debug, Clone)]
pub struct LoadedInput {
    pub sample: IntegerSample,
    pub sha256: String,
    pub corpus: Option<CorpusStats>,
}

pub fn parse_integers(text: &str) -> Result<IntegerSample> {
    let mut values = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let v: u64 = line.parse().map_err(|_| Error::Parse {
            line: i + 1,
            msg: format!("expected a positive integer, got '{line}'"),
        })?;
        if v == 0 {
            return Err(Error::Parse {
                line: i + 1,
                msg: "zero is outside the support (values must be >= 1)".into(),
            });
        }
        values.push(v);
    }
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    IntegerSample::from_values(values)
}

pub fn parse_counts(text: &str) -> Result<IntegerSample> {
    let mut pairs = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.is_empty() {
            continue;
        }
        let err = |msg: String| Error::Parse { line: i + 1, msg };
        if fields.len() != 2 {
            return Err(err(format!(
                "expected 'value count', got {} fields",
                fields.len()
            )));
        }
        let value: u64 = fields[0]
            .parse()
            .map_err(|_| err(format!("bad value '{}'", fields[0])))?;
        let count: u64 = fields[1]
            .parse()
            .map_err(|_| err(format!("bad count '{}'", fields[1])))?;
        if value == 0 || count == 0 {
            return Err(err("value and count must both be >= 1".into()));
        }
        pairs.push((value, count));
    }
    if pairs.is_empty() {
        return Err(Error::EmptyInput);
    }
    IntegerSample::from_counts(pairs)
}

/// Word frequencies of a text.
pub fn word_frequencies(text: &str) -> BTreeMap<String, u64> {
    let lower = text.to_lowercase();
    let mut freq = BTreeMap::new();
    for token in lower.split(|c: char| !c.is_alphabetic()) {
        if !token.is_empty() {
            *freq.entry(token.to_string()).or_insert(0) += 1;
        }
    }
    freq
}

/// The multiset of word frequencies of a text, with token and type counts.
pub fn parse_corpus(text: &str) -> Result<(IntegerSample, CorpusStats)> {
    let freq = word_frequencies(text);
    if freq.is_empty() {
        return Err(Error::EmptyInput);
    }
    let stats = CorpusStats {
        tokens: freq.values().sum(),
        types: freq.len() as u64,
    };
    Ok((IntegerSample::from_values(freq.into_values())?, stats))
}

pub fn decode(bytes: &[u8], encoding: TextEncoding) -> Result<String> {
    match encoding {
        TextEncoding::Utf8 => String::from_utf8(bytes.to_vec())
            .map_err(|e| Error::Io(format!("input is not valid UTF-8: {e}"))),
        TextEncoding::Latin1 => Ok(bytes.iter().map(|&b| b as char).collect()),
    }
}

pub fn load(spec: &InputSpec) -> Result<LoadedInput> {
    let bytes = fs::read(&spec.path)
        .map_err(|e| Error::Io(format!("cannot read {}: {e}", spec.path.display())))?;
    let sha256 = hex_digest(&bytes);
    let text = decode(&bytes, spec.encoding)?;
    let (sample, corpus) = match spec.format {
        InputFormat::Integers => (parse_integers(&text)?, None),
        InputFormat::Counts => (parse_counts(&text)?, None),
        InputFormat::Corpus => {
            let (s, c) = parse_corpus(&text)?;
            (s, Some(c))
        }
    };
    Ok(LoadedInput {
        sample,
        sha256,
        corpus,
    })
}

/// Reads an input file into a sample.
pub fn ingest(spec: &InputSpec) -> Result<IntegerSample> {
    Ok(load(spec)?.sample)
}

fn hex_digest(bytes: &[u8]) -> String {
    let digest = Sha256::digest(bytes);
    let mut s = String::with_capacity(64);
    for b in digest {
        let _ = write!(s, "{b:02x}");
    }
    s
}

/// One integer per line, ascending.
pub fn write_integers<W: Write>(sample: &IntegerSample, mut w: W) -> Result<()> {
    for v in sample.values() {
        writeln!(w, "{v}")?;
    }
    Ok(())
}

/// `value count` per line, ascending by value.
pub fn write_counts<W: Write>(sample: &IntegerSample, mut w: W) -> Result<()> {
    for &(v, c) in sample.counts() {
        writeln!(w, "{v} {c}")?;
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputProvenance {
    pub path: String,
    pub format: InputFormat,
    pub sha256: String,
    pub n_data: u64,
    pub n_distinct: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub corpus: Option<CorpusStats>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum ReportBody {
    Fit {
        fit: FitAtA,
        verdict: String,
    },
    Scan {
        config: ScanConfig,
        scan: ScanResult,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRecord {
    pub schema_version: u32,
    pub tool_version: String,
    pub rng_algorithm: String,
    pub seed: u64,
    pub n_sim: u64,
    pub input: InputProvenance,
    pub result: ReportBody,
    pub notes: Vec<String>,
}

pub fn verdict(p: f64) -> &'static str {
    if p <= REJECTION_LEVEL {
        "rejected"
    } else {
        "not rejected"
    }
}

fn provenance(spec: &InputSpec, loaded: &LoadedInput) -> InputProvenance {
    InputProvenance {
        path: spec.path.display().to_string(),
        format: spec.format,
        sha256: loaded.sha256.clone(),
        n_data: loaded.sample.len(),
        n_distinct: loaded.sample.counts().len() as u64,
        corpus: loaded.corpus,
    }
}

/// Fit at a fixed cutoff, wrapped with provenance.
pub fn run_fit(input: &InputSpec, a: u64, n_sim: u64, seed: u64) -> Result<ReportRecord> {
    let loaded = load(input)?;
    let fit = fit_at_a(&loaded.sample, a, n_sim, seed)?;
    let mut notes = Vec::new();
    if input.format == InputFormat::Corpus {
        notes.push(TOKENIZER_NOTE.to_string());
    }
    if fit.unreliable {
        notes.push(format!(
            "{} replica refits failed and were regenerated",
            fit.failed_replicas
        ));
    }
    let verdict = verdict(fit.p.p).to_string();
    Ok(ReportRecord {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed,
        n_sim,
        input: provenance(input, &loaded),
        result: ReportBody::Fit { fit, verdict },
        notes,
    })
}

/// Full cutoff scan, wrapped with provenance.
pub fn run_scan(input: &InputSpec, config: &ScanConfig) -> Result<ReportRecord> {
    let loaded = load(input)?;
    let result = scan(&loaded.sample, config)?;
    let mut notes = vec![SCAN_P_NOTE.to_string()];
    if input.format == InputFormat::Corpus {
        notes.push(TOKENIZER_NOTE.to_string());
    }
    if result.a_star.is_none() {
        notes.push("no acceptable power-law tail".to_string());
    }
    let flagged: Vec<String> = result
        .fits
        .iter()
        .filter(|f| f.unreliable)
        .map(|f| f.a.to_string())
        .collect();
    if !flagged.is_empty() {
        notes.push(format!(
            "more than 1% of replica refits failed at a = {}",
            flagged.join(", ")
        ));
    }
    Ok(ReportRecord {
        schema_version: SCHEMA_VERSION,
        tool_version: TOOL_VERSION.to_string(),
        rng_algorithm: RNG_ALGORITHM.to_string(),
        seed: config.seed,
        n_sim: config.n_sim,
        input: provenance(input, &loaded),
        result: ReportBody::Scan {
            config: config.clone(),
            scan: result,
        },
        notes,
    })
}

impl ReportRecord {
    /// Machine-readable form, stable across runs with the same inputs.
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    /// Human-readable table.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(
            out,
            "input: {} ({:?}, {} data, {} distinct, sha256 {})",
            self.input.path,
            self.input.format,
            self.input.n_data,
            self.input.n_distinct,
            &self.input.sha256[..12]
        );
        if let Some(c) = self.input.corpus {
            let _ = writeln!(out, "corpus: {} tokens, {} types", c.tokens, c.types);
        }
        let _ = writeln!(out, "seed: {}  replicas: {}", self.seed, self.n_sim);
        let _ = writeln!(out);
        let header = format!(
            "{:>8} {:>8} {:>10} {:>9} {:>9} {:>7} {:>7}",
            "a", "N_a", "beta", "sigma", "d_emp", "p", "sigma_p"
        );
        let row = |f: &FitAtA| {
            format!(
                "{:>8} {:>8} {:>10.4} {:>9.4} {:>9.5} {:>7.3} {:>7.3}{}",
                f.a,
                f.n_a,
                f.beta_emp,
                f.sigma,
                f.d_emp,
                f.p.p,
                f.p.sigma_p,
                if f.unreliable { "  *" } else { "" }
            )
        };
        match &self.result {
            ReportBody::Fit { fit, verdict } => {
                let _ = writeln!(out, "{header}");
                let _ = writeln!(out, "{}", row(fit));
                let _ = writeln!(out);
                let _ = writeln!(
                    out,
                    "power law {verdict} (p <= {REJECTION_LEVEL} counts as a bad fit)"
                );
            }
            ReportBody::Scan { scan, .. } => {
                let _ = writeln!(out, "{header}");
                for f in &scan.fits {
                    let _ = writeln!(out, "{}", row(f));
                }
                for s in &scan.skipped {
                    let _ = writeln!(out, "{:>8} skipped: {}", s.a, s.reason);
                }
                let _ = writeln!(out);
                match scan.selected() {
                    Some(f) => {
                        let _ = writeln!(
                            out,
                            "a* = {}  beta* = {:.4} +- {:.4}  (N_a* = {}, p = {:.3} +- {:.3}, threshold p > {})",
                            f.a, f.beta_emp, f.sigma, f.n_a, f.p.p, f.p.sigma_p, scan.p_threshold
                        );
                    }
                    None => {
                        let _ = writeln!(
                            out,
                            "no acceptable power-law tail (no cutoff with p > {})",
                            scan.p_threshold
                        );
                    }
                }
            }
        }
        for n in &self.notes {
            let _ = writeln!(out, "note: {n}");
        }
        out
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveRow {
    pub n: u64,
    pub emp_f: f64,
    pub fit_f: f64,
    pub emp_s: f64,
    pub fit_s: f64,
}

/// Empirical and fitted f(n) and S(n), one row per distinct value.
#[derive(Debug, Clone, PartialEq)]
pub struct CurveFile {
    pub rows: Vec<CurveRow>,
}

impl CurveFile {
    /// `sample` must already be truncated at the model's cutoff.
    pub fn build(sample: &IntegerSample, model: &PowerLawModel) -> Result<Self> {
        let a = model.a();
        match sample.min() {
            None => return Err(Error::EmptyTail { a }),
            Some(m) if m < a => return Err(Error::Mismatch { a, value: m }),
            Some(_) => {}
        }
        let n_a = sample.len() as f64;
        let rows = sample
            .counts()
            .iter()
            .map(|&(n, c)| {
                Ok(CurveRow {
                    n,
                    emp_f: c as f64 / n_a,
                    fit_f: model.pmf(n)?,
                    emp_s: sample.survival_count(n) as f64 / n_a,
                    fit_s: model.survival(n)?,
                })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(CurveFile { rows })
    }

    pub fn to_tsv(&self) -> String {
        let mut s = String::with_capacity(32 * (self.rows.len() + 1));
        s.push_str(CURVE_HEADER);
        s.push('\n');
        for r in &self.rows {
            let _ = writeln!(
                s,
                "{}\t{:e}\t{:e}\t{:e}\t{:e}",
                r.n, r.emp_f, r.fit_f, r.emp_s, r.fit_s
            );
        }
        s
    }
}

/// Writes the curve file for `model` to `destination`.
pub fn emit_curves(
    sample: &IntegerSample,
    model: &PowerLawModel,
    destination: &Path,
) -> Result<CurveFile> {
    let curves = CurveFile::build(sample, model)?;
    fs::write(destination, curves.to_tsv())
        .map_err(|e| Error::Io(format!("cannot write {}: {e}", destination.display())))?;
    Ok(curves)
}
