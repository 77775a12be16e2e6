//! Tabular output (CSV and JSON) for the command-line tool, plus the glue
//! that turns an input file and optional feature table into the list of
//! sequences to analyse.

use std::collections::BTreeMap;
use std::io::{self, Write};
use std::path::Path;

use serde::Serialize;

use crate::benchmark::{
    correction_table, corrected_profile, CorrectedProfile, CorrectionTable, EnsembleConfig, RNG_ALGORITHM,
};
use crate::correlate::AutocorrSeries;
use crate::entropy::{entropy_profile, BlockRange, CountMode, EntropyProfile};
use crate::error::{Error, Result};
use crate::ingest::{load_annotated, read_sequences, AnnotatedGenome};
use crate::seq::{concat_regions, extract_region, DnaSequence, Region};
use crate::walsh::RandomnessReport;

pub const TOTAL_CODING_ID: &str = "total_coding";
const FASTA_WIDTH: usize = 60;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Csv,
    Json,
}

/// Formats `x` with six significant digits in plain decimal notation.
pub fn sig6(x: f64) -> String {
    if !x.is_finite() {
        return x.to_string();
    }
    if x == 0.0 {
        return "0".to_string();
    }
    let magnitude = x.abs().log10().floor() as i32;
    let decimals = (5 - magnitude).max(0) as usize;
    let s = format!("{x:.decimals$}");
    // rounding can carry into a new leading digit (9.999996 -> 10.00000)
    let rounded: f64 = s.parse().unwrap_or(x);
    let carried = rounded.abs().log10().floor() as i32;
    if carried != magnitude && decimals > 0 {
        format!("{x:.prec$}", prec = decimals - 1)
    } else {
        s
    }
}

/// Everything needed to reproduce a table.
#[derive(Clone, Debug, Serialize)]
pub struct RunMetadata {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub rng: Option<&'static str>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ensemble_size: Option<usize>,
    pub mode: CountMode,
    pub beta: f64,
    pub block_range: String,
}

impl RunMetadata {
    pub fn new(command: &str, range: BlockRange, mode: CountMode, beta: f64) -> Self {
        RunMetadata {
            tool: env!("CARGO_PKG_NAME"),
            version: env!("CARGO_PKG_VERSION"),
            command: command.to_string(),
            seed: None,
            rng: None,
            ensemble_size: None,
            mode,
            beta,
            block_range: range.to_string(),
        }
    }

    pub fn with_ensemble(mut self, seed: u64, ensemble_size: usize) -> Self {
        self.seed = Some(seed);
        self.rng = Some(RNG_ALGORITHM);
        self.ensemble_size = Some(ensemble_size);
        self
    }

    fn write_csv_comment<W: Write + ?Sized>(&self, w: &mut W) -> io::Result<()> {
        writeln!(w, "# tool={} version={}", self.tool, self.version)?;
        writeln!(w, "# command={}", self.command)?;
        if let (Some(seed), Some(rng), Some(size)) = (self.seed, self.rng, self.ensemble_size) {
            writeln!(w, "# seed={seed} rng={rng} ensemble_size={size}")?;
        }
        writeln!(w, "# mode={} beta={} L={}", self.mode, self.beta, self.block_range)
    }
}

/// Sequences an analysis command runs on: the records of the input file or,
/// with a feature table, one sequence per feature followed by
/// `total_coding` (all exons concatenated in file order) when any exon exists.
pub struct AnalysisInput {
    pub sequences: Vec<DnaSequence>,
    pub warnings: Vec<String>,
}

pub fn load_inputs(input: &Path, features: Option<&Path>) -> Result<AnalysisInput> {
    match features {
        None => Ok(AnalysisInput {
            sequences: read_sequences(input)?,
            warnings: Vec::new(),
        }),
        Some(features) => {
            let genome = load_annotated(input, features)?;
            feature_sequences(&genome)
        }
    }
}

pub fn feature_sequences(genome: &AnnotatedGenome) -> Result<AnalysisInput> {
    let mut sequences = genome
        .features
        .iter()
        .map(|r| extract_region(&genome.sequence, r))
        .collect::<Result<Vec<_>>>()?;
    let exons: Vec<Region> = genome.exons().cloned().collect();
    let mut warnings = Vec::new();
    if exons.is_empty() {
        warnings.push(format!(
            "no exon features in {}; {TOTAL_CODING_ID} record not written",
            genome.source_path
        ));
    } else {
        sequences.push(concat_regions(&genome.sequence, &exons)?.with_id(TOTAL_CODING_ID));
    }
    Ok(AnalysisInput { sequences, warnings })
}

pub fn write_fasta<W: Write + ?Sized>(w: &mut W, sequences: &[DnaSequence]) -> io::Result<()> {
    for seq in sequences {
        writeln!(w, ">{}", seq.id())?;
        let text = seq.to_string();
        for chunk in text.as_bytes().chunks(FASTA_WIDTH) {
            w.write_all(chunk)?;
            w.write_all(b"\n")?;
        }
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EntropyRow {
    pub sequence_id: String,
    pub length: usize,
    #[serde(rename = "L")]
    pub block_len: usize,
    pub h_block: f64,
    pub h_per_base: f64,
}

pub fn entropy_rows(profiles: &[EntropyProfile]) -> Vec<EntropyRow> {
    profiles
        .iter()
        .flat_map(|p| {
            p.entries.iter().map(|e| EntropyRow {
                sequence_id: p.sequence_id.clone(),
                length: p.length,
                block_len: e.block_len,
                h_block: e.block_entropy,
                h_per_base: e.per_base,
            })
        })
        .collect()
}

pub fn write_entropy<W: Write + ?Sized>(w: &mut W, format: Format, meta: &RunMetadata, rows: &[EntropyRow]) -> io::Result<()> {
    match format {
        Format::Csv => {
            meta.write_csv_comment(w)?;
            writeln!(w, "sequence_id,length,L,h_block,h_per_base")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{},{}",
                    r.sequence_id,
                    r.length,
                    r.block_len,
                    sig6(r.h_block),
                    sig6(r.h_per_base)
                )?;
            }
            Ok(())
        }
        Format::Json => write_json(w, meta, rows),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchmarkRow {
    pub length: usize,
    #[serde(rename = "L")]
    pub block_len: usize,
    pub mean_random_h: f64,
    pub delta: f64,
}

pub fn benchmark_rows(tables: &[CorrectionTable]) -> Vec<BenchmarkRow> {
    tables
        .iter()
        .flat_map(|t| {
            t.entries.iter().map(|e| BenchmarkRow {
                length: t.length,
                block_len: e.block_len,
                mean_random_h: e.mean_random_h,
                delta: e.delta,
            })
        })
        .collect()
}

pub fn write_benchmark<W: Write + ?Sized>(
    w: &mut W,
    format: Format,
    meta: &RunMetadata,
    rows: &[BenchmarkRow],
) -> io::Result<()> {
    match format {
        Format::Csv => {
            meta.write_csv_comment(w)?;
            writeln!(w, "length,L,mean_random_h,delta")?;
            for r in rows {
                writeln!(w, "{},{},{},{}", r.length, r.block_len, sig6(r.mean_random_h), sig6(r.delta))?;
            }
            Ok(())
        }
        Format::Json => write_json(w, meta, rows),
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ReportRow {
    pub sequence_id: String,
    pub length: usize,
    #[serde(rename = "L")]
    pub block_len: usize,
    pub h_raw: f64,
    pub delta: f64,
    pub h_corrected: f64,
}

/// Raw profile, matched-length correction table and corrected profile for
/// every sequence. Sequences of equal length share one table.
pub fn corrected_profiles(
    sequences: &[DnaSequence],
    config: &EnsembleConfig,
) -> Result<(Vec<CorrectedProfile>, Vec<CorrectionTable>)> {
    let mut tables: BTreeMap<usize, CorrectionTable> = BTreeMap::new();
    let mut out = Vec::with_capacity(sequences.len());
    for seq in sequences {
        let profile = entropy_profile(seq, config.range, config.mode, config.beta)
            .map_err(|e| with_sequence(e, seq))?;
        let table = match tables.get(&seq.len()) {
            Some(t) => t,
            None => {
                let cfg = EnsembleConfig {
                    length: seq.len(),
                    ..config.clone()
                };
                let t = correction_table(&cfg).map_err(|e| with_sequence(e, seq))?;
                tables.entry(seq.len()).or_insert(t)
            }
        };
        out.push(corrected_profile(&profile, table)?);
    }
    Ok((out, tables.into_values().collect()))
}

fn with_sequence(e: Error, seq: &DnaSequence) -> Error {
    e.in_sequence(seq.id())
}

pub fn report_rows(profiles: &[CorrectedProfile]) -> Vec<ReportRow> {
    profiles
        .iter()
        .flat_map(|p| {
            p.entries.iter().map(|e| ReportRow {
                sequence_id: p.sequence_id.clone(),
                length: p.length,
                block_len: e.block_len,
                h_raw: e.h_raw,
                delta: e.delta,
                h_corrected: e.h_corrected,
            })
        })
        .collect()
}

pub fn write_report<W: Write + ?Sized>(w: &mut W, format: Format, meta: &RunMetadata, rows: &[ReportRow]) -> io::Result<()> {
    match format {
        Format::Csv => {
            meta.write_csv_comment(w)?;
            writeln!(w, "sequence_id,length,L,h_raw,delta,h_corrected")?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{}",
                    r.sequence_id,
                    r.length,
                    r.block_len,
                    sig6(r.h_raw),
                    sig6(r.delta),
                    sig6(r.h_corrected)
                )?;
            }
            Ok(())
        }
        Format::Json => write_json(w, meta, rows),
    }
}

pub fn write_autocorr<W: Write + ?Sized>(w: &mut W, format: Format, series: &AutocorrSeries) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(w, "lag,value")?;
            for (lag, value) in series.rows() {
                writeln!(w, "{lag},{}", sig6(value))?;
            }
            Ok(())
        }
        Format::Json => {
            #[derive(Serialize)]
            struct Row {
                lag: isize,
                value: f64,
            }
            let rows: Vec<Row> = series.rows().map(|(lag, value)| Row { lag, value }).collect();
            serde_json::to_writer_pretty(&mut *w, &rows)?;
            writeln!(w)
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct WalshRow {
    pub sequence_id: String,
    pub original_length: usize,
    pub adjusted_length: usize,
    pub adjustment: String,
    pub independent_count: usize,
    pub r_numerator: usize,
    pub r_denominator: usize,
}

impl From<&RandomnessReport> for WalshRow {
    fn from(r: &RandomnessReport) -> Self {
        WalshRow {
            sequence_id: r.sequence_id.clone(),
            original_length: r.original_length,
            adjusted_length: r.adjusted_length,
            adjustment: r.adjustment.to_string(),
            independent_count: r.independent_count,
            r_numerator: r.independent_count,
            r_denominator: r.adjusted_length,
        }
    }
}

pub fn write_walsh<W: Write + ?Sized>(w: &mut W, format: Format, rows: &[WalshRow]) -> io::Result<()> {
    match format {
        Format::Csv => {
            writeln!(
                w,
                "sequence_id,original_length,adjusted_length,adjustment,independent_count,r_numerator,r_denominator"
            )?;
            for r in rows {
                writeln!(
                    w,
                    "{},{},{},{},{},{},{}",
                    r.sequence_id,
                    r.original_length,
                    r.adjusted_length,
                    r.adjustment,
                    r.independent_count,
                    r.r_numerator,
                    r.r_denominator
                )?;
            }
            Ok(())
        }
        Format::Json => {
            serde_json::to_writer_pretty(&mut *w, rows)?;
            writeln!(w)
        }
    }
}

fn write_json<W: Write + ?Sized, T: Serialize>(w: &mut W, meta: &RunMetadata, rows: &[T]) -> io::Result<()> {
    #[derive(Serialize)]
    struct Document<'a, T> {
        metadata: &'a RunMetadata,
        rows: &'a [T],
    }
    serde_json::to_writer_pretty(&mut *w, &Document { metadata: meta, rows })?;
    writeln!(w)
}
