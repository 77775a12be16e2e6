//! Readers for FASTA, GenBank-style ORIGIN blocks and the feature TSV.

use std::collections::HashSet;
use std::fs;
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::seq::{DnaSequence, Nucleotide, Orientation, Region, RegionKind};

const ORIGIN_GROUP: usize = 10;
const ORIGIN_GROUPS_PER_LINE: usize = 6;

/// A genome together with its validated exon/intron annotations.
#[derive(Clone, Debug)]
pub struct AnnotatedGenome {
    pub sequence: DnaSequence,
    pub features: Vec<Region>,
    pub source_path: String,
}

impl AnnotatedGenome {
    pub fn new(
        sequence: DnaSequence,
        features: Vec<Region>,
        source_path: impl Into<String>,
    ) -> Result<Self> {
        let mut seen = HashSet::new();
        for f in &features {
            f.check_bounds(sequence.len())?;
            if !seen.insert(f.id.as_str()) {
                return Err(Error::DuplicateFeature(f.id.clone()));
            }
        }
        Ok(AnnotatedGenome {
            sequence,
            features,
            source_path: source_path.into(),
        })
    }

    pub fn exons(&self) -> impl Iterator<Item = &Region> {
        self.features.iter().filter(|r| r.kind == RegionKind::Exon)
    }
}

fn lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.strip_suffix('\r').unwrap_or(l)))
}

fn invalid_base(line: usize, raw: &str, byte_index: usize) -> Error {
    Error::InvalidBase {
        line,
        column: raw[..byte_index].chars().count() + 1,
        found: raw[byte_index..].chars().next().unwrap_or('?'),
    }
}

/// Parses every `>` record. Whitespace inside bodies is ignored.
pub fn parse_fasta(text: &str) -> Result<Vec<DnaSequence>> {
    let mut records: Vec<(usize, DnaSequence)> = Vec::new();
    for (line_no, line) in lines(text) {
        if let Some(header) = line.strip_prefix('>') {
            if let Some((start, rec)) = records.last() {
                if rec.is_empty() {
                    return Err(Error::EmptyRecord {
                        id: rec.id().to_string(),
                        line: *start,
                    });
                }
            }
            records.push((line_no, DnaSequence::empty(header.trim())));
            continue;
        }
        let Some((_, current)) = records.last_mut() else {
            if line.trim().is_empty() {
                continue;
            }
            return Err(Error::MissingHeader { line: line_no });
        };
        for (i, byte) in line.bytes().enumerate() {
            if byte.is_ascii_whitespace() {
                continue;
            }
            match Nucleotide::from_ascii(byte) {
                Some(b) => current.push(b),
                None => return Err(invalid_base(line_no, line, i)),
            }
        }
    }
    if let Some((start, rec)) = records.last() {
        if rec.is_empty() {
            return Err(Error::EmptyRecord {
                id: rec.id().to_string(),
                line: *start,
            });
        }
    }
    Ok(records.into_iter().map(|(_, s)| s).collect())
}

/// Parses the GenBank `ORIGIN` layout: each line is a 1-based offset followed
/// by one to six groups of one to ten bases, and the block ends with `//`.
/// Each offset must equal the number of bases read so far plus one.
pub fn parse_origin_block(text: &str) -> Result<DnaSequence> {
    let mut seq = DnaSequence::empty("origin");
    let mut seen_content = false;
    let mut terminated = false;

    for (line_no, raw) in lines(text) {
        let line = raw.trim();
        if terminated {
            if line.is_empty() {
                continue;
            }
            return Err(Error::OriginLine {
                line: line_no,
                message: "content after '//' terminator".into(),
            });
        }
        if line.is_empty() {
            continue;
        }
        if line == "//" {
            terminated = true;
            continue;
        }
        if !seen_content && line.starts_with("ORIGIN") {
            seen_content = true;
            continue;
        }
        seen_content = true;

        let line_start = raw.len() - raw.trim_start().len();
        let digits = line.bytes().take_while(u8::is_ascii_digit).count();
        if digits == 0 {
            return Err(Error::OriginLine {
                line: line_no,
                message: "expected a position offset".into(),
            });
        }
        let found: usize = line[..digits].parse().map_err(|_| Error::OriginLine {
            line: line_no,
            message: "position offset out of range".into(),
        })?;
        let expected = seq.len() + 1;
        if found != expected {
            return Err(Error::OriginOffset {
                line: line_no,
                expected,
                found,
            });
        }

        let mut groups = 0;
        let mut pos = line_start + digits;
        let bytes = raw.as_bytes();
        while pos < bytes.len() {
            if bytes[pos].is_ascii_whitespace() {
                pos += 1;
                continue;
            }
            let group_start = pos;
            while pos < bytes.len() && !bytes[pos].is_ascii_whitespace() {
                match Nucleotide::from_ascii(bytes[pos]) {
                    Some(b) => seq.push(b),
                    None => return Err(invalid_base(line_no, raw, pos)),
                }
                pos += 1;
            }
            let len = pos - group_start;
            if len > ORIGIN_GROUP {
                return Err(Error::OriginGroup {
                    line: line_no,
                    column: group_start + 1,
                    len,
                });
            }
            groups += 1;
        }
        if groups == 0 || groups > ORIGIN_GROUPS_PER_LINE {
            return Err(Error::OriginLine {
                line: line_no,
                message: format!("{groups} base groups (allowed 1-{ORIGIN_GROUPS_PER_LINE})"),
            });
        }
    }

    if !terminated {
        return Err(Error::OriginUnterminated);
    }
    Ok(seq)
}

/// Renders `seq` as an ORIGIN block: ten-base lowercase groups, six per line,
/// right-aligned 1-based offsets, closed by `//`.
pub fn render_origin_block(seq: &DnaSequence) -> String {
    let per_line = ORIGIN_GROUP * ORIGIN_GROUPS_PER_LINE;
    let mut out = String::with_capacity(seq.len() + seq.len() / 6 + 32);
    out.push_str("ORIGIN\n");
    let bases: Vec<u8> = seq.iter().map(|b| b.to_ascii().to_ascii_lowercase()).collect();
    for (i, line) in bases.chunks(per_line).enumerate() {
        out.push_str(&format!("{:>9}", i * per_line + 1));
        for group in line.chunks(ORIGIN_GROUP) {
            out.push(' ');
            out.push_str(std::str::from_utf8(group).expect("ascii"));
        }
        out.push('\n');
    }
    out.push_str("//\n");
    out
}

/// Parses the feature TSV: `id  kind  start  end  strand`, where strand is
/// `+` or `complement`. Blank lines and `#` comments are skipped.
pub fn parse_features(text: &str) -> Result<Vec<Region>> {
    let mut out = Vec::new();
    let mut seen = HashSet::new();
    for (line_no, line) in lines(text) {
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let err = |message: String| Error::Feature {
            line: line_no,
            message,
        };
        let fields: Vec<&str> = line.split('\t').map(str::trim).collect();
        if fields.len() != 5 {
            return Err(err(format!("expected 5 tab-separated fields, found {}", fields.len())));
        }
        let id = fields[0];
        if id.is_empty() {
            return Err(err("empty feature id".into()));
        }
        let kind: RegionKind = fields[1].parse().map_err(err)?;
        let start: usize = fields[2]
            .parse()
            .map_err(|_| err(format!("start '{}' is not a number", fields[2])))?;
        let end: usize = fields[3]
            .parse()
            .map_err(|_| err(format!("end '{}' is not a number", fields[3])))?;
        if start == 0 {
            return Err(err("start must be at least 1".into()));
        }
        if start > end {
            return Err(err(format!("start > end ({start} > {end})")));
        }
        let orientation = match fields[4] {
            "+" => Orientation::Forward,
            "complement" => Orientation::Complement,
            other => return Err(err(format!("unknown strand '{other}'"))),
        };
        if !seen.insert(id.to_string()) {
            return Err(err(format!("duplicate feature id '{id}'")));
        }
        out.push(Region::new(id, kind, start, end, orientation));
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SequenceFormat {
    Fasta,
    Origin,
}

/// Guesses the format from the first non-blank character: `>` is FASTA, a
/// digit or the `ORIGIN` keyword is an ORIGIN block.
pub fn detect_format(text: &str) -> Option<SequenceFormat> {
    let first = text.trim_start();
    if first.starts_with('>') {
        Some(SequenceFormat::Fasta)
    } else if first.starts_with("ORIGIN") || first.starts_with(|c: char| c.is_ascii_digit()) {
        Some(SequenceFormat::Origin)
    } else {
        None
    }
}

/// Parses text in either supported format. An ORIGIN block takes `fallback_id`.
pub fn parse_sequences(text: &str, fallback_id: &str) -> Result<Vec<DnaSequence>> {
    match detect_format(text) {
        Some(SequenceFormat::Fasta) => parse_fasta(text),
        Some(SequenceFormat::Origin) => Ok(vec![parse_origin_block(text)?.with_id(fallback_id)]),
        None if text.trim().is_empty() => Err(Error::EmptySequence),
        None => Err(Error::OriginLine {
            line: 1,
            message: "unrecognised sequence format (expected '>' or an ORIGIN block)".into(),
        }),
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::Io {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn file_stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "sequence".into())
}

pub fn read_sequences(path: impl AsRef<Path>) -> Result<Vec<DnaSequence>> {
    let path = path.as_ref();
    let text = read_text(path)?;
    parse_sequences(&text, &file_stem(path)).map_err(|e| e.in_file(path))
}

pub fn read_features(path: impl AsRef<Path>) -> Result<Vec<Region>> {
    let path = path.as_ref();
    parse_features(&read_text(path)?).map_err(|e| e.in_file(path))
}

/// Loads a single-record genome and its feature table, bounds-checking every
/// feature against the genome length.
pub fn load_annotated(
    sequence_path: impl AsRef<Path>,
    features_path: impl AsRef<Path>,
) -> Result<AnnotatedGenome> {
    let sequence_path = sequence_path.as_ref();
    let mut records = read_sequences(sequence_path)?;
    if records.len() != 1 {
        return Err(Error::OriginLine {
            line: 1,
            message: format!("expected exactly one genome record, found {}", records.len()),
        }
        .in_file(sequence_path));
    }
    let genome = records.remove(0);
    let features_path: PathBuf = features_path.as_ref().to_path_buf();
    let features = read_features(&features_path)?;
    AnnotatedGenome::new(genome, features, sequence_path.display().to_string())
        .map_err(|e| e.in_file(features_path))
}
