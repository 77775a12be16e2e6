//! Nucleotides, 2-bit packed sequences, annotated regions and base composition.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

const BASES_PER_WORD: usize = 32;

/// One of the four DNA bases.
///
/// The discriminant is the 2-bit code used for packing. Complementary bases
/// differ only in the low bit, so `A <-> T` and `G <-> C` is `code ^ 1`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[repr(u8)]
pub enum Nucleotide {
    A = 0,
    T = 1,
    G = 2,
    C = 3,
}

impl Nucleotide {
    pub const ALL: [Nucleotide; 4] = [Nucleotide::A, Nucleotide::T, Nucleotide::G, Nucleotide::C];

    #[inline]
    pub fn code(self) -> u8 {
        self as u8
    }

    #[inline]
    pub fn from_code(code: u8) -> Nucleotide {
        Self::ALL[(code & 0b11) as usize]
    }

    /// Case-insensitive parse of a single ASCII byte.
    #[inline]
    pub fn from_ascii(byte: u8) -> Option<Nucleotide> {
        match byte {
            b'A' | b'a' => Some(Nucleotide::A),
            b'T' | b't' => Some(Nucleotide::T),
            b'G' | b'g' => Some(Nucleotide::G),
            b'C' | b'c' => Some(Nucleotide::C),
            _ => None,
        }
    }

    #[inline]
    pub fn to_ascii(self) -> u8 {
        b"ATGC"[self as usize]
    }

    #[inline]
    pub fn complement(self) -> Nucleotide {
        Self::from_code(self.code() ^ 1)
    }
}

impl fmt::Display for Nucleotide {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_ascii() as char)
    }
}

/// An identified DNA sequence stored at 2 bits per base.
///
/// Base `i` lives in word `i / 32`, most significant pair first, so any block
/// of up to 32 bases can be read out as an integer code in constant time and
/// codes order the same way as the `A < T < G < C` alphabet.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct DnaSequence {
    id: String,
    words: Vec<u64>,
    len: usize,
}

impl DnaSequence {
    pub fn empty(id: impl Into<String>) -> Self {
        DnaSequence {
            id: id.into(),
            words: Vec::new(),
            len: 0,
        }
    }

    pub fn with_capacity(id: impl Into<String>, capacity: usize) -> Self {
        DnaSequence {
            id: id.into(),
            words: Vec::with_capacity(capacity.div_ceil(BASES_PER_WORD)),
            len: 0,
        }
    }

    pub fn from_bases<I>(id: impl Into<String>, bases: I) -> Self
    where
        I: IntoIterator<Item = Nucleotide>,
    {
        let iter = bases.into_iter();
        let mut seq = DnaSequence::with_capacity(id, iter.size_hint().0);
        for b in iter {
            seq.push(b);
        }
        seq
    }

    /// Parses a bare base string (no whitespace, case-insensitive).
    pub fn parse(id: impl Into<String>, text: &str) -> Result<Self> {
        let mut seq = DnaSequence::with_capacity(id, text.len());
        for (i, &byte) in text.as_bytes().iter().enumerate() {
            match Nucleotide::from_ascii(byte) {
                Some(b) => seq.push(b),
                None => {
                    return Err(Error::InvalidBase {
                        line: 1,
                        column: i + 1,
                        found: text[i..].chars().next().unwrap_or('?'),
                    })
                }
            }
        }
        Ok(seq)
    }

    #[inline]
    pub fn push(&mut self, base: Nucleotide) {
        let slot = self.len % BASES_PER_WORD;
        if slot == 0 {
            self.words.push(0);
        }
        let word = self.words.last_mut().expect("word allocated above");
        *word |= (base.code() as u64) << (62 - 2 * slot);
        self.len += 1;
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn set_id(&mut self, id: impl Into<String>) {
        self.id = id.into();
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Self {
        self.id = id.into();
        self
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<Nucleotide> {
        (index < self.len).then(|| self.base_unchecked(index))
    }

    #[inline]
    fn base_unchecked(&self, index: usize) -> Nucleotide {
        let word = self.words[index / BASES_PER_WORD];
        let shift = 62 - 2 * (index % BASES_PER_WORD);
        Nucleotide::from_code((word >> shift) as u8)
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = Nucleotide> + DoubleEndedIterator + '_ {
        (0..self.len).map(move |i| self.base_unchecked(i))
    }

    /// Packed code of the `block_len` bases starting at `start` (0-based),
    /// first base most significant. `block_len` must be in `1..=32` and the
    /// block must lie inside the sequence.
    #[inline]
    pub fn block_code(&self, start: usize, block_len: usize) -> u64 {
        debug_assert!((1..=32).contains(&block_len));
        debug_assert!(start + block_len <= self.len);
        let w = start / BASES_PER_WORD;
        let offset = 2 * (start % BASES_PER_WORD);
        let mut bits = self.words[w] << offset;
        if offset != 0 && offset + 2 * block_len > 64 {
            bits |= self.words[w + 1] >> (64 - offset);
        }
        bits >> (64 - 2 * block_len)
    }

    pub fn reverse_complement(&self) -> DnaSequence {
        DnaSequence::from_bases(self.id.clone(), self.iter().rev().map(Nucleotide::complement))
    }

    /// Copy of the 0-based half-open range `start..end`.
    pub fn slice(&self, start: usize, end: usize) -> DnaSequence {
        DnaSequence::from_bases(self.id.clone(), (start..end).map(|i| self.base_unchecked(i)))
    }

    pub fn extend_from(&mut self, other: &DnaSequence) {
        for b in other.iter() {
            self.push(b);
        }
    }

    pub fn counts(&self) -> [usize; 4] {
        let mut counts = [0usize; 4];
        for b in self.iter() {
            counts[b as usize] += 1;
        }
        counts
    }

    pub fn composition(&self) -> Result<BaseComposition> {
        composition(self)
    }
}

impl fmt::Display for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let text: String = self.iter().map(|b| b.to_ascii() as char).collect();
        f.write_str(&text)
    }
}

impl fmt::Debug for DnaSequence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "DnaSequence({:?}, {} bp, \"{}\")", self.id, self.len, self)
    }
}

impl FromStr for DnaSequence {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        DnaSequence::parse("", s)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RegionKind {
    Exon,
    Intron,
    Other,
}

impl FromStr for RegionKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "exon" => Ok(RegionKind::Exon),
            "intron" => Ok(RegionKind::Intron),
            "other" => Ok(RegionKind::Other),
            _ => Err(format!("unknown region kind '{s}'")),
        }
    }
}

impl fmt::Display for RegionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            RegionKind::Exon => "exon",
            RegionKind::Intron => "intron",
            RegionKind::Other => "other",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Orientation {
    Forward,
    Complement,
}

/// An annotated span of a genome, 1-based and inclusive at both ends.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Region {
    pub id: String,
    pub kind: RegionKind,
    pub start: usize,
    pub end: usize,
    pub orientation: Orientation,
}

impl Region {
    pub fn new(
        id: impl Into<String>,
        kind: RegionKind,
        start: usize,
        end: usize,
        orientation: Orientation,
    ) -> Self {
        Region {
            id: id.into(),
            kind,
            start,
            end,
            orientation,
        }
    }

    pub fn len(&self) -> usize {
        self.end + 1 - self.start
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn check_bounds(&self, genome_len: usize) -> Result<()> {
        if self.start >= 1 && self.start <= self.end && self.end <= genome_len {
            Ok(())
        } else {
            Err(Error::RegionOutOfBounds {
                id: self.id.clone(),
                start: self.start,
                end: self.end,
                len: genome_len,
            })
        }
    }
}

/// Relative frequencies of the four bases.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct BaseComposition {
    pub a: f64,
    pub t: f64,
    pub g: f64,
    pub c: f64,
}

impl BaseComposition {
    pub fn get(&self, base: Nucleotide) -> f64 {
        match base {
            Nucleotide::A => self.a,
            Nucleotide::T => self.t,
            Nucleotide::G => self.g,
            Nucleotide::C => self.c,
        }
    }
}

pub fn composition(seq: &DnaSequence) -> Result<BaseComposition> {
    if seq.is_empty() {
        return Err(Error::EmptySequence);
    }
    let counts = seq.counts();
    let n = seq.len() as f64;
    Ok(BaseComposition {
        a: counts[0] as f64 / n,
        t: counts[1] as f64 / n,
        g: counts[2] as f64 / n,
        c: counts[3] as f64 / n,
    })
}

pub fn reverse_complement(seq: &DnaSequence) -> DnaSequence {
    seq.reverse_complement()
}

/// Cuts `region` out of `genome`, reverse-complementing complement-strand
/// regions. The result carries the region id.
pub fn extract_region(genome: &DnaSequence, region: &Region) -> Result<DnaSequence> {
    region.check_bounds(genome.len())?;
    let forward = genome.slice(region.start - 1, region.end);
    let seq = match region.orientation {
        Orientation::Forward => forward,
        Orientation::Complement => forward.reverse_complement(),
    };
    Ok(seq.with_id(region.id.clone()))
}

/// Concatenates the extracted regions in list order.
pub fn concat_regions(genome: &DnaSequence, regions: &[Region]) -> Result<DnaSequence> {
    let total = regions.iter().map(Region::len).sum();
    let mut out = DnaSequence::with_capacity("", total);
    for region in regions {
        out.extend_from(&extract_region(genome, region)?);
    }
    Ok(out)
}
