//! Frequency-based block entropy over substrings of length `L`.
//!
//! Blocks are read straight out of the 2-bit packed sequence as integer
//! codes. For `L <= DENSE_MAX_LEN` the counts live in a dense `4^L` table,
//! beyond that in a hash map keyed by code.

use std::collections::HashMap;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{DnaSequence, Nucleotide};

pub const MAX_BLOCK_LEN: usize = 32;
const DENSE_MAX_LEN: usize = 10;

/// How blocks are laid over the sequence.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CountMode {
    /// Blocks at 1, L+1, 2L+1, ...; a trailing remainder shorter than L is dropped.
    #[default]
    NonOverlapping,
    /// Every window of length L.
    Sliding,
}

impl FromStr for CountMode {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "blocks" | "non_overlapping" | "non-overlapping" => Ok(CountMode::NonOverlapping),
            "sliding" => Ok(CountMode::Sliding),
            _ => Err(format!("unknown counting mode '{s}' (expected blocks or sliding)")),
        }
    }
}

impl fmt::Display for CountMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CountMode::NonOverlapping => "non_overlapping",
            CountMode::Sliding => "sliding",
        })
    }
}

/// Inclusive range of block lengths.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockRange {
    pub min: usize,
    pub max: usize,
}

impl BlockRange {
    pub fn new(min: usize, max: usize) -> Result<Self> {
        if min == 0 {
            return Err(Error::ZeroBlockLength);
        }
        if min > max {
            return Err(Error::InvalidRange(format!("{min} > {max}")));
        }
        if max > MAX_BLOCK_LEN {
            return Err(Error::BlockLengthUnsupported(max));
        }
        Ok(BlockRange { min, max })
    }

    pub fn single(len: usize) -> Result<Self> {
        BlockRange::new(len, len)
    }

    pub fn iter(&self) -> RangeInclusive<usize> {
        self.min..=self.max
    }

    pub fn len(&self) -> usize {
        self.max - self.min + 1
    }

    pub fn is_empty(&self) -> bool {
        false
    }
}

impl Default for BlockRange {
    /// Pairs plus the codon-and-longer sweep, 2..=9.
    fn default() -> Self {
        BlockRange { min: 2, max: 9 }
    }
}

impl FromStr for BlockRange {
    type Err = Error;

    /// Accepts `5`, `3..9`, `3..=9` or `3-9`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || Error::InvalidRange(format!("cannot parse '{s}'"));
        let parts: Option<(&str, &str)> = s
            .split_once("..=")
            .or_else(|| s.split_once(".."))
            .or_else(|| s.split_once('-'));
        match parts {
            Some((a, b)) => {
                let min = a.trim().parse().map_err(|_| bad())?;
                let max = b.trim().parse().map_err(|_| bad())?;
                BlockRange::new(min, max)
            }
            None => BlockRange::single(s.parse().map_err(|_| bad())?),
        }
    }
}

impl fmt::Display for BlockRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}..{}", self.min, self.max)
    }
}

#[derive(Clone, Debug, PartialEq)]
enum Counts {
    Dense(Vec<u32>),
    Sparse(HashMap<u64, u32>),
}

/// Occurrence counts of every length-`L` block of a sequence.
#[derive(Clone, Debug, PartialEq)]
pub struct BlockDistribution {
    block_len: usize,
    counts: Counts,
    total_blocks: u64,
    beta: f64,
}

/// Decodes a packed block code back into its base string.
pub fn decode_block(code: u64, block_len: usize) -> String {
    (0..block_len)
        .rev()
        .map(|i| Nucleotide::from_code((code >> (2 * i)) as u8).to_ascii() as char)
        .collect()
}

/// Packs a base string into its block code.
pub fn encode_block(block: &str) -> Result<u64> {
    if block.is_empty() || block.len() > MAX_BLOCK_LEN {
        return Err(Error::BlockMismatch {
            block: block.into(),
            block_len: block.len(),
        });
    }
    block.bytes().enumerate().try_fold(0u64, |acc, (i, b)| {
        let n = Nucleotide::from_ascii(b).ok_or(Error::InvalidBase {
            line: 1,
            column: i + 1,
            found: b as char,
        })?;
        Ok((acc << 2) | n.code() as u64)
    })
}

/// Counts the length-`block_len` blocks of `seq` under `mode`.
pub fn count_blocks(seq: &DnaSequence, block_len: usize, mode: CountMode) -> Result<BlockDistribution> {
    if block_len == 0 {
        return Err(Error::ZeroBlockLength);
    }
    if block_len > seq.len() {
        return Err(Error::BlockTooLong {
            block_len,
            len: seq.len(),
        });
    }
    if block_len > MAX_BLOCK_LEN {
        return Err(Error::BlockLengthUnsupported(block_len));
    }

    let n = seq.len();
    let mut total_blocks = 0u64;
    let counts = if block_len <= DENSE_MAX_LEN {
        let mut table = vec![0u32; 1 << (2 * block_len)];
        for_each_block(seq, block_len, mode, |code| {
            table[code as usize] += 1;
            total_blocks += 1;
        });
        Counts::Dense(table)
    } else {
        let expected = match mode {
            CountMode::NonOverlapping => n / block_len,
            CountMode::Sliding => n - block_len + 1,
        };
        let mut map = HashMap::with_capacity(expected);
        for_each_block(seq, block_len, mode, |code| {
            *map.entry(code).or_insert(0) += 1;
            total_blocks += 1;
        });
        Counts::Sparse(map)
    };

    Ok(BlockDistribution {
        block_len,
        counts,
        total_blocks,
        beta: 0.0,
    })
}

#[inline]
fn for_each_block(seq: &DnaSequence, block_len: usize, mode: CountMode, mut f: impl FnMut(u64)) {
    let n = seq.len();
    match mode {
        CountMode::NonOverlapping => {
            for start in (0..=n - block_len).step_by(block_len) {
                f(seq.block_code(start, block_len));
            }
        }
        CountMode::Sliding => {
            let mask = if block_len == 32 {
                u64::MAX
            } else {
                (1u64 << (2 * block_len)) - 1
            };
            let mut code = seq.block_code(0, block_len);
            f(code);
            for next in seq.iter().skip(block_len) {
                code = ((code << 2) | next.code() as u64) & mask;
                f(code);
            }
        }
    }
}

impl BlockDistribution {
    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn total_blocks(&self) -> u64 {
        self.total_blocks
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    /// Sets the additive smoothing constant (0 is maximum likelihood,
    /// 1 is Laplace). Negative or non-finite values are clamped to 0.
    pub fn with_beta(mut self, beta: f64) -> Self {
        self.beta = if beta.is_finite() && beta > 0.0 { beta } else { 0.0 };
        self
    }

    /// Number of possible blocks, `4^L`.
    pub fn cardinality(&self) -> f64 {
        4f64.powi(self.block_len as i32)
    }

    pub fn count_code(&self, code: u64) -> u64 {
        match &self.counts {
            Counts::Dense(t) => t.get(code as usize).copied().unwrap_or(0) as u64,
            Counts::Sparse(m) => m.get(&code).copied().unwrap_or(0) as u64,
        }
    }

    pub fn count(&self, block: &str) -> Result<u64> {
        self.check_block(block)?;
        Ok(self.count_code(encode_block(block)?))
    }

    fn check_block(&self, block: &str) -> Result<()> {
        if block.len() != self.block_len {
            return Err(Error::BlockMismatch {
                block: block.into(),
                block_len: self.block_len,
            });
        }
        Ok(())
    }

    /// Observed blocks and their counts, ascending by code.
    pub fn observed(&self) -> Vec<(u64, u64)> {
        match &self.counts {
            Counts::Dense(t) => t
                .iter()
                .enumerate()
                .filter(|(_, &c)| c > 0)
                .map(|(code, &c)| (code as u64, c as u64))
                .collect(),
            Counts::Sparse(m) => {
                let mut v: Vec<_> = m.iter().map(|(&k, &c)| (k, c as u64)).collect();
                v.sort_unstable();
                v
            }
        }
    }

    /// Observed blocks as strings, for display and tests.
    pub fn to_map(&self) -> std::collections::BTreeMap<String, u64> {
        self.observed()
            .into_iter()
            .map(|(code, c)| (decode_block(code, self.block_len), c))
            .collect()
    }

    fn probability_of_count(&self, count: u64) -> f64 {
        (count as f64 + self.beta) / (self.total_blocks as f64 + self.beta * self.cardinality())
    }

    /// `(n(g) + beta) / (n + beta * 4^L)`.
    pub fn estimate_probability(&self, block: &str) -> Result<f64> {
        self.check_block(block)?;
        if self.total_blocks == 0 {
            return Err(Error::NoBlocks);
        }
        Ok(self.probability_of_count(self.count(block)?))
    }

    /// Shannon entropy of the block distribution in bits, with `0 log 0 = 0`.
    /// With `beta > 0` the unseen blocks contribute their smoothed mass too.
    pub fn block_entropy(&self) -> f64 {
        if self.total_blocks == 0 {
            return 0.0;
        }
        let observed = self.observed();
        let mut h = 0.0;
        for &(_, c) in &observed {
            let p = self.probability_of_count(c);
            if p > 0.0 {
                h -= p * p.log2();
            }
        }
        if self.beta > 0.0 {
            let unseen = self.cardinality() - observed.len() as f64;
            let q = self.probability_of_count(0);
            if unseen > 0.0 && q > 0.0 {
                h -= unseen * q * q.log2();
            }
        }
        h.max(0.0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyEntry {
    pub block_len: usize,
    /// Block entropy in bits.
    pub block_entropy: f64,
    /// Block entropy divided by the block length, bits per base.
    pub per_base: f64,
}

/// Raw per-base block entropies of one sequence over a range of `L`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EntropyProfile {
    pub sequence_id: String,
    pub length: usize,
    pub entries: Vec<EntropyEntry>,
}

impl EntropyProfile {
    pub fn get(&self, block_len: usize) -> Option<&EntropyEntry> {
        self.entries.iter().find(|e| e.block_len == block_len)
    }
}

pub fn block_entropy(dist: &BlockDistribution) -> f64 {
    dist.block_entropy()
}

/// Block entropy of `seq` for every `L` in `range`, computed in parallel and
/// returned in ascending `L`.
pub fn entropy_profile(
    seq: &DnaSequence,
    range: BlockRange,
    mode: CountMode,
    beta: f64,
) -> Result<EntropyProfile> {
    if range.max > seq.len() {
        return Err(Error::BlockTooLong {
            block_len: range.max,
            len: seq.len(),
        });
    }
    let entries = range
        .iter()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|l| {
            let h = count_blocks(seq, l, mode)?.with_beta(beta).block_entropy();
            Ok(EntropyEntry {
                block_len: l,
                block_entropy: h,
                per_base: h / l as f64,
            })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(EntropyProfile {
        sequence_id: seq.id().to_string(),
        length: seq.len(),
        entries,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> DnaSequence {
        DnaSequence::parse("t", s).unwrap()
    }

    fn all_codons() -> DnaSequence {
        let mut s = String::new();
        for a in "ATGC".chars() {
            for b in "ATGC".chars() {
                for c in "ATGC".chars() {
                    s.extend([a, b, c]);
                }
            }
        }
        seq(&s)
    }

    #[test]
    fn count_blocks_examples() {
        let d = count_blocks(&seq("ATATAT"), 2, CountMode::NonOverlapping).unwrap();
        assert_eq!(d.total_blocks(), 3);
        assert_eq!(d.to_map(), [("AT".to_string(), 3)].into_iter().collect());

        let d = count_blocks(&seq("ATATAT"), 2, CountMode::Sliding).unwrap();
        assert_eq!(d.total_blocks(), 5);
        assert_eq!(
            d.to_map(),
            [("AT".to_string(), 3), ("TA".to_string(), 2)].into_iter().collect()
        );

        let d = count_blocks(&seq("ATGCA"), 3, CountMode::NonOverlapping).unwrap();
        assert_eq!(d.total_blocks(), 1);
        assert_eq!(d.to_map(), [("ATG".to_string(), 1)].into_iter().collect());
    }

    #[test]
    fn count_blocks_errors() {
        assert_eq!(
            count_blocks(&seq("ATG"), 4, CountMode::NonOverlapping),
            Err(Error::BlockTooLong { block_len: 4, len: 3 })
        );
        assert!(Error::BlockTooLong { block_len: 4, len: 3 }
            .to_string()
            .contains("block longer than sequence"));
        assert_eq!(
            count_blocks(&seq("ATG"), 0, CountMode::Sliding),
            Err(Error::ZeroBlockLength)
        );
    }

    #[test]
    fn probability_examples() {
        let d = count_blocks(&seq("ATATAT"), 2, CountMode::NonOverlapping).unwrap();
        assert_eq!(d.estimate_probability("AT").unwrap(), 1.0);
        assert_eq!(d.estimate_probability("GG").unwrap(), 0.0);
        let laplace = d.with_beta(1.0);
        assert!((laplace.estimate_probability("GG").unwrap() - 1.0 / 19.0).abs() < 1e-15);
        assert!(laplace.estimate_probability("GGG").is_err());
    }

    #[test]
    fn entropy_examples() {
        let d = count_blocks(&seq(&"A".repeat(30)), 3, CountMode::NonOverlapping).unwrap();
        assert_eq!(d.block_entropy(), 0.0);

        let d = count_blocks(&all_codons(), 3, CountMode::NonOverlapping).unwrap();
        assert_eq!(d.total_blocks(), 64);
        assert!((d.block_entropy() - 6.0).abs() < 1e-12);

        let d = count_blocks(&seq("ATGC"), 2, CountMode::NonOverlapping).unwrap();
        assert!((d.block_entropy() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn laplace_entropy_counts_unseen_blocks() {
        // one observed block out of 16 at count 3: p = 4/19, fifteen others 1/19
        let d = count_blocks(&seq("ATATAT"), 2, CountMode::NonOverlapping)
            .unwrap()
            .with_beta(1.0);
        let p: f64 = 4.0 / 19.0;
        let q: f64 = 1.0 / 19.0;
        let expected = -(p * p.log2()) - 15.0 * q * q.log2();
        assert!((d.block_entropy() - expected).abs() < 1e-12);
    }

    #[test]
    fn profile_examples() {
        let p = entropy_profile(&seq("AAAAAAAAA"), BlockRange::new(2, 3).unwrap(), CountMode::NonOverlapping, 0.0)
            .unwrap();
        assert_eq!(p.entries.len(), 2);
        assert_eq!((p.entries[0].block_len, p.entries[0].block_entropy, p.entries[0].per_base), (2, 0.0, 0.0));
        assert_eq!((p.entries[1].block_len, p.entries[1].block_entropy, p.entries[1].per_base), (3, 0.0, 0.0));

        let p = entropy_profile(&all_codons(), BlockRange::single(3).unwrap(), CountMode::NonOverlapping, 0.0)
            .unwrap();
        assert!((p.entries[0].per_base - 2.0).abs() < 1e-12);

        assert!(entropy_profile(&seq("ACG"), BlockRange::new(2, 4).unwrap(), CountMode::Sliding, 0.0).is_err());
    }

    #[test]
    fn sparse_path_matches_dense_semantics() {
        let text: String = (0..400).map(|i| b"ATGC"[(i * 7 + i / 3) % 4] as char).collect();
        let s = seq(&text);
        for mode in [CountMode::NonOverlapping, CountMode::Sliding] {
            let d = count_blocks(&s, 12, mode).unwrap();
            let sum: u64 = d.observed().iter().map(|&(_, c)| c).sum();
            assert_eq!(sum, d.total_blocks());
            let first = &text[..12];
            assert!(d.count(first).unwrap() >= 1);
        }
    }

    #[test]
    fn range_parsing() {
        assert_eq!("3..9".parse::<BlockRange>().unwrap(), BlockRange::new(3, 9).unwrap());
        assert_eq!("3-9".parse::<BlockRange>().unwrap(), BlockRange::new(3, 9).unwrap());
        assert_eq!("3..=9".parse::<BlockRange>().unwrap(), BlockRange::new(3, 9).unwrap());
        assert_eq!("4".parse::<BlockRange>().unwrap(), BlockRange::single(4).unwrap());
        assert!("9..3".parse::<BlockRange>().is_err());
        assert!("0..3".parse::<BlockRange>().is_err());
        assert!("x".parse::<BlockRange>().is_err());
    }

    #[test]
    fn encode_decode() {
        assert_eq!(decode_block(encode_block("GATTACA").unwrap(), 7), "GATTACA");
        assert!(encode_block("").is_err());
    }

    fn random_seq() -> impl Strategy<Value = DnaSequence> {
        proptest::collection::vec(0u8..4, 1..400)
            .prop_map(|v| DnaSequence::from_bases("p", v.into_iter().map(Nucleotide::from_code)))
    }

    proptest! {
        #[test]
        fn per_base_never_exceeds_two(s in random_seq(), l in 1usize..8, sliding in any::<bool>()) {
            prop_assume!(l <= s.len());
            let mode = if sliding { CountMode::Sliding } else { CountMode::NonOverlapping };
            let h = count_blocks(&s, l, mode).unwrap().block_entropy();
            prop_assert!(h / l as f64 <= 2.0 + 1e-12);
        }

        #[test]
        fn block_shuffle_keeps_entropy(s in random_seq(), l in 1usize..6, rot in 0usize..50) {
            prop_assume!(l <= s.len());
            let n_blocks = s.len() / l;
            let blocks: Vec<DnaSequence> = (0..n_blocks).map(|i| s.slice(i * l, i * l + l)).collect();
            let mut shuffled = DnaSequence::empty("x");
            for i in 0..n_blocks {
                // reversed and rotated block order
                shuffled.extend_from(&blocks[(n_blocks - 1 - i + rot) % n_blocks]);
            }
            let a = count_blocks(&s, l, CountMode::NonOverlapping).unwrap().block_entropy();
            let b = count_blocks(&shuffled, l, CountMode::NonOverlapping).unwrap().block_entropy();
            prop_assert!((a - b).abs() < 1e-12);
        }
    }
}
