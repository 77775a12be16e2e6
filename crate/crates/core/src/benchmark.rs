//! Finite-length correction of block entropy against ensembles of uniform
//! random sequences of the same length.
//!
//! For every `L` the ensemble-mean per-base entropy `h_R` of random sequences
//! gives a correction factor `delta = 2 / h_R`, and a measured per-base
//! entropy is corrected by multiplying with it. A sequence that looks exactly
//! as random as its matched ensemble therefore corrects to 2 bits per base.

use rand::RngCore;
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::entropy::{entropy_profile, BlockRange, CountMode, EntropyProfile};
use crate::error::{Error, Result};
use crate::seq::{DnaSequence, Nucleotide};

/// Name of the generator recorded in run metadata. Ensemble member `i` draws
/// from ChaCha20 seeded with the 64-bit seed, on stream `i`.
pub const RNG_ALGORITHM: &str = "ChaCha20 (rand_chacha 0.3, seed_from_u64, stream = member index)";

pub const DEFAULT_ENSEMBLE_SIZE: usize = 30;
pub const DEFAULT_SEED: u64 = 0x5EED_D1A6_0000_0001;

/// Maximum per-base entropy over a four-letter alphabet.
pub const MAX_PER_BASE: f64 = 2.0;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct EnsembleConfig {
    pub ensemble_size: usize,
    pub seed: u64,
    pub length: usize,
    pub range: BlockRange,
    pub mode: CountMode,
    pub beta: f64,
}

impl EnsembleConfig {
    pub fn new(length: usize, range: BlockRange) -> Self {
        EnsembleConfig {
            ensemble_size: DEFAULT_ENSEMBLE_SIZE,
            seed: DEFAULT_SEED,
            length,
            range,
            mode: CountMode::default(),
            beta: 0.0,
        }
    }

    pub fn ensemble_size(mut self, size: usize) -> Self {
        self.ensemble_size = size;
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn mode(mut self, mode: CountMode) -> Self {
        self.mode = mode;
        self
    }

    pub fn beta(mut self, beta: f64) -> Self {
        self.beta = beta;
        self
    }
}

/// Generator for ensemble member `index` under `seed`.
pub fn member_rng(seed: u64, index: usize) -> ChaCha20Rng {
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    rng.set_stream(index as u64);
    rng
}

/// I.i.d. uniform bases. Each 64-bit draw supplies 32 bases, two bits each,
/// lowest bits first.
pub fn generate_random_sequence<R: RngCore + ?Sized>(
    length: usize,
    rng: &mut R,
    id: impl Into<String>,
) -> DnaSequence {
    let mut seq = DnaSequence::with_capacity(id, length);
    let mut remaining = length;
    while remaining > 0 {
        let mut word = rng.next_u64();
        for _ in 0..remaining.min(32) {
            seq.push(Nucleotide::from_code((word & 0b11) as u8));
            word >>= 2;
        }
        remaining = remaining.saturating_sub(32);
    }
    seq
}

/// The random sequences a correction table is built from, in member order.
pub fn ensemble_members(config: &EnsembleConfig) -> Vec<DnaSequence> {
    (0..config.ensemble_size)
        .map(|i| {
            generate_random_sequence(config.length, &mut member_rng(config.seed, i), format!("random_{i}"))
        })
        .collect()
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionEntry {
    pub block_len: usize,
    pub mean_random_h: f64,
    pub delta: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectionTable {
    pub length: usize,
    pub ensemble_size: usize,
    pub entries: Vec<CorrectionEntry>,
}

impl CorrectionTable {
    /// Averages per-base entropies of the given random profiles per `L`
    /// (in slice order) and turns each mean into `delta = 2 / mean`.
    pub fn from_profiles(profiles: &[EntropyProfile]) -> Result<Self> {
        let first = profiles.first().ok_or(Error::EmptyEnsemble)?;
        let mut entries = Vec::with_capacity(first.entries.len());
        for (k, entry) in first.entries.iter().enumerate() {
            let mut sum = 0.0;
            for p in profiles {
                let e = p.entries.get(k).filter(|e| e.block_len == entry.block_len).ok_or_else(|| {
                    Error::RangeMismatch(vec![entry.block_len])
                })?;
                sum += e.per_base;
            }
            let mean = sum / profiles.len() as f64;
            if mean <= 0.0 {
                return Err(Error::DegenerateEnsemble(entry.block_len));
            }
            entries.push(CorrectionEntry {
                block_len: entry.block_len,
                mean_random_h: mean,
                delta: MAX_PER_BASE / mean,
            });
        }
        Ok(CorrectionTable {
            length: first.length,
            ensemble_size: profiles.len(),
            entries,
        })
    }

    pub fn get(&self, block_len: usize) -> Option<&CorrectionEntry> {
        self.entries.iter().find(|e| e.block_len == block_len)
    }
}

/// Builds the correction table for sequences of `config.length`. Members are
/// evaluated in parallel, the mean is reduced in member order so the result
/// only depends on the seed.
pub fn correction_table(config: &EnsembleConfig) -> Result<CorrectionTable> {
    if config.ensemble_size == 0 {
        return Err(Error::EmptyEnsemble);
    }
    if config.length < config.range.max {
        return Err(Error::BlockTooLong {
            block_len: config.range.max,
            len: config.length,
        });
    }
    let profiles = (0..config.ensemble_size)
        .into_par_iter()
        .map(|i| {
            let seq = generate_random_sequence(
                config.length,
                &mut member_rng(config.seed, i),
                format!("random_{i}"),
            );
            entropy_profile(&seq, config.range, config.mode, config.beta)
        })
        .collect::<Result<Vec<_>>>()?;
    CorrectionTable::from_profiles(&profiles)
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectedEntry {
    pub block_len: usize,
    pub h_raw: f64,
    pub delta: f64,
    pub h_corrected: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CorrectedProfile {
    pub sequence_id: String,
    pub length: usize,
    pub entries: Vec<CorrectedEntry>,
}

/// Multiplies each raw per-base entropy by its correction factor. Values
/// above 2 are kept as they are.
pub fn corrected_profile(profile: &EntropyProfile, table: &CorrectionTable) -> Result<CorrectedProfile> {
    if profile.length != table.length {
        return Err(Error::LengthMismatch {
            table: table.length,
            profile: profile.length,
        });
    }
    let missing: Vec<usize> = profile
        .entries
        .iter()
        .map(|e| e.block_len)
        .filter(|l| table.get(*l).is_none())
        .chain(
            table
                .entries
                .iter()
                .map(|e| e.block_len)
                .filter(|l| profile.get(*l).is_none()),
        )
        .collect();
    if !missing.is_empty() {
        return Err(Error::RangeMismatch(missing));
    }
    let entries = profile
        .entries
        .iter()
        .map(|e| {
            let delta = table.get(e.block_len).expect("checked above").delta;
            CorrectedEntry {
                block_len: e.block_len,
                h_raw: e.per_base,
                delta,
                h_corrected: e.per_base * delta,
            }
        })
        .collect();
    Ok(CorrectedProfile {
        sequence_id: profile.sequence_id.clone(),
        length: profile.length,
        entries,
    })
}
