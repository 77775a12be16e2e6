//! Information content of DNA sequences.
//!
//! - [`seq`]: 2-bit packed sequences, regions, complementarity, composition.
//! - [`ingest`]: FASTA, GenBank-style ORIGIN blocks and the feature TSV.
//! - [`entropy`]: block counting and block entropy over a range of block lengths.
//! - [`benchmark`]: finite-length correction against matched random ensembles.
//! - [`correlate`]: numeric substitution and normalised autocorrelation.
//! - [`walsh`]: sequency-ordered Walsh transform and the randomness coefficient.
//! - [`report`]: CSV/JSON tables used by the `seqinfo` binary.

pub mod benchmark;
pub mod correlate;
pub mod entropy;
pub mod error;
pub mod ingest;
pub mod report;
pub mod seq;
pub mod walsh;

pub use benchmark::{
    correction_table, corrected_profile, generate_random_sequence, CorrectedProfile, CorrectionTable,
    EnsembleConfig,
};
pub use correlate::{autocorrelation, substitute, AutocorrSeries, NumericSignal, Substitution};
pub use entropy::{
    block_entropy, count_blocks, entropy_profile, BlockDistribution, BlockRange, CountMode, EntropyProfile,
};
pub use error::{Error, Result};
pub use ingest::{load_annotated, parse_fasta, parse_features, parse_origin_block, render_origin_block, AnnotatedGenome};
pub use seq::{
    composition, concat_regions, extract_region, reverse_complement, BaseComposition, DnaSequence, Nucleotide,
    Orientation, Region, RegionKind,
};
pub use walsh::{
    adjust_to_power_of_two, count_independent, fwht_sequency, randomness_coefficient, Adjustment, RandomnessReport,
    WalshSpectrum,
};
