//! Sequency-ordered Walsh transform and the Walsh randomness coefficient
//! `r(s) = i(s) / L(s)`, the number of distinct Walsh amplitudes over the
//! (power-of-two) length.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::correlate::{substitute, NumericSignal};
use crate::error::{Error, Result};
use crate::seq::DnaSequence;

/// In-place unnormalised Walsh-Hadamard butterfly, natural (Hadamard) order.
/// Applying it twice multiplies the input by its length.
pub fn fwht_natural_in_place(data: &mut [f64]) -> Result<()> {
    let n = data.len();
    if !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut h = 1;
    while h < n {
        for chunk in data.chunks_exact_mut(2 * h) {
            let (lo, hi) = chunk.split_at_mut(h);
            for (a, b) in lo.iter_mut().zip(hi.iter_mut()) {
                let (x, y) = (*a, *b);
                *a = x + y;
                *b = x - y;
            }
        }
        h *= 2;
    }
    Ok(())
}

/// Natural-order row holding the Walsh function with `s` sign changes:
/// Gray code of `s`, bit-reversed over `bits` bits.
#[inline]
pub fn sequency_to_natural(s: usize, bits: u32) -> usize {
    let gray = s ^ (s >> 1);
    if bits == 0 {
        0
    } else {
        gray.reverse_bits() >> (usize::BITS - bits)
    }
}

/// Walsh coefficients in sequency order, scaled by `1/N`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct WalshSpectrum {
    pub coefficients: Vec<f64>,
}

impl WalshSpectrum {
    pub fn len(&self) -> usize {
        self.coefficients.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coefficients.is_empty()
    }
}

/// `W[s] = (1/N) * sum_n x[n] * wal(s, n)` with `wal(s, .)` the Walsh
/// function having `s` sign changes.
pub fn fwht_sequency(values: &[f64]) -> Result<WalshSpectrum> {
    let n = values.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let mut natural = values.to_vec();
    fwht_natural_in_place(&mut natural)?;
    let bits = n.trailing_zeros();
    let scale = 1.0 / n as f64;
    let coefficients = (0..n)
        .map(|s| natural[sequency_to_natural(s, bits)] * scale)
        .collect();
    Ok(WalshSpectrum { coefficients })
}

/// Inverse of [`fwht_sequency`].
pub fn inverse_fwht_sequency(spectrum: &WalshSpectrum) -> Result<Vec<f64>> {
    let n = spectrum.len();
    if n == 0 || !n.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(n));
    }
    let bits = n.trailing_zeros();
    let mut natural = vec![0.0; n];
    for (s, &w) in spectrum.coefficients.iter().enumerate() {
        natural[sequency_to_natural(s, bits)] = w;
    }
    fwht_natural_in_place(&mut natural)?;
    Ok(natural)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Adjustment {
    Padded,
    Truncated,
    None,
}

impl fmt::Display for Adjustment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Adjustment::Padded => "padded",
            Adjustment::Truncated => "truncated",
            Adjustment::None => "none",
        })
    }
}

/// Power of two nearest to `len`, ties going to the larger one.
pub fn nearest_power_of_two(len: usize) -> usize {
    if len <= 1 {
        return 1;
    }
    if len.is_power_of_two() {
        return len;
    }
    let upper = len.next_power_of_two();
    let lower = upper / 2;
    if len - lower < upper - len {
        lower
    } else {
        upper
    }
}

/// Zero-pads or truncates (keeping the prefix) to the nearest power of two.
pub fn adjust_to_power_of_two(signal: &NumericSignal) -> (NumericSignal, Adjustment) {
    let n = signal.len();
    let target = nearest_power_of_two(n);
    let mut out = signal.clone();
    let adjustment = match target.cmp(&n) {
        std::cmp::Ordering::Greater => {
            out.values.resize(target, 0.0);
            Adjustment::Padded
        }
        std::cmp::Ordering::Less => {
            out.values.truncate(target);
            Adjustment::Truncated
        }
        std::cmp::Ordering::Equal => Adjustment::None,
    };
    (out, adjustment)
}

const RELATIVE_TOLERANCE: f64 = 1e-9;

fn same_amplitude(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= RELATIVE_TOLERANCE * a.abs().max(b.abs())
}

/// Number of distinct coefficient values; `0.25` and `-0.25` are different
/// amplitudes. Values within a relative `1e-9` of each other are merged.
pub fn count_independent(spectrum: &WalshSpectrum) -> usize {
    let mut sorted = spectrum.coefficients.clone();
    sorted.sort_by(f64::total_cmp);
    let mut count = 0;
    let mut last: Option<f64> = None;
    for v in sorted {
        match last {
            Some(prev) if same_amplitude(prev, v) => {}
            _ => {
                count += 1;
                last = Some(v);
            }
        }
    }
    count
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RandomnessReport {
    pub sequence_id: String,
    pub original_length: usize,
    pub adjusted_length: usize,
    pub adjustment: Adjustment,
    pub independent_count: usize,
}

impl RandomnessReport {
    /// `i(s) / adjusted_length`.
    pub fn coefficient(&self) -> f64 {
        self.independent_count as f64 / self.adjusted_length as f64
    }
}

/// Randomness coefficient of an already numeric signal.
pub fn signal_randomness(signal: &NumericSignal) -> Result<RandomnessReport> {
    if signal.is_empty() {
        return Err(Error::EmptySequence);
    }
    let (adjusted, adjustment) = adjust_to_power_of_two(signal);
    let spectrum = fwht_sequency(&adjusted.values)?;
    Ok(RandomnessReport {
        sequence_id: signal.source_id.clone(),
        original_length: signal.len(),
        adjusted_length: adjusted.len(),
        adjustment,
        independent_count: count_independent(&spectrum),
    })
}

/// Substitutes, adjusts to a power of two, transforms and counts.
pub fn randomness_coefficient(seq: &DnaSequence) -> Result<RandomnessReport> {
    signal_randomness(&substitute(seq))
}
