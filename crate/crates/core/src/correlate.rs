//! Numeric substitution of bases and the biased discrete autocorrelation.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::seq::{DnaSequence, Nucleotide};

pub const DEFAULT_MAX_LAG: usize = 10;

/// Value assigned to each base. The default puts complementary bases at
/// opposite signs of equal magnitude: A -0.5, T +0.5, G -1.5, C +1.5.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Substitution {
    pub a: f64,
    pub t: f64,
    pub g: f64,
    pub c: f64,
}

impl Default for Substitution {
    fn default() -> Self {
        Substitution {
            a: -0.5,
            t: 0.5,
            g: -1.5,
            c: 1.5,
        }
    }
}

impl Substitution {
    #[inline]
    pub fn value(&self, base: Nucleotide) -> f64 {
        match base {
            Nucleotide::A => self.a,
            Nucleotide::T => self.t,
            Nucleotide::G => self.g,
            Nucleotide::C => self.c,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct NumericSignal {
    pub source_id: String,
    pub values: Vec<f64>,
    pub substitution: Substitution,
}

impl NumericSignal {
    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn mean(&self) -> f64 {
        if self.values.is_empty() {
            0.0
        } else {
            self.values.iter().sum::<f64>() / self.values.len() as f64
        }
    }

    /// Copy with the signal mean subtracted.
    pub fn centered(&self) -> NumericSignal {
        let mean = self.mean();
        NumericSignal {
            values: self.values.iter().map(|v| v - mean).collect(),
            ..self.clone()
        }
    }
}

pub fn substitute(seq: &DnaSequence) -> NumericSignal {
    substitute_with(seq, Substitution::default())
}

pub fn substitute_with(seq: &DnaSequence, substitution: Substitution) -> NumericSignal {
    NumericSignal {
        source_id: seq.id().to_string(),
        values: seq.iter().map(|b| substitution.value(b)).collect(),
        substitution,
    }
}

/// Autocorrelation at lags `-max_lag..=max_lag`. Only the non-negative lags
/// are stored; negative lags mirror them.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct AutocorrSeries {
    pub source_id: String,
    pub len: usize,
    pub max_lag: usize,
    values: Vec<f64>,
}

impl AutocorrSeries {
    pub fn get(&self, lag: isize) -> Option<f64> {
        self.values.get(lag.unsigned_abs()).copied()
    }

    /// `(lag, value)` pairs from `-max_lag` to `+max_lag`.
    pub fn rows(&self) -> impl Iterator<Item = (isize, f64)> + '_ {
        let m = self.max_lag as isize;
        (-m..=m).map(move |k| (k, self.values[k.unsigned_abs()]))
    }

    /// Non-negative lags only, `values()[k] = R(k)`.
    pub fn values(&self) -> &[f64] {
        &self.values
    }
}

/// `R(k) = (1/N) * sum_{n=0}^{N-1-k} x(n) x(n+k)`, normalised by the full
/// length for every lag.
pub fn autocorrelation(signal: &NumericSignal, max_lag: usize) -> Result<AutocorrSeries> {
    let x = &signal.values;
    let n = x.len();
    if max_lag >= n {
        return Err(Error::LagTooLarge { max_lag, len: n });
    }
    let values = (0..=max_lag)
        .map(|k| x.iter().zip(&x[k..]).map(|(a, b)| a * b).sum::<f64>() / n as f64)
        .collect();
    Ok(AutocorrSeries {
        source_id: signal.source_id.clone(),
        len: n,
        max_lag,
        values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn seq(s: &str) -> DnaSequence {
        DnaSequence::parse("t", s).unwrap()
    }

    fn signal(values: Vec<f64>) -> NumericSignal {
        NumericSignal {
            source_id: "s".into(),
            values,
            substitution: Substitution::default(),
        }
    }

    #[test]
    fn substitution_examples() {
        assert_eq!(substitute(&seq("ATGC")).values, vec![-0.5, 0.5, -1.5, 1.5]);
        assert_eq!(substitute(&seq("AAAA")).values, vec![-0.5; 4]);
    }

    #[test]
    fn hand_computed_lags() {
        let s = signal(vec![-0.5, 0.5, -1.5, 1.5]);
        let r = autocorrelation(&s, 3).unwrap();
        assert_eq!(r.get(0), Some(1.25));
        assert_eq!(r.get(1), Some(-0.8125));
        assert_eq!(r.get(-1), Some(-0.8125));
    }

    #[test]
    fn constant_signal_closed_form() {
        let c = 1.5;
        let n = 40;
        let r = autocorrelation(&signal(vec![c; n]), 10).unwrap();
        for k in 0..=10 {
            let expected = c * c * (n - k) as f64 / n as f64;
            assert!((r.get(k as isize).unwrap() - expected).abs() < 1e-12);
        }
    }

    #[test]
    fn lag_must_be_shorter_than_signal() {
        assert_eq!(
            autocorrelation(&signal(vec![1.0; 10]), 10),
            Err(Error::LagTooLarge { max_lag: 10, len: 10 })
        );
        assert!(autocorrelation(&signal(vec![]), 0).is_err());
    }

    #[test]
    fn rows_cover_symmetric_window() {
        let r = autocorrelation(&substitute(&seq("ATGCGGATCA")), 3).unwrap();
        let lags: Vec<isize> = r.rows().map(|(k, _)| k).collect();
        assert_eq!(lags, vec![-3, -2, -1, 0, 1, 2, 3]);
    }

    #[test]
    fn centering_removes_mean() {
        let c = substitute(&seq("AAAT")).centered();
        assert!(c.mean().abs() < 1e-15);
    }

    fn dna() -> impl Strategy<Value = DnaSequence> {
        proptest::collection::vec(0u8..4, 1..300)
            .prop_map(|v| DnaSequence::from_bases("p", v.into_iter().map(Nucleotide::from_code)))
    }

    proptest! {
        #[test]
        fn reverse_complement_antisymmetry(s in dna()) {
            let fwd = substitute(&s).values;
            let rc = substitute(&s.reverse_complement()).values;
            let expect: Vec<f64> = fwd.iter().rev().map(|v| -v).collect();
            prop_assert_eq!(rc, expect);
        }

        #[test]
        fn scaling_scales_by_square(s in dna(), c in -4.0f64..4.0) {
            let m = (s.len() - 1).min(10);
            let x = substitute(&s);
            let scaled = signal(x.values.iter().map(|v| v * c).collect());
            let a = autocorrelation(&x, m).unwrap();
            let b = autocorrelation(&scaled, m).unwrap();
            for k in 0..=m as isize {
                let (ra, rb) = (a.get(k).unwrap(), b.get(k).unwrap());
                prop_assert!((rb - c * c * ra).abs() <= 1e-12 * (1.0 + rb.abs()));
            }
        }
    }
}
