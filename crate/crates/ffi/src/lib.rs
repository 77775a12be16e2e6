//! C ABI over `seqinfo`.
//!
//! Sequences cross the boundary as opaque `SeqinfoSequence` handles created by
//! [`seqinfo_sequence_parse`] and released with [`seqinfo_sequence_free`].
//! Every fallible function returns a [`SeqinfoStatus`]; on failure the message
//! is available from [`seqinfo_last_error_message`] on the same thread.
//! Numeric results are written into caller-owned buffers whose capacity is
//! passed explicitly.

use std::cell::RefCell;
use std::ffi::{CStr, CString};
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::ptr;

use libc::{c_char, size_t};

use seqinfo::benchmark::{correction_table, corrected_profile, EnsembleConfig};
use seqinfo::correlate::{autocorrelation, substitute};
use seqinfo::entropy::{entropy_profile, BlockRange, CountMode};
use seqinfo::ingest::parse_sequences;
use seqinfo::walsh::{fwht_sequency, randomness_coefficient, Adjustment};
use seqinfo::{DnaSequence, Error};

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqinfoStatus {
    Ok = 0,
    NullPointer = 1,
    InvalidUtf8 = 2,
    Parse = 3,
    InvalidArgument = 4,
    BufferTooSmall = 5,
    Degenerate = 6,
    Panic = 7,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqinfoMode {
    NonOverlapping = 0,
    Sliding = 1,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SeqinfoAdjustment {
    None = 0,
    Padded = 1,
    Truncated = 2,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct SeqinfoComposition {
    pub a: f64,
    pub t: f64,
    pub g: f64,
    pub c: f64,
}

#[repr(C)]
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SeqinfoRandomness {
    pub original_length: size_t,
    pub adjusted_length: size_t,
    pub adjustment: SeqinfoAdjustment,
    pub independent_count: size_t,
    /// `independent_count / adjusted_length`.
    pub coefficient: f64,
}

/// Opaque sequence handle.
pub struct SeqinfoSequence(DnaSequence);

thread_local! {
    static LAST_ERROR: RefCell<Option<CString>> = const { RefCell::new(None) };
}

fn set_last_error(message: String) {
    let c = CString::new(message.replace('\0', " ")).unwrap_or_default();
    LAST_ERROR.with(|e| *e.borrow_mut() = Some(c));
}

struct Failure(SeqinfoStatus, String);

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let status = match e.root() {
            Error::DegenerateEnsemble(_) => SeqinfoStatus::Degenerate,
            Error::InvalidBase { .. }
            | Error::EmptyRecord { .. }
            | Error::MissingHeader { .. }
            | Error::OriginOffset { .. }
            | Error::OriginGroup { .. }
            | Error::OriginLine { .. }
            | Error::OriginUnterminated
            | Error::EmptySequence => SeqinfoStatus::Parse,
            _ => SeqinfoStatus::InvalidArgument,
        };
        Failure(status, e.to_string())
    }
}

fn null(what: &str) -> Failure {
    Failure(SeqinfoStatus::NullPointer, format!("{what} is NULL"))
}

fn guard(f: impl FnOnce() -> Result<(), Failure>) -> SeqinfoStatus {
    match catch_unwind(AssertUnwindSafe(f)) {
        Ok(Ok(())) => SeqinfoStatus::Ok,
        Ok(Err(Failure(status, message))) => {
            set_last_error(message);
            status
        }
        Err(_) => {
            set_last_error("internal panic".into());
            SeqinfoStatus::Panic
        }
    }
}

unsafe fn handle<'a>(seq: *const SeqinfoSequence) -> Result<&'a DnaSequence, Failure> {
    seq.as_ref().map(|s| &s.0).ok_or_else(|| null("sequence"))
}

unsafe fn out_slice<'a>(buf: *mut f64, cap: size_t, needed: usize, what: &str) -> Result<&'a mut [f64], Failure> {
    if buf.is_null() {
        return Err(null(what));
    }
    if cap < needed {
        return Err(Failure(
            SeqinfoStatus::BufferTooSmall,
            format!("{what} holds {cap} values, {needed} needed"),
        ));
    }
    Ok(std::slice::from_raw_parts_mut(buf, needed))
}

fn block_range(min: size_t, max: size_t) -> Result<BlockRange, Failure> {
    Ok(BlockRange::new(min, max)?)
}

fn mode(m: SeqinfoMode) -> CountMode {
    match m {
        SeqinfoMode::NonOverlapping => CountMode::NonOverlapping,
        SeqinfoMode::Sliding => CountMode::Sliding,
    }
}

/// Message of the last failed call on this thread, or NULL. The pointer stays
/// valid until the next failing call on the same thread.
#[no_mangle]
pub extern "C" fn seqinfo_last_error_message() -> *const c_char {
    LAST_ERROR.with(|e| e.borrow().as_ref().map_or(ptr::null(), |c| c.as_ptr()))
}

/// Parses a bare base string, a FASTA text (first record) or an ORIGIN block.
///
/// # Safety
/// `text` must be a NUL-terminated string and `out` a valid pointer to write
/// the new handle to. The handle must be released with `seqinfo_sequence_free`.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_sequence_parse(text: *const c_char, out: *mut *mut SeqinfoSequence) -> SeqinfoStatus {
    guard(|| {
        if text.is_null() {
            return Err(null("text"));
        }
        if out.is_null() {
            return Err(null("out"));
        }
        let text = CStr::from_ptr(text)
            .to_str()
            .map_err(|e| Failure(SeqinfoStatus::InvalidUtf8, e.to_string()))?;
        let trimmed = text.trim_start();
        let seq = if trimmed.starts_with('>') || trimmed.starts_with("ORIGIN") || trimmed.starts_with(|c: char| c.is_ascii_digit()) {
            parse_sequences(text, "sequence")?.remove(0)
        } else {
            let bases: String = text.chars().filter(|c| !c.is_whitespace()).collect();
            DnaSequence::parse("sequence", &bases)?
        };
        *out = Box::into_raw(Box::new(SeqinfoSequence(seq)));
        Ok(())
    })
}

/// # Safety
/// `seq` must be NULL or a handle from this library that has not been freed.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_sequence_free(seq: *mut SeqinfoSequence) {
    if !seq.is_null() {
        drop(Box::from_raw(seq));
    }
}

/// Length in bases; 0 for NULL.
///
/// # Safety
/// `seq` must be NULL or a live handle.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_sequence_len(seq: *const SeqinfoSequence) -> size_t {
    seq.as_ref().map_or(0, |s| s.0.len())
}

/// Writes the uppercase bases and a terminating NUL into `buf`. `required`
/// (optional) receives the string length without the NUL.
///
/// # Safety
/// `seq` must be a live handle and `buf` must hold at least `cap` bytes.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_sequence_to_string(
    seq: *const SeqinfoSequence,
    buf: *mut c_char,
    cap: size_t,
    required: *mut size_t,
) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let text = seq.to_string();
        if !required.is_null() {
            *required = text.len();
        }
        if buf.is_null() {
            return Err(null("buf"));
        }
        if cap < text.len() + 1 {
            return Err(Failure(
                SeqinfoStatus::BufferTooSmall,
                format!("buffer of {cap} bytes, {} needed", text.len() + 1),
            ));
        }
        ptr::copy_nonoverlapping(text.as_ptr() as *const c_char, buf, text.len());
        *buf.add(text.len()) = 0;
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_sequence_reverse_complement(
    seq: *const SeqinfoSequence,
    out: *mut *mut SeqinfoSequence,
) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        if out.is_null() {
            return Err(null("out"));
        }
        *out = Box::into_raw(Box::new(SeqinfoSequence(seq.reverse_complement())));
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_composition(seq: *const SeqinfoSequence, out: *mut SeqinfoComposition) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let c = seq.composition()?;
        *out = SeqinfoComposition {
            a: c.a,
            t: c.t,
            g: c.g,
            c: c.c,
        };
        Ok(())
    })
}

/// Block entropy for `L = l_min..=l_max`. Entry `k` of each buffer belongs
/// to `L = l_min + k`. `out_block` may be NULL.
///
/// # Safety
/// `seq` must be a live handle; non-NULL buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_entropy_profile(
    seq: *const SeqinfoSequence,
    l_min: size_t,
    l_max: size_t,
    count_mode: SeqinfoMode,
    beta: f64,
    out_block: *mut f64,
    out_per_base: *mut f64,
    cap: size_t,
) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let range = block_range(l_min, l_max)?;
        let per_base = out_slice(out_per_base, cap, range.len(), "out_per_base")?;
        let profile = entropy_profile(seq, range, mode(count_mode), beta)?;
        for (slot, e) in per_base.iter_mut().zip(&profile.entries) {
            *slot = e.per_base;
        }
        if !out_block.is_null() {
            let block = out_slice(out_block, cap, range.len(), "out_block")?;
            for (slot, e) in block.iter_mut().zip(&profile.entries) {
                *slot = e.block_entropy;
            }
        }
        Ok(())
    })
}

/// Ensemble-mean random per-base entropy and correction factor per `L` for
/// sequences of `length` bases.
///
/// # Safety
/// Both buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_correction_table(
    length: size_t,
    l_min: size_t,
    l_max: size_t,
    count_mode: SeqinfoMode,
    beta: f64,
    ensemble_size: size_t,
    seed: u64,
    out_mean: *mut f64,
    out_delta: *mut f64,
    cap: size_t,
) -> SeqinfoStatus {
    guard(|| {
        let range = block_range(l_min, l_max)?;
        let mean = out_slice(out_mean, cap, range.len(), "out_mean")?;
        let delta = out_slice(out_delta, cap, range.len(), "out_delta")?;
        let cfg = EnsembleConfig::new(length, range)
            .ensemble_size(ensemble_size)
            .seed(seed)
            .mode(mode(count_mode))
            .beta(beta);
        let table = correction_table(&cfg)?;
        for (k, e) in table.entries.iter().enumerate() {
            mean[k] = e.mean_random_h;
            delta[k] = e.delta;
        }
        Ok(())
    })
}

/// Raw per-base entropy, correction factor and corrected entropy per `L`.
///
/// # Safety
/// `seq` must be a live handle; all three buffers must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_corrected_profile(
    seq: *const SeqinfoSequence,
    l_min: size_t,
    l_max: size_t,
    count_mode: SeqinfoMode,
    beta: f64,
    ensemble_size: size_t,
    seed: u64,
    out_raw: *mut f64,
    out_delta: *mut f64,
    out_corrected: *mut f64,
    cap: size_t,
) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let range = block_range(l_min, l_max)?;
        let raw = out_slice(out_raw, cap, range.len(), "out_raw")?;
        let delta = out_slice(out_delta, cap, range.len(), "out_delta")?;
        let corrected = out_slice(out_corrected, cap, range.len(), "out_corrected")?;
        let cfg = EnsembleConfig::new(seq.len(), range)
            .ensemble_size(ensemble_size)
            .seed(seed)
            .mode(mode(count_mode))
            .beta(beta);
        let profile = entropy_profile(seq, range, cfg.mode, beta)?;
        let result = corrected_profile(&profile, &correction_table(&cfg)?)?;
        for (k, e) in result.entries.iter().enumerate() {
            raw[k] = e.h_raw;
            delta[k] = e.delta;
            corrected[k] = e.h_corrected;
        }
        Ok(())
    })
}

/// Autocorrelation of the substituted sequence at lags `-max_lag..=max_lag`
/// (`2 * max_lag + 1` values, most negative lag first).
///
/// # Safety
/// `seq` must be a live handle; `out` must hold `cap` doubles.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_autocorrelation(
    seq: *const SeqinfoSequence,
    max_lag: size_t,
    center: bool,
    out: *mut f64,
    cap: size_t,
) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let needed = max_lag
            .checked_mul(2)
            .and_then(|v| v.checked_add(1))
            .ok_or_else(|| Failure(SeqinfoStatus::InvalidArgument, "max_lag too large".into()))?;
        let out = out_slice(out, cap, needed, "out")?;
        let mut signal = substitute(seq);
        if center {
            signal = signal.centered();
        }
        let series = autocorrelation(&signal, max_lag)?;
        for (slot, (_, v)) in out.iter_mut().zip(series.rows()) {
            *slot = v;
        }
        Ok(())
    })
}

/// Sequency-ordered Walsh transform with `1/n` scaling. `n` must be a power
/// of two; `input` and `out` may alias.
///
/// # Safety
/// `input` and `out` must each hold `n` doubles.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_fwht_sequency(input: *const f64, n: size_t, out: *mut f64) -> SeqinfoStatus {
    guard(|| {
        if input.is_null() {
            return Err(null("input"));
        }
        let values = std::slice::from_raw_parts(input, n).to_vec();
        let spectrum = fwht_sequency(&values)?;
        let out = out_slice(out, n, n, "out")?;
        out.copy_from_slice(&spectrum.coefficients);
        Ok(())
    })
}

/// # Safety
/// `seq` must be a live handle and `out` a valid pointer.
#[no_mangle]
pub unsafe extern "C" fn seqinfo_randomness(seq: *const SeqinfoSequence, out: *mut SeqinfoRandomness) -> SeqinfoStatus {
    guard(|| {
        let seq = handle(seq)?;
        let out = out.as_mut().ok_or_else(|| null("out"))?;
        let r = randomness_coefficient(seq)?;
        *out = SeqinfoRandomness {
            original_length: r.original_length,
            adjusted_length: r.adjusted_length,
            adjustment: match r.adjustment {
                Adjustment::None => SeqinfoAdjustment::None,
                Adjustment::Padded => SeqinfoAdjustment::Padded,
                Adjustment::Truncated => SeqinfoAdjustment::Truncated,
            },
            independent_count: r.independent_count,
            coefficient: r.coefficient(),
        };
        Ok(())
    })
}
