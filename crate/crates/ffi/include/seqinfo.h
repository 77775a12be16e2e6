#ifndef SEQINFO_H
#define SEQINFO_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SeqinfoAdjustment {
  SEQINFO_ADJUSTMENT_NONE = 0,
  SEQINFO_ADJUSTMENT_PADDED = 1,
  SEQINFO_ADJUSTMENT_TRUNCATED = 2,
} SeqinfoAdjustment;

typedef enum SeqinfoMode {
  SEQINFO_MODE_NON_OVERLAPPING = 0,
  SEQINFO_MODE_SLIDING = 1,
} SeqinfoMode;

typedef enum SeqinfoStatus {
  SEQINFO_STATUS_OK = 0,
  SEQINFO_STATUS_NULL_POINTER = 1,
  SEQINFO_STATUS_INVALID_UTF8 = 2,
  SEQINFO_STATUS_PARSE = 3,
  SEQINFO_STATUS_INVALID_ARGUMENT = 4,
  SEQINFO_STATUS_BUFFER_TOO_SMALL = 5,
  SEQINFO_STATUS_DEGENERATE = 6,
  SEQINFO_STATUS_PANIC = 7,
} SeqinfoStatus;

/**
 * Opaque sequence handle.
 */
typedef struct SeqinfoSequence SeqinfoSequence;

typedef struct SeqinfoComposition {
  double a;
  double t;
  double g;
  double c;
} SeqinfoComposition;

typedef struct SeqinfoRandomness {
  size_t original_length;
  size_t adjusted_length;
  enum SeqinfoAdjustment adjustment;
  size_t independent_count;
  /**
   * `independent_count / adjusted_length`.
   */
  double coefficient;
} SeqinfoRandomness;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or NULL. The pointer stays
 * valid until the next failing call on the same thread.
 */
const char *seqinfo_last_error_message(void);

/**
 * Parses a bare base string, a FASTA text (first record) or an ORIGIN block.
 *
 * # Safety
 * `text` must be a NUL-terminated string and `out` a valid pointer to write
 * the new handle to. The handle must be released with `seqinfo_sequence_free`.
 */
enum SeqinfoStatus seqinfo_sequence_parse(const char *text, struct SeqinfoSequence **out);

/**
 * # Safety
 * `seq` must be NULL or a handle from this library that has not been freed.
 */
void seqinfo_sequence_free(struct SeqinfoSequence *seq);

/**
 * Length in bases; 0 for NULL.
 *
 * # Safety
 * `seq` must be NULL or a live handle.
 */
size_t seqinfo_sequence_len(const struct SeqinfoSequence *seq);

/**
 * Writes the uppercase bases and a terminating NUL into `buf`. `required`
 * (optional) receives the string length without the NUL.
 *
 * # Safety
 * `seq` must be a live handle and `buf` must hold at least `cap` bytes.
 */
enum SeqinfoStatus seqinfo_sequence_to_string(const struct SeqinfoSequence *seq,
                                              char *buf,
                                              size_t cap,
                                              size_t *required);

/**
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum SeqinfoStatus seqinfo_sequence_reverse_complement(const struct SeqinfoSequence *seq,
                                                       struct SeqinfoSequence **out);

/**
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum SeqinfoStatus seqinfo_composition(const struct SeqinfoSequence *seq,
                                       struct SeqinfoComposition *out);

/**
 * Block entropy for `L = l_min..=l_max`. Entry `k` of each buffer belongs
 * to `L = l_min + k`. `out_block` may be NULL.
 *
 * # Safety
 * `seq` must be a live handle; non-NULL buffers must hold `cap` doubles.
 */
enum SeqinfoStatus seqinfo_entropy_profile(const struct SeqinfoSequence *seq,
                                           size_t l_min,
                                           size_t l_max,
                                           enum SeqinfoMode count_mode,
                                           double beta,
                                           double *out_block,
                                           double *out_per_base,
                                           size_t cap);

/**
 * Ensemble-mean random per-base entropy and correction factor per `L` for
 * sequences of `length` bases.
 *
 * # Safety
 * Both buffers must hold `cap` doubles.
 */
enum SeqinfoStatus seqinfo_correction_table(size_t length,
                                            size_t l_min,
                                            size_t l_max,
                                            enum SeqinfoMode count_mode,
                                            double beta,
                                            size_t ensemble_size,
                                            uint64_t seed,
                                            double *out_mean,
                                            double *out_delta,
                                            size_t cap);

/**
 * Raw per-base entropy, correction factor and corrected entropy per `L`.
 *
 * # Safety
 * `seq` must be a live handle; all three buffers must hold `cap` doubles.
 */
enum SeqinfoStatus seqinfo_corrected_profile(const struct SeqinfoSequence *seq,
                                             size_t l_min,
                                             size_t l_max,
                                             enum SeqinfoMode count_mode,
                                             double beta,
                                             size_t ensemble_size,
                                             uint64_t seed,
                                             double *out_raw,
                                             double *out_delta,
                                             double *out_corrected,
                                             size_t cap);

/**
 * Autocorrelation of the substituted sequence at lags `-max_lag..=max_lag`
 * (`2 * max_lag + 1` values, most negative lag first).
 *
 * # Safety
 * `seq` must be a live handle; `out` must hold `cap` doubles.
 */
enum SeqinfoStatus seqinfo_autocorrelation(const struct SeqinfoSequence *seq,
                                           size_t max_lag,
                                           bool center,
                                           double *out,
                                           size_t cap);

/**
 * Sequency-ordered Walsh transform with `1/n` scaling. `n` must be a power
 * of two; `input` and `out` may alias.
 *
 * # Safety
 * `input` and `out` must each hold `n` doubles.
 */
enum SeqinfoStatus seqinfo_fwht_sequency(const double *input, size_t n, double *out);

/**
 * # Safety
 * `seq` must be a live handle and `out` a valid pointer.
 */
enum SeqinfoStatus seqinfo_randomness(const struct SeqinfoSequence *seq,
                                      struct SeqinfoRandomness *out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SEQINFO_H */
