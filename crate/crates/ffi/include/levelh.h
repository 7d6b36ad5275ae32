#ifndef LEVELH_H
#define LEVELH_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible call.
 */
typedef enum LhStatus {
  LH_STATUS_OK = 0,
  LH_STATUS_NULL_POINTER = 1,
  LH_STATUS_INVALID_ARGUMENT = 2,
  LH_STATUS_PARSE = 3,
  LH_STATUS_HYPOTHESIS_NOT_MET = 4,
  LH_STATUS_GENERICITY = 5,
  LH_STATUS_BUFFER_TOO_SMALL = 6,
  LH_STATUS_OVERFLOW = 7,
  LH_STATUS_INTERNAL = 8,
} LhStatus;

/**
 * Outcome of the type-2 level decision.
 */
typedef enum LhVerdict {
  LH_VERDICT_LEVEL = 0,
  LH_VERDICT_NOT_LEVEL = 1,
  LH_VERDICT_UNKNOWN = 2,
} LhVerdict;

/**
 * Opaque decision certificate handle.
 */
typedef struct LhCertificate LhCertificate;

/**
 * Opaque h-vector handle.
 */
typedef struct LhHVector LhHVector;

/**
 * Opaque inverse-system module handle.
 */
typedef struct LhModule LhModule;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread; empty after a success.
 * The pointer stays valid until the next call on the same thread.
 */
const char *lh_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must be null or a string returned by this library, not yet freed.
 */
void lh_string_free(char *s);

/**
 * Builds an h-vector from `len` entries; trailing zeros are dropped.
 *
 * # Safety
 * `entries` must point to `len` readable values; `out` must be writable.
 */
enum LhStatus lh_hvector_new(const uint64_t *entries, size_t len, struct LhHVector **out);

/**
 * Number of entries `e + 1`.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_hvector_len(const struct LhHVector *h, size_t *out);

/**
 * Copies the entries into `buf`. `*len` receives the entry count even when
 * the buffer is too small.
 *
 * # Safety
 * `h` must be a live handle; `buf` must hold `cap` values; `len` must be writable.
 */
enum LhStatus lh_hvector_entries(const struct LhHVector *h, uint64_t *buf, size_t cap, size_t *len);

/**
 * # Safety
 * `h` must be null or a live handle, not used afterwards.
 */
void lh_hvector_free(struct LhHVector *h);

/**
 * Whether `h` satisfies Macaulay's growth condition in every degree.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_is_o_sequence(const struct LhHVector *h, bool *out);

/**
 * `n^<i>`, the largest growth from degree `i` to `i + 1`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LhStatus lh_macaulay_upper(uint64_t n, uint64_t i, uint64_t *out);

/**
 * Entrywise-maximal level h-vector `(1, r, ..., a, 2)` of socle degree `e`.
 *
 * # Safety
 * `out` must be writable.
 */
enum LhStatus lh_max_hvector(uint64_t r, uint64_t a, uint64_t e, struct LhHVector **out);

/**
 * Decides whether `h` is the h-vector of a type-2 level algebra.
 *
 * # Safety
 * `h` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_decide(const struct LhHVector *h,
                        uint64_t seed,
                        size_t retries,
                        struct LhCertificate **out);

/**
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_certificate_verdict(const struct LhCertificate *c, enum LhVerdict *out);

/**
 * Name of the stage that produced the verdict, as an owned string.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_certificate_stage(const struct LhCertificate *c, char **out);

/**
 * Full certificate, with trace and any witness, as an owned JSON string.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_certificate_to_json(const struct LhCertificate *c, char **out);

/**
 * The witness module of a Level certificate; `*out` is null otherwise.
 *
 * # Safety
 * `c` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_certificate_witness(const struct LhCertificate *c, struct LhModule **out);

/**
 * # Safety
 * `c` must be null or a live handle, not used afterwards.
 */
void lh_certificate_free(struct LhCertificate *c);

/**
 * Parses a module from the text format read by `levelh hvector --module`.
 *
 * # Safety
 * `text` must be a NUL-terminated string; `out` must be writable.
 */
enum LhStatus lh_module_parse(const char *text, struct LhModule **out);

/**
 * Hilbert function of the quotient determined by the module.
 *
 * # Safety
 * `m` must be a live handle; `out` must be writable.
 */
enum LhStatus lh_module_hvector(const struct LhModule *m, struct LhHVector **out);

/**
 * Copies the socle vector into `buf`. `*len` receives the entry count even
 * when the buffer is too small.
 *
 * # Safety
 * `m` must be a live handle; `buf` must hold `cap` values; `len` must be writable.
 */
enum LhStatus lh_module_socle(const struct LhModule *m, uint64_t *buf, size_t cap, size_t *len);

/**
 * # Safety
 * `m` must be null or a live handle, not used afterwards.
 */
void lh_module_free(struct LhModule *m);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LEVELH_H */
