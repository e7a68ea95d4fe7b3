#ifndef POSETHOPF_H
#define POSETHOPF_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every fallible function.
 */
typedef enum PhStatus {
  PH_STATUS_OK = 0,
  PH_STATUS_NULL_POINTER = 1,
  PH_STATUS_INVALID_UTF8 = 2,
  PH_STATUS_PARSE = 3,
  PH_STATUS_CYCLE = 4,
  PH_STATUS_SIZE_EXCEEDED = 5,
  PH_STATUS_DOMAIN = 6,
  PH_STATUS_MODEL = 7,
  PH_STATUS_INTERNAL = 8,
} PhStatus;

/**
 * Opaque handle to an unlabelled poset.
 */
typedef struct PhPoset PhPoset;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message of the last failed call on this thread, or null. The pointer
 * stays valid until the next call into this library on the same thread.
 */
const char *ph_last_error_message(void);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not have been freed already.
 */
void ph_string_free(char *s);

/**
 * Parses a poset from the text form `n:a-b,c-d` (1-based covers) or JSON.
 *
 * # Safety
 * `text` must be a nul-terminated string; `out` must be writable.
 */
enum PhStatus ph_poset_parse(const char *text, struct PhPoset **out);

/**
 * Releases a poset handle. Null is ignored.
 *
 * # Safety
 * `p` must come from [`ph_poset_parse`] and not have been freed already.
 */
void ph_poset_free(struct PhPoset *p);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PhStatus ph_poset_size(const struct PhPoset *p, size_t *out);

/**
 * Canonical text form of the poset.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PhStatus ph_poset_to_text(const struct PhPoset *p, char **out);

/**
 * Number of natural labellings up to isomorphism.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PhStatus ph_num_templates(const struct PhPoset *p, uint64_t *out);

/**
 * Coproduct as a JSON list of `{"left", "right", "coeff"}`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
enum PhStatus ph_coproduct_json(const struct PhPoset *p, char **out);

/**
 * Number of posets with `n` elements.
 *
 * # Safety
 * `out` must be writable.
 */
enum PhStatus ph_enumerate_count(size_t n, size_t *out);

/**
 * Distribution of the grown poset with `n` elements, as a JSON list of
 * `{"poset", "coeff"}`. `couplings_json` is `{"t": [...], "s": [...]}`.
 *
 * # Safety
 * `couplings_json` must be a nul-terminated string; `out` must be writable.
 */
enum PhStatus ph_grow_json(const char *couplings_json, size_t n, char **out);

/**
 * Closure report for the generators of a classical growth model up to
 * degree `n_max`, as JSON. The status field tells whether they close.
 *
 * # Safety
 * `couplings_json` must be a nul-terminated string; `out` must be writable.
 */
enum PhStatus ph_check_subhopf_json(const char *couplings_json, size_t n_max, char **out);

/**
 * Gaussian binomial coefficient `[n choose k]_q` as text.
 *
 * # Safety
 * `out` must be writable.
 */
enum PhStatus ph_qbinom_text(size_t n, size_t k, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* POSETHOPF_H */
