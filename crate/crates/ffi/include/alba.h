#ifndef ALBA_H
#define ALBA_H

/* Generated by cbindgen from crates/ffi/src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum AlbaStatus {
  ALBA_STATUS_OK = 0,
  /**
   * The input is not inductive or the reduction got stuck.
   */
  ALBA_STATUS_FAILURE = 1,
  ALBA_STATUS_PARSE_ERROR = 2,
  /**
   * Verification found a frame where inequality and correspondent differ.
   */
  ALBA_STATUS_COUNTEREXAMPLE = 3,
  ALBA_STATUS_NULL_ARGUMENT = 4,
  ALBA_STATUS_INVALID_UTF8 = 5,
  ALBA_STATUS_OUT_OF_RANGE = 6,
  ALBA_STATUS_PANIC = 7,
} AlbaStatus;

/**
 * Opaque result of one run.
 */
typedef struct AlbaHandle AlbaHandle;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses `input` and runs the reduction. On `ALBA_STATUS_OK` or
 * `ALBA_STATUS_FAILURE` a handle is stored in `*out`; on other statuses
 * `*out` is set to NULL.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out` a valid pointer.
 */
enum AlbaStatus alba_run(const char *input, struct AlbaHandle **out);

/**
 * `ALBA_STATUS_OK` for a successful run, `ALBA_STATUS_FAILURE` otherwise.
 *
 * # Safety
 * `h` must be NULL or a live handle from [`alba_run`].
 */
enum AlbaStatus alba_result_status(const struct AlbaHandle *h);

/**
 * Number of quasi-inequalities produced (0 after a failed run).
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
size_t alba_result_quasi_count(const struct AlbaHandle *h);

/**
 * The `index`-th quasi-inequality in text form, or NULL if out of range.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *alba_result_quasi(const struct AlbaHandle *h, size_t index);

/**
 * The failure reason of a failed run, or NULL after success.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *alba_result_failure(const struct AlbaHandle *h);

/**
 * The first-order correspondent in text form, or NULL after a failed run.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *alba_result_fo(const struct AlbaHandle *h, bool simplify);

/**
 * The correspondent as JSON `{"text": ..., "ast": ...}`, or NULL after a
 * failed run.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *alba_result_fo_json(const struct AlbaHandle *h, bool simplify);

/**
 * Rewrite traces as a JSON array with one `{"initial", "steps"}` object per
 * system.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
char *alba_result_trace_json(const struct AlbaHandle *h);

/**
 * Checks the simplified correspondent against the input on every frame with
 * at most `max_n` worlds. Returns `ALBA_STATUS_OK` on agreement,
 * `ALBA_STATUS_COUNTEREXAMPLE` otherwise.
 *
 * # Safety
 * `h` must be NULL or a live handle.
 */
enum AlbaStatus alba_result_verify(const struct AlbaHandle *h, size_t max_n);

/**
 * Classifies `input` and stores a JSON certificate or failure reason in
 * `*out_json` (caller frees). Returns `ALBA_STATUS_OK` if inductive,
 * `ALBA_STATUS_FAILURE` if not.
 *
 * # Safety
 * `input` must be a NUL-terminated string and `out_json` a valid pointer.
 */
enum AlbaStatus alba_check_inductive(const char *input, char **out_json);

/**
 * Message for the most recent failure on this thread, or NULL. The caller
 * owns the returned copy.
 */
char *alba_last_error(void);

/**
 * # Safety
 * `h` must be NULL or a handle from [`alba_run`] not yet freed.
 */
void alba_result_free(struct AlbaHandle *h);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library not yet freed.
 */
void alba_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ALBA_H */
