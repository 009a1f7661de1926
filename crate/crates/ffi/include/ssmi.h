#ifndef SSMI_H
#define SSMI_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum SsmiStatus {
  SSMI_STATUS_OK = 0,
  SSMI_STATUS_NULL_ARGUMENT = 1,
  SSMI_STATUS_INVALID_UTF8 = 2,
  SSMI_STATUS_INVALID_MODEL = 3,
  SSMI_STATUS_UNKNOWN_VARIABLE = 4,
  SSMI_STATUS_ERROR_VALUE = 5,
  SSMI_STATUS_VERIFY_FAILED = 6,
  SSMI_STATUS_IO = 7,
  SSMI_STATUS_PANIC = 8,
} SsmiStatus;

/**
 * A parsed, validated model plus the overrides set on it.
 */
typedef struct SsmiModel SsmiModel;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses and validates `source`. On success `*out` receives a handle to
 * release with `ssmi_model_free`.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `out` must be writable.
 */
enum SsmiStatus ssmi_model_parse(const char *source, struct SsmiModel **out);

/**
 * Releases a model handle. Null is ignored.
 *
 * # Safety
 * `model` must come from `ssmi_model_parse` and not be used afterwards.
 */
void ssmi_model_free(struct SsmiModel *model);

/**
 * Counts the errors and warnings `check` would report for `source`,
 * including golden-rule warnings. Returns `INVALID_MODEL` when there are
 * errors, or warnings under `strict`.
 *
 * # Safety
 * `source` must be a NUL-terminated string; `errors` and `warnings` must
 * be writable.
 */
enum SsmiStatus ssmi_check(const char *source, bool strict, size_t *errors, size_t *warnings);

/**
 * Number of declared variables; 0 for a null handle.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
size_t ssmi_model_variable_count(const struct SsmiModel *model);

/**
 * Overrides a parameter or input for later `ssmi_model_eval` calls.
 *
 * # Safety
 * `model` must be a live handle; `name` a NUL-terminated string.
 */
enum SsmiStatus ssmi_model_set(struct SsmiModel *model, const char *name, double value);

/**
 * Drops every override set with `ssmi_model_set`.
 *
 * # Safety
 * `model` must be null or a live handle.
 */
void ssmi_model_clear_overrides(struct SsmiModel *model);

/**
 * Evaluates the model and stores the value of `name` in `*out`. Booleans
 * read as 1 or 0; an error value returns `ERROR_VALUE` with the
 * spreadsheet error text as the last error.
 *
 * # Safety
 * `model` must be a live handle; `name` a NUL-terminated string; `out`
 * writable.
 */
enum SsmiStatus ssmi_model_eval(const struct SsmiModel *model, const char *name, double *out);

/**
 * Builds, verifies and writes the workbook to `path`. `currency_symbol`
 * may be null for the default `$`.
 *
 * # Safety
 * `model` must be a live handle; `path` and a non-null `currency_symbol`
 * NUL-terminated strings.
 */
enum SsmiStatus ssmi_model_build_xlsx(const struct SsmiModel *model,
                                      const char *path,
                                      const char *currency_symbol);

/**
 * Renders the formula diagram as DOT into a new string at `*out`.
 *
 * # Safety
 * `model` must be a live handle; `out` writable.
 */
enum SsmiStatus ssmi_model_emit_dot(const struct SsmiModel *model,
                                    bool split_submodels,
                                    char **out);

/**
 * Compares model and workbook evaluation over `trials` seeded random
 * input vectors; `*passed` receives the number that agreed.
 *
 * # Safety
 * `model` must be a live handle; `passed` writable.
 */
enum SsmiStatus ssmi_model_verify(const struct SsmiModel *model,
                                  size_t trials,
                                  uint64_t seed,
                                  size_t *passed);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `text` must come from this library and not be used afterwards.
 */
void ssmi_string_free(char *text);

/**
 * Message for the last failed call on this thread, or null. Valid until
 * the next call into the library from the same thread.
 */
const char *ssmi_last_error(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* SSMI_H */
