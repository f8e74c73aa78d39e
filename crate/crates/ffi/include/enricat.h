#ifndef ENRICAT_H
#define ENRICAT_H

/* Generated by cbindgen from src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Result of a call.
 */
typedef enum EnricatStatus {
  /**
   * The command ran and its verdict is pass.
   */
  ENRICAT_STATUS_PASS = 0,
  /**
   * The command ran and its verdict is fail.
   */
  ENRICAT_STATUS_FAIL = 1,
  /**
   * The command ran but was truncated or skipped.
   */
  ENRICAT_STATUS_SKIPPED = 2,
  /**
   * Malformed JSON, unknown names or an ill-posed command.
   */
  ENRICAT_STATUS_INPUT_ERROR = 3,
  /**
   * A required pointer argument was null.
   */
  ENRICAT_STATUS_NULL_ARGUMENT = 4,
  /**
   * A string argument was not UTF-8.
   */
  ENRICAT_STATUS_INVALID_UTF8 = 5,
  /**
   * The kernel panicked. This is a bug.
   */
  ENRICAT_STATUS_INTERNAL = 6,
} EnricatStatus;

/**
 * A parsed instance file.
 */
typedef struct EnricatInstance EnricatInstance;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Parses an instance from JSON text. On success `*out` owns a handle for
 * `enricat_instance_free`.
 *
 * # Safety
 * `json` must be a nul-terminated string and `out` a valid pointer.
 */
enum EnricatStatus enricat_instance_parse(const char *json, struct EnricatInstance **out);

/**
 * Releases an instance handle. Null is ignored.
 *
 * # Safety
 * `inst` must come from `enricat_instance_parse` and not be freed twice.
 */
void enricat_instance_free(struct EnricatInstance *inst);

/**
 * Releases a string returned by this library. Null is ignored.
 *
 * # Safety
 * `s` must come from this library and not be freed twice.
 */
void enricat_string_free(char *s);

/**
 * Message of the last failed call on this thread, or null. Valid until the next call.
 */
const char *enricat_last_error(void);

/**
 * Library version, a static string.
 */
const char *enricat_version(void);

/**
 * Validates every category and functor of the instance.
 *
 * # Safety
 * `inst` must be a live handle and `out` a valid pointer.
 */
enum EnricatStatus enricat_validate(const struct EnricatInstance *inst, char **out);

/**
 * π₀ of a category, or of every value when the instance has no categories.
 * `names` is null or a JSON object of entry names, e.g. `{"category": "H"}`.
 *
 * # Safety
 * `inst` must be a live handle, `names` null or a nul-terminated string, `out` valid.
 */
enum EnricatStatus enricat_pi0(const struct EnricatInstance *inst, const char *names, char **out);

/**
 * The free category on a graph, with paths up to `word_bound` arrows.
 *
 * # Safety
 * As for `enricat_pi0`.
 */
enum EnricatStatus enricat_free(const struct EnricatInstance *inst,
                                const char *names,
                                size_t word_bound,
                                bool truncate,
                                char **out);

/**
 * Push-out along a free functor. `names` selects the category and the attachment
 * (`a`, `b`, `f`, `gbar`).
 *
 * # Safety
 * As for `enricat_pi0`.
 */
enum EnricatStatus enricat_pushout(const struct EnricatInstance *inst,
                                   const char *names,
                                   size_t stage_bound,
                                   char **out);

/**
 * The stage-by-stage trace of a push-out along a free functor.
 *
 * # Safety
 * As for `enricat_pi0`.
 */
enum EnricatStatus enricat_trace_export(const struct EnricatInstance *inst,
                                        const char *names,
                                        size_t stage_bound,
                                        char **out);

/**
 * Decides a predicate, e.g. `"dk"` or `"decomposition"`, on the instance.
 *
 * # Safety
 * `predicate` must be a nul-terminated string; otherwise as for `enricat_pi0`.
 */
enum EnricatStatus enricat_check(const char *predicate,
                                 const struct EnricatInstance *inst,
                                 const char *names,
                                 size_t stage_bound,
                                 char **out);

/**
 * Runs `count` seeded instances of a property suite.
 *
 * # Safety
 * `suite` must be a nul-terminated string and `out` a valid pointer.
 */
enum EnricatStatus enricat_proptest(const char *suite, size_t count, uint64_t seed, char **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ENRICAT_H */
