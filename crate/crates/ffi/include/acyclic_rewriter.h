#ifndef ACYCLIC_REWRITER_H
#define ACYCLIC_REWRITER_H

/* Generated by cbindgen; rebuild with `--features headers` to refresh. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Numerically equal to the CLI exit codes.
typedef enum ArAnswer {
  AR_ANSWER_YES = 0,
  AR_ANSWER_NO = 1,
  AR_ANSWER_UNKNOWN = 2,
} ArAnswer;

typedef enum ArMode {
  // The query's natural mode: prefix, or suffix for right divisibility.
  AR_MODE_DEFAULT = 0,
  AR_MODE_PREFIX = 1,
  AR_MODE_SUFFIX = 2,
} ArMode;

typedef enum ArQueryKind {
  AR_QUERY_KIND_EQUAL = 0,
  AR_QUERY_KIND_DIVIDES_LEFT = 1,
  AR_QUERY_KIND_DIVIDES_RIGHT = 2,
} ArQueryKind;

// Result code of every fallible call.
typedef enum ArStatus {
  AR_STATUS_OK = 0,
  AR_STATUS_NULL_POINTER = 1,
  AR_STATUS_INVALID_UTF8 = 2,
  AR_STATUS_PARSE_ERROR = 3,
  AR_STATUS_NOT_CYCLE_FREE = 4,
  AR_STATUS_INVALID_WORD = 5,
  AR_STATUS_INVALID_ARGUMENT = 6,
  AR_STATUS_PANIC = 7,
} ArStatus;

// Opaque validated presentation.
typedef struct ArPresentation ArPresentation;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Parses and validates a presentation.
//
// # Safety
// `text` must be a NUL-terminated string and `out` a valid pointer.
enum ArStatus ar_presentation_parse(const char *text, struct ArPresentation **out);

// Releases a presentation. Null is ignored.
//
// # Safety
// `p` must come from [`ar_presentation_parse`] and not be used afterwards.
void ar_presentation_free(struct ArPresentation *p);

// Number of generators.
//
// # Safety
// `p` must be a live handle or null (which yields 0).
size_t ar_presentation_generators(const struct ArPresentation *p);

// Decides a query. `max_steps`/`max_word_length` of 0 select the
// defaults. When `witness_json` is non-null it receives the verdict with
// its full witness as JSON, to be freed with [`ar_string_free`].
//
// # Safety
// Pointers must be valid; `u` and `v` NUL-terminated.
enum ArStatus ar_decide(const struct ArPresentation *p,
                        enum ArQueryKind query,
                        enum ArMode mode,
                        const char *u,
                        const char *v,
                        size_t max_steps,
                        size_t max_word_length,
                        enum ArAnswer *out,
                        char **witness_json);

// Bounded brute-force answer for the same queries as [`ar_decide`].
// Zero bounds select the defaults (length 12, 200 000 states).
//
// # Safety
// Pointers must be valid; `u` and `v` NUL-terminated.
enum ArStatus ar_oracle(const struct ArPresentation *p,
                        enum ArQueryKind query,
                        const char *u,
                        const char *v,
                        size_t max_length,
                        size_t max_states,
                        enum ArAnswer *out);

// Prefix (or suffix) representation of `word` towards `guide`, as JSON.
//
// # Safety
// Pointers must be valid; strings NUL-terminated.
enum ArStatus ar_represent_json(const struct ArPresentation *p,
                                const char *word,
                                const char *guide,
                                enum ArMode mode,
                                char **out);

// Message for the last failed call on this thread, or null. The pointer
// stays valid until the next call into the library from this thread.
const char *ar_last_error(void);

// Releases a string returned by the library. Null is ignored.
//
// # Safety
// `s` must come from this library and not be used afterwards.
void ar_string_free(char *s);

// Library version as a static string.
const char *ar_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* ACYCLIC_REWRITER_H */
