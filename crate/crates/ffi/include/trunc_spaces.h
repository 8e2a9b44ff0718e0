#ifndef TRUNC_SPACES_H
#define TRUNC_SPACES_H

#include <stdarg.h>
#include <stdbool.h>
#include <stdint.h>
#include <stdlib.h>

// Result codes.
typedef enum TsStatus {
  TS_STATUS_OK = 0,
  TS_STATUS_NULL_POINTER = 1,
  TS_STATUS_INVALID_UTF8 = 2,
  // descriptor or sequence text did not parse or failed validation
  TS_STATUS_PARSE = 3,
  // parameters outside the range a statement covers
  TS_STATUS_OUT_OF_RANGE = 4,
  TS_STATUS_UNSUPPORTED = 5,
  // a norm or predicate rejected its input
  TS_STATUS_DOMAIN = 6,
  TS_STATUS_PANIC = 7,
} TsStatus;

// Embedding verdict status.
typedef enum TsVerdict {
  TS_VERDICT_HOLDS = 0,
  TS_VERDICT_FAILS = 1,
  TS_VERDICT_UNKNOWN = 2,
} TsVerdict;

// Opaque space descriptor.
typedef struct TsDescriptor TsDescriptor;

// Opaque wavelet-coefficient sequence.
typedef struct TsSequence TsSequence;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Message of the last failed call on this thread (empty if none).
// The pointer stays valid until the next failing call on the same thread.
const char *ts_last_error(void);

// # Safety
// `s` must come from this library (or be null) and not be freed twice.
void ts_string_free(char *s);

// Parses the descriptor DSL, e.g. `TB(s=1,p=2,q=1,r=2,b=1/2,d=1)`.
//
// # Safety
// `text` must be a NUL-terminated string; `out` must be writable.
enum TsStatus ts_descriptor_parse(const char *text, struct TsDescriptor **out);

// # Safety
// `d` must come from this library (or be null) and not be freed twice.
void ts_descriptor_free(struct TsDescriptor *d);

// DSL text of a descriptor; free with `ts_string_free`. Null on a null handle.
//
// # Safety
// `d` must be a live handle or null.
char *ts_descriptor_to_string(const struct TsDescriptor *d);

// # Safety
// `d` must be a live handle; `out` must be writable.
enum TsStatus ts_descriptor_dual(const struct TsDescriptor *d, struct TsDescriptor **out);

// # Safety
// `d` must be a live handle; `out` must be writable.
enum TsStatus ts_descriptor_canonicalize(const struct TsDescriptor *d, struct TsDescriptor **out);

// Lift by σ given as text (`1/2`, `0.25`, …).
//
// # Safety
// `d` must be a live handle, `sigma` NUL-terminated, `out` writable.
enum TsStatus ts_descriptor_lift(const struct TsDescriptor *d,
                                 const char *sigma,
                                 struct TsDescriptor **out);

// Embedding verdict; `condition` (optional) receives the clause label, free with `ts_string_free`.
//
// # Safety
// `src`, `dst` must be live handles; `verdict` writable; `condition` writable or null.
enum TsStatus ts_embeds(const struct TsDescriptor *src,
                        const struct TsDescriptor *dst,
                        enum TsVerdict *verdict,
                        char **condition);

// Empty sequence in dimension `d` ≥ 1.
//
// # Safety
// `out` must be writable.
enum TsStatus ts_sequence_new(uint32_t d, struct TsSequence **out);

// Sequence from its JSON form `{"dim":d,"entries":[{"j":..,"G":..,"m":[..],"v":..}]}`.
//
// # Safety
// `json` NUL-terminated; `out` writable.
enum TsStatus ts_sequence_from_json(const char *json, struct TsSequence **out);

// Adds `v` at level `j`, gender mask `g`, position `m[0..d]`.
//
// # Safety
// `seq` must be a live handle; `m` must point to `d` readable integers.
enum TsStatus ts_sequence_insert(struct TsSequence *seq,
                                 uint32_t j,
                                 uint32_t g,
                                 const int64_t *m,
                                 double v);

// # Safety
// `seq` must come from this library (or be null) and not be freed twice.
void ts_sequence_free(struct TsSequence *seq);

// Norm of `seq` in the (canonicalized) space `d`.
//
// # Safety
// Live handles; `out` writable.
enum TsStatus ts_norm(const struct TsSequence *seq, const struct TsDescriptor *d, double *out);

#ifdef __cplusplus
} // extern "C"
#endif // __cplusplus

#endif /* TRUNC_SPACES_H */
