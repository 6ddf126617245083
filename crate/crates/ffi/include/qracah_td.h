#ifndef QRACAH_TD_H
#define QRACAH_TD_H

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

// Outcome of every call.
typedef enum QrtdStatus {
  QRTD_STATUS_OK = 0,
  // The input is well formed but the mathematics rules it out, e.g. the existence
  // criterion fails for a parameter array.
  QRTD_STATUS_REFUSED = 1,
  QRTD_STATUS_INVALID_INPUT = 2,
  QRTD_STATUS_NULL_POINTER = 3,
  QRTD_STATUS_INTERNAL = 4,
} QrtdStatus;

typedef enum QrtdMode {
  QRTD_MODE_EXACT = 0,
  QRTD_MODE_COMPLEX = 1,
} QrtdMode;

// A constructed realization.
typedef struct QrtdRealization QrtdRealization;

// Settings for a call. Zero fields select the defaults: 128 bits, tolerance
// `2^(-bits/2)`, diameter limit 6 (exact) or 10 (complex), one worker.
typedef struct QrtdOptions {
  enum QrtdMode mode;
  uint32_t precision_bits;
  double tolerance;
  uint32_t max_d;
  uint32_t jobs;
} QrtdOptions;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

// Runs a command by name (`construct`, `verify`, `drinfeld`, `relations`, `shape`,
// `roundtrip`) on a JSON input and writes the JSON result to `*out`.
//
// # Safety
// `name` and `input` are NUL-terminated strings, `opts` is null or valid, and `out` is
// valid for writes.
enum QrtdStatus qrtd_run(const char *name,
                         const char *input,
                         const struct QrtdOptions *opts,
                         char **out);

// Constructs a realization from a parameter array. Exact mode moves to the complex
// backend when the evaluation parameters are not rational.
//
// # Safety
// `array` is a NUL-terminated string, `opts` is null or valid, and `out` is valid for
// writes.
enum QrtdStatus qrtd_construct(const char *array,
                               const struct QrtdOptions *opts,
                               struct QrtdRealization **out);

// Dimension of the realization.
//
// # Safety
// `r` is null or a live handle; `dim` is valid for writes.
enum QrtdStatus qrtd_realization_dim(const struct QrtdRealization *r, size_t *dim);

// Diameter `d`; the shape has `d + 1` entries.
//
// # Safety
// `r` is null or a live handle; `d` is valid for writes.
enum QrtdStatus qrtd_realization_diameter(const struct QrtdRealization *r, size_t *d);

// Copies the shape into `shape`, which holds `len` entries; `len` must be at least `d + 1`.
//
// # Safety
// `r` is null or a live handle; `shape` is valid for `len` writes.
enum QrtdStatus qrtd_realization_shape(const struct QrtdRealization *r, size_t *shape, size_t len);

// Whether the shape passes its bound checks; writes 1 or 0.
//
// # Safety
// `r` is null or a live handle; `passed` is valid for writes.
enum QrtdStatus qrtd_realization_shape_ok(const struct QrtdRealization *r, int32_t *passed);

// The realization as JSON, including the construction certificate.
//
// # Safety
// `r` is null or a live handle; `out` is valid for writes.
enum QrtdStatus qrtd_realization_json(const struct QrtdRealization *r, char **out);

// The parameter array read back from the realization.
//
// # Safety
// `r` is null or a live handle; `out` is valid for writes.
enum QrtdStatus qrtd_realization_parameter_array(const struct QrtdRealization *r, char **out);

// # Safety
// `r` is null or a handle from [`qrtd_construct`] not yet freed.
void qrtd_realization_free(struct QrtdRealization *r);

// # Safety
// `s` is null or a string returned by this library not yet freed.
void qrtd_string_free(char *s);

// Reason code of the last failure on this thread (e.g. `condition-ii-sum-zero`), or null.
// Valid until the next call on this thread.
const char *qrtd_last_error_reason(void);

// JSON description of the last failure on this thread, or null. Valid until the next
// call on this thread.
const char *qrtd_last_error(void);

// Library version, static.
const char *qrtd_version(void);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* QRACAH_TD_H */
