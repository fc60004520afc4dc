#ifndef RAILCOUNT_H
#define RAILCOUNT_H

#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>

/**
 * Result of every fallible call.
 */
typedef enum RcStatus {
  RC_STATUS_OK = 0,
  RC_STATUS_NULL_POINTER = 1,
  RC_STATUS_INVALID_ARGUMENT = 2,
  RC_STATUS_PARSE = 3,
  /**
   * The input was well formed but a check on it failed.
   */
  RC_STATUS_CHECK_FAILED = 4,
  RC_STATUS_PANIC = 5,
} RcStatus;

/**
 * Classification of a finite function.
 */
typedef enum RcClass {
  RC_CLASS_EVEN_BIJECTION = 0,
  RC_CLASS_ODD_BIJECTION = 1,
  RC_CLASS_QUASI_BIJECTION = 2,
  RC_CLASS_NEITHER = 3,
} RcClass;

typedef struct RcCircuit RcCircuit;

typedef struct RcFunction RcFunction;

typedef struct RcSystem RcSystem;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the last failed call on this thread, or null. The pointer is
 * valid until the next failing call on the same thread.
 */
const char *rc_last_error(void);

/**
 * Library version as a static string.
 */
const char *rc_version(void);

/**
 * # Safety
 * `s` must be null or a string returned by this library.
 */
void rc_string_free(char *s);

/**
 * Builds the function `i -> table[i]` on `{0, ..., len - 1}`.
 *
 * # Safety
 * `table` must point to `len` readable values and `out` must be writable.
 */
enum RcStatus rc_function_new(const uint32_t *table, size_t len, struct RcFunction **out);

/**
 * # Safety
 * `f` must be null or a handle from this library, not yet freed.
 */
void rc_function_free(struct RcFunction *f);

/**
 * # Safety
 * `f` must be a live handle and `out` writable.
 */
enum RcStatus rc_function_classify(const struct RcFunction *f, enum RcClass *out);

/**
 * Ramification degree and image size.
 *
 * # Safety
 * `f` must be a live handle; the out-pointers writable.
 */
enum RcStatus rc_function_ramification(const struct RcFunction *f, size_t *degree, size_t *image);

/**
 * Parses a circuit from its JSON form.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum RcStatus rc_circuit_from_json(const char *json, struct RcCircuit **out);

/**
 * # Safety
 * `c` must be a live handle and `out` writable. Free the string with
 * [`rc_string_free`].
 */
enum RcStatus rc_circuit_to_json(const struct RcCircuit *c, char **out);

/**
 * # Safety
 * `c` must be null or a handle from this library, not yet freed.
 */
void rc_circuit_free(struct RcCircuit *c);

/**
 * Number of wires.
 *
 * # Safety
 * `c` must be a live handle.
 */
size_t rc_circuit_wires(const struct RcCircuit *c);

/**
 * # Safety
 * `c` must be a live handle and `out` writable.
 */
enum RcStatus rc_circuit_eval(const struct RcCircuit *c, uint32_t x, uint32_t *out);

/**
 * Largest number of distinct states on any trace, with an input reaching it.
 *
 * # Safety
 * `c` must be a live handle; the out-pointers writable.
 */
enum RcStatus rc_circuit_counter_value(const struct RcCircuit *c, size_t *value, uint32_t *witness);

/**
 * Parses a tile system file with its curve and vector.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `out` writable.
 */
enum RcStatus rc_system_from_json(const char *json, struct RcSystem **out);

/**
 * The zig-zag counter system on `n` rows; `eps_top` selects the reading
 * where the carry-in glue carries no bit.
 *
 * # Safety
 * `out` must be writable.
 */
enum RcStatus rc_exemplar_zigzag(size_t n, bool eps_top, struct RcSystem **out);

/**
 * # Safety
 * `s` must be null or a handle from this library, not yet freed.
 */
void rc_system_free(struct RcSystem *s);

/**
 * # Safety
 * `s` must be a live handle and `out` writable. Free the string with
 * [`rc_string_free`].
 */
enum RcStatus rc_system_to_json(const struct RcSystem *s, char **out);

/**
 * Checks the layer and compiles it to a circuit. Returns
 * [`RcStatus::CheckFailed`] when the layer is not a clean gate layer.
 *
 * # Safety
 * `s` must be a live handle and `out` writable.
 */
enum RcStatus rc_system_compile(const struct RcSystem *s, struct RcCircuit **out);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* RAILCOUNT_H */
