#ifndef CUBE_H
#define CUBE_H

/* Generated by cbindgen from src/lib.rs; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum {
  CUBE_STATUS_OK = 0,
  CUBE_STATUS_NULL_POINTER = 1,
  CUBE_STATUS_INVALID_UTF8 = 2,
  CUBE_STATUS_PARSE = 3,
  CUBE_STATUS_NOT_DIVISIBLE = 4,
  CUBE_STATUS_DIVISION_BY_ZERO = 5,
  CUBE_STATUS_OUT_OF_REGION = 6,
  CUBE_STATUS_BAD_PARITY = 7,
  CUBE_STATUS_INVALID_REGION = 8,
  CUBE_STATUS_NOT_MONIC = 9,
  CUBE_STATUS_MISSING_ASSIGNMENT = 10,
  CUBE_STATUS_ZERO_SUBSTITUTION = 11,
  CUBE_STATUS_ORACLE_MISMATCH = 12,
  CUBE_STATUS_OTHER = 13,
  CUBE_STATUS_PANIC = 14,
} CubeStatus;

/**
 * A Laurent polynomial with rational coefficients.
 */
typedef struct CubePoly CubePoly;

/**
 * A recurrence on a fixed region with its initial-value assignment.
 */
typedef struct CubeState CubeState;

/**
 * The message of the last failing call on this thread, or NULL. Owned by the
 * library; valid until the next failing call.
 */
const char *cube_last_error(void);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void cube_string_free(char *s);

/**
 * Parses the JSON interchange form of a polynomial.
 *
 * # Safety
 * `json` must be a NUL-terminated string; `out` must be writable.
 */
CubeStatus cube_poly_from_json(const char *json, CubePoly **out);

/**
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
CubeStatus cube_poly_to_json(const CubePoly *p, char **out);

/**
 * Human-readable form, e.g. `x[1,1,-2]/x[1,0,-1] + 2`.
 *
 * # Safety
 * `p` must be a live handle; `out` must be writable.
 */
CubeStatus cube_poly_to_string(const CubePoly *p, char **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
CubeStatus cube_poly_add(const CubePoly *a, const CubePoly *b, CubePoly **out);

/**
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
CubeStatus cube_poly_mul(const CubePoly *a, const CubePoly *b, CubePoly **out);

/**
 * Exact division; fails with `NotDivisible` when `b` does not divide `a`.
 *
 * # Safety
 * `a`, `b` must be live handles; `out` must be writable.
 */
CubeStatus cube_poly_div(const CubePoly *a, const CubePoly *b, CubePoly **out);

/**
 * # Safety
 * `a`, `b` must be live handles.
 */
bool cube_poly_equal(const CubePoly *a, const CubePoly *b);

/**
 * # Safety
 * `p` must come from this library or be NULL.
 */
void cube_poly_free(CubePoly *p);

/**
 * Creates a recurrence. `kind` is `"plane"`, `"triangle"` (uses `m`) or
 * `"cylinder"` (uses `n` and `m`).
 *
 * # Safety
 * `kind` must be a NUL-terminated string; `out` must be writable.
 */
CubeStatus cube_state_new(const char *kind, int64_t n, int64_t m, CubeState **out);

/**
 * Creates a torus recurrence with periods `a` and `b`.
 *
 * # Safety
 * `a` and `b` must point to three integers each; `out` must be writable.
 */
CubeStatus cube_state_new_torus(const int64_t *a, const int64_t *b, CubeState **out);

/**
 * Sets the initial value at `(i,j,k)` to the rational `value` (`"p/q"` or an
 * integer). Clears cached values.
 *
 * # Safety
 * `s` must be a live handle; `value` a NUL-terminated string.
 */
CubeStatus cube_state_assign(CubeState *s, int64_t i, int64_t j, int64_t k, const char *value);

/**
 * `f_{(i,j,k)}(t)`, symbolic in every unassigned initial value.
 *
 * # Safety
 * `s` must be a live handle; `out` must be writable.
 */
CubeStatus cube_state_value(CubeState *s,
                            int64_t i,
                            int64_t j,
                            int64_t k,
                            int64_t t,
                            CubePoly **out);

/**
 * # Safety
 * `s` must come from this library or be NULL.
 */
void cube_state_free(CubeState *s);

/**
 * The characteristic polynomial of the `(n,m)` cylinder, or its `r`-th
 * plethysm when `r > 1`, as `{"coeffs":[...]}`.
 *
 * # Safety
 * `out` must be writable.
 */
CubeStatus cube_qpoly_json(int64_t n, int64_t m, uint32_t r, char **out);

#endif  /* CUBE_H */
