#ifndef LANDAU_H
#define LANDAU_H

/* Generated by cbindgen from crates/ffi/src/lib.rs. Do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

typedef enum LandauStatus {
  LANDAU_STATUS_OK = 0,
  LANDAU_STATUS_NULL_POINTER = 1,
  LANDAU_STATUS_INVALID_ARGUMENT = 2,
  LANDAU_STATUS_PARSE = 3,
  LANDAU_STATUS_CUTOFF_CONFLICT = 4,
  LANDAU_STATUS_NUMERICAL = 5,
  LANDAU_STATUS_PANIC = 6,
} LandauStatus;

typedef enum LandauAxis {
  LANDAU_AXIS_Q1 = 0,
  LANDAU_AXIS_Q2 = 1,
  LANDAU_AXIS_P1 = 2,
  LANDAU_AXIS_P2 = 3,
} LandauAxis;

/**
 * Physical parameters (ħ, m, ω).
 */
typedef struct LandauParams LandauParams;

/**
 * A state in the truncated matrix representation.
 */
typedef struct LandauState LandauState;

#ifdef __cplusplus
extern "C" {
#endif // __cplusplus

/**
 * Message for the most recent failure on this thread, or an empty string.
 * The pointer stays valid until the next library call on this thread.
 */
const char *landau_last_error(void);

/**
 * # Safety
 * `out` must be valid for writes.
 */
enum LandauStatus landau_params_new(double hbar,
                                    double mass,
                                    double omega,
                                    struct LandauParams **out);

/**
 * # Safety
 * `params` must come from `landau_params_new` and not be used afterwards.
 */
void landau_params_free(struct LandauParams *params);

/**
 * Length scale γ = sqrt(2ħ / (mω)).
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_params_gamma(const struct LandauParams *params, double *out);

/**
 * Wigner function of the level `(n, l)` at a phase-space point.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_wigner_eval(size_t n,
                                     size_t l,
                                     double q1,
                                     double q2,
                                     double p1,
                                     double p2,
                                     const struct LandauParams *params,
                                     double *out);

/**
 * One-dimensional marginal density of the level `(n, l)`.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_marginal_1d(size_t n,
                                     size_t l,
                                     enum LandauAxis axis,
                                     double x,
                                     const struct LandauParams *params,
                                     double *out);

/**
 * Δq_pair Δp_pair for the level `(n, l)`; `pair` is 1 or 2.
 *
 * # Safety
 * `params` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_uncertainty_product(size_t n,
                                             size_t l,
                                             size_t pair,
                                             const struct LandauParams *params,
                                             double *out);

/**
 * Builds a state from a label such as `wigner:2,1` or `coherent:1,0,0.5,0`.
 *
 * # Safety
 * `label` must be a NUL-terminated string and `out` valid for writes.
 */
enum LandauStatus landau_state_from_label(const char *label,
                                          size_t cutoff,
                                          struct LandauState **out);

/**
 * # Safety
 * `json` must be a NUL-terminated string and `out` valid for writes.
 */
enum LandauStatus landau_state_from_json(const char *json, struct LandauState **out);

/**
 * # Safety
 * `state` must come from this library and not be used afterwards.
 */
void landau_state_free(struct LandauState *state);

/**
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_state_cutoff(const struct LandauState *state, size_t *out);

/**
 * Phase-space trace, normalized so that a pure state gives 1.
 *
 * # Safety
 * `state` must be a live handle; `re` and `im` valid for writes.
 */
enum LandauStatus landau_state_trace(const struct LandauState *state, double *re, double *im);

/**
 * Value of the state's phase-space function at a point.
 *
 * # Safety
 * Handles must be live; `re` and `im` valid for writes.
 */
enum LandauStatus landau_state_eval(const struct LandauState *state,
                                    double q1,
                                    double q2,
                                    double p1,
                                    double p2,
                                    const struct LandauParams *params,
                                    double *re,
                                    double *im);

/**
 * Star product `lhs ⋆ rhs` as a new handle.
 *
 * # Safety
 * Handles must be live and `out` valid for writes.
 */
enum LandauStatus landau_state_star(const struct LandauState *lhs,
                                    const struct LandauState *rhs,
                                    struct LandauState **out);

/**
 * JSON form of the state. Release the string with `landau_string_free`.
 *
 * # Safety
 * `state` must be a live handle and `out` valid for writes.
 */
enum LandauStatus landau_state_to_json(const struct LandauState *state, char **out);

/**
 * # Safety
 * `s` must come from this library and not be used afterwards.
 */
void landau_string_free(char *s);

#ifdef __cplusplus
}  // extern "C"
#endif  // __cplusplus

#endif  /* LANDAU_H */
