#ifndef ANGLESET_H
#define ANGLESET_H

/* Generated by cbindgen; do not edit. */

#include <stdarg.h>
#include <stdbool.h>
#include <stddef.h>
#include <stdint.h>
#include <stdlib.h>

/**
 * Status codes returned by every function.
 */
typedef enum AsStatus {
  AS_STATUS_OK = 0,
  AS_STATUS_NULL_POINTER = 1,
  AS_STATUS_INVALID_UTF8 = 2,
  AS_STATUS_DOMAIN = 3,
  AS_STATUS_BRANCH = 4,
  AS_STATUS_INPUT = 5,
  AS_STATUS_SAMPLING = 6,
  AS_STATUS_UNDEFINED_ANGLE = 7,
  AS_STATUS_WRONG_END = 8,
  AS_STATUS_OUT_OF_HYPOTHESIS = 9,
  AS_STATUS_PRECONDITION = 10,
  AS_STATUS_SCHEMA = 11,
  AS_STATUS_IO = 12,
  AS_STATUS_PANIC = 13,
} AsStatus;

/**
 * Convergence class of a classified sequence.
 */
typedef enum AsConvergenceClass {
  AS_CONVERGENCE_CLASS_BY_ANGLE = 0,
  AS_CONVERGENCE_CLASS_ANGLE_SET = 1,
  AS_CONVERGENCE_CLASS_TANGENTIAL = 2,
  AS_CONVERGENCE_CLASS_NON_INTERVAL_CLUSTER = 3,
} AsConvergenceClass;

/**
 * Opaque domain handle.
 */
typedef struct AsDomain AsDomain;

/**
 * Opaque semigroup handle.
 */
typedef struct AsSemigroup AsSemigroup;

/**
 * A complex number as two doubles.
 */
typedef struct AsComplex {
  double re;
  double im;
} AsComplex;

/**
 * Outcome of [`as_classify`]. For `ByAngle`, `theta1 == theta2` is the angle;
 * otherwise `[theta1, theta2]` is the cluster interval.
 */
typedef struct AsClassification {
  enum AsConvergenceClass kind;
  double theta1;
  double theta2;
  struct AsComplex sigma;
  bool sigma_estimated;
} AsClassification;

/**
 * Monte-Carlo estimate of a harmonic measure.
 */
typedef struct AsEstimate {
  double mean;
  double std_err;
  bool unreliable;
} AsEstimate;

/**
 * Message of the last failed call on this thread, or NULL after a success.
 * The caller frees the string with [`as_string_free`].
 */
char *as_last_error_message(void);

/**
 * # Safety
 * `s` must be NULL or a string returned by this library and not yet freed.
 */
void as_string_free(char *s);

/**
 * Library version as a static NUL-terminated string.
 */
const char *as_version(void);

/**
 * Hyperbolic distance in the unit disk (curvature -4).
 *
 * # Safety
 * `result` must be a valid pointer to a double.
 */
enum AsStatus as_distance_disk(struct AsComplex z, struct AsComplex w, double *result);

/**
 * Hyperbolic distance in the right half-plane (curvature -4).
 *
 * # Safety
 * `result` must be a valid pointer to a double.
 */
enum AsStatus as_distance_halfplane(struct AsComplex z, struct AsComplex w, double *result);

/**
 * Sector amplitude `artanh|tan(theta/2)|`.
 *
 * # Safety
 * `result` must be a valid pointer to a double.
 */
enum AsStatus as_amplitude(double theta, double *result);

/**
 * Builds a domain from a JSON descriptor such as `{"kind":"sector","alpha1":1,"alpha2":1}`.
 *
 * # Safety
 * `json` must be a NUL-terminated string and `handle` a valid pointer.
 * Free the handle with [`as_domain_free`].
 */
enum AsStatus as_domain_from_json(const char *json, struct AsDomain **handle);

/**
 * # Safety
 * `handle` must be NULL or a handle from [`as_domain_from_json`] not yet freed.
 */
void as_domain_free(struct AsDomain *handle);

/**
 * # Safety
 * `handle` must be a live domain handle and `result` a valid pointer.
 */
enum AsStatus as_domain_contains(const struct AsDomain *handle, struct AsComplex z, bool *result);

/**
 * Riemann map from the unit disk into the domain.
 *
 * # Safety
 * `handle` must be a live domain handle and `result` a valid pointer.
 */
enum AsStatus as_domain_from_disk(const struct AsDomain *handle,
                                  struct AsComplex q,
                                  struct AsComplex *result);

/**
 * Inverse Riemann map from the domain to the unit disk.
 *
 * # Safety
 * `handle` must be a live domain handle and `result` a valid pointer.
 */
enum AsStatus as_domain_to_disk(const struct AsDomain *handle,
                                struct AsComplex z,
                                struct AsComplex *result);

/**
 * Hyperbolic distance between two points of the domain.
 *
 * # Safety
 * `handle` must be a live domain handle and `result` a valid pointer.
 */
enum AsStatus as_domain_distance(const struct AsDomain *handle,
                                 struct AsComplex z,
                                 struct AsComplex w,
                                 double *result);

/**
 * Classifies the boundary approach of `points[0..len]` in the domain.
 * `sigma` may be NULL to estimate the boundary point.
 *
 * # Safety
 * `points` must hold `len` values; `sigma` is NULL or valid; `result` valid.
 */
enum AsStatus as_classify(const struct AsDomain *handle,
                          const struct AsComplex *points,
                          size_t len,
                          const struct AsComplex *sigma,
                          double tail_fraction,
                          double tol,
                          struct AsClassification *result);

/**
 * Closed-form harmonic measure of a boundary set given as JSON, e.g.
 * `{"type":"real_interval","a":-1,"b":1}`.
 *
 * # Safety
 * `handle` live, `target_json` NUL-terminated, `result` valid.
 */
enum AsStatus as_harmonic_measure(const struct AsDomain *handle,
                                  const char *target_json,
                                  struct AsComplex z,
                                  double *result);

/**
 * Walk-on-spheres estimate of a harmonic measure. Deterministic for a
 * given seed.
 *
 * # Safety
 * `handle` live, `target_json` NUL-terminated, `result` valid.
 */
enum AsStatus as_harmonic_measure_mc(const struct AsDomain *handle,
                                     const char *target_json,
                                     struct AsComplex z,
                                     size_t walks,
                                     uint64_t seed,
                                     struct AsEstimate *result);

/**
 * Builds a semigroup model from JSON, e.g. `{"model":"half_plane","c":1}`.
 *
 * # Safety
 * `json` NUL-terminated, `handle` valid. Free with [`as_semigroup_free`].
 */
enum AsStatus as_semigroup_from_json(const char *json, struct AsSemigroup **handle);

/**
 * # Safety
 * `handle` must be NULL or a handle from [`as_semigroup_from_json`] not yet freed.
 */
void as_semigroup_free(struct AsSemigroup *handle);

/**
 * Denjoy-Wolff point of the semigroup.
 *
 * # Safety
 * `handle` live, `result` valid.
 */
enum AsStatus as_semigroup_denjoy_wolff(const struct AsSemigroup *handle, struct AsComplex *result);

/**
 * Evaluates `phi_t(z)`.
 *
 * # Safety
 * `handle` live, `result` valid.
 */
enum AsStatus as_semigroup_trajectory(const struct AsSemigroup *handle,
                                      struct AsComplex z,
                                      double t,
                                      struct AsComplex *result);

/**
 * Runs a scenario given as JSON. On success `report` receives the JSON report
 * (free with [`as_string_free`]) and `exit_code` the CLI exit status (0 pass,
 * 1 fail). A verdict-level error (wrong end, failed precondition) is
 * returned as its status with `exit_code` set to 1.
 *
 * # Safety
 * `json` NUL-terminated; `report` and `exit_code` valid.
 */
enum AsStatus as_run_scenario_json(const char *json, char **report, int32_t *exit_code);

#endif  /* ANGLESET_H */
