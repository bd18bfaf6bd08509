/* C API of the cocycle-lab shared library.
 *
 * Conventions: every fallible call returns a clab_status; outputs are
 * written through pointers only on CLAB_OK. Thread safety: all entry points
 * are safe to call concurrently; clab_last_error() returns a thread-local
 * message describing the most recent failure on the calling thread.
 * Results are deterministic given identical arguments, independent of the
 * worker count.
 */
#ifndef COCYCLE_LAB_H
#define COCYCLE_LAB_H

#include <stdint.h>

#if defined(_WIN32)
#define CLAB_API __declspec(dllexport)
#else
#define CLAB_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum clab_status {
  CLAB_OK = 0,
  CLAB_ERR_INVALID_ARGUMENT = 1, /* bad pointer, range, or flag value */
  CLAB_ERR_DOMAIN = 2,           /* a precondition of the operation fails */
  CLAB_ERR_POSTCONDITION = 3,    /* an internal mathematical check failed */
  CLAB_ERR_NOMEM = 4,
  CLAB_ERR_INTERNAL = 5
} clab_status;

CLAB_API const char* clab_status_name(clab_status s);
CLAB_API const char* clab_last_error(void);
CLAB_API const char* clab_version(void);
CLAB_API double clab_golden_mean(void);

/* ---------------------------------------------------------------- model */

typedef struct clab_model {
  double a1;
  double a2;
  double E;
  double alpha; /* frequency in (0,1) */
} clab_model;

typedef struct clab_le_opts {
  int64_t n;           /* orbit length, >= 1 */
  int32_t phases;      /* phase-grid size K, >= 1 */
  double phase_offset; /* grid is offset + k/K mod 1 */
  int32_t workers;     /* <= 0: hardware concurrency */
  int32_t use_operator_norm; /* 0: Frobenius (default), 1: operator norm */
} clab_le_opts;

typedef struct clab_le_result {
  double value;     /* nats per step */
  double std_error; /* phase-sample dispersion / sqrt(K) */
  int64_t n;
  int32_t phases;
} clab_le_result;

CLAB_API clab_status clab_le_estimate(const clab_model* m, double eps,
                                      const clab_le_opts* opts,
                                      clab_le_result* out);

typedef struct clab_accel_result {
  double raw_slope; /* (L(eps+h)-L(eps)) / (2 pi h) */
  int32_t nearest;
  double residual;
  int32_t quantized; /* 0 when residual >= slope tolerance (not an error) */
} clab_accel_result;

/* h <= 0 selects the documented default (eps0/16 when defined, else 0.01) */
CLAB_API clab_status clab_acceleration_at(const clab_model* m, double eps,
                                          double h, const clab_le_opts* opts,
                                          clab_accel_result* out);

/* L(eps) - (4 pi eps + ln|a2|); CLAB_ERR_DOMAIN when a2 = 0 */
CLAB_API clab_status clab_asymptote_residual(const clab_model* m, double eps,
                                             const clab_le_opts* opts,
                                             double* out);

/* -------------------------------------------------------------- profile */

typedef struct clab_profile clab_profile; /* opaque */

typedef enum clab_regime {
  CLAB_REGIME_FIG1 = 1,
  CLAB_REGIME_FIG2 = 2,
  CLAB_REGIME_FIG3 = 3,
  CLAB_REGIME_FIG4 = 4,
  CLAB_REGIME_UNRESOLVED = 0
} clab_regime;

typedef enum clab_membership {
  CLAB_MEMBER_IN_SPECTRUM = 1,
  CLAB_MEMBER_NOT_IN_SPECTRUM = 2,
  CLAB_MEMBER_ZERO_LE = 3,
  CLAB_MEMBER_UNRESOLVED = 0
} clab_membership;

typedef struct clab_profile_opts {
  double eps_max;     /* > 0 */
  int32_t grid_steps; /* >= 8; initial gap count */
  clab_le_opts le;
  double integer_slope_tol;    /* <= 0: default 0.1 */
  double resolution_slope_tol; /* <= 0: default 0.15 */
  double intercept_tol;        /* <= 0: default 0.05 */
} clab_profile_opts;

CLAB_API clab_status clab_profile_compute(const clab_model* m,
                                          const clab_profile_opts* opts,
                                          clab_profile** out);
CLAB_API void clab_profile_free(clab_profile* p);
CLAB_API int32_t clab_profile_node_count(const clab_profile* p);
CLAB_API clab_status clab_profile_node(const clab_profile* p, int32_t i,
                                       double* eps, double* le,
                                       double* std_error);
/* gap i joins node i to node i+1; resolved == 0 marks a straddled
 * breakpoint or noise left after adaptive refinement */
CLAB_API int32_t clab_profile_gap_count(const clab_profile* p);
CLAB_API clab_status clab_profile_gap(const clab_profile* p, int32_t i,
                                      double* slope_over_2pi,
                                      int32_t* acceleration,
                                      int32_t* resolved);
CLAB_API clab_regime clab_profile_regime(const clab_profile* p);
CLAB_API clab_membership clab_profile_membership(const clab_profile* p);
CLAB_API const char* clab_regime_name(clab_regime r);
CLAB_API const char* clab_membership_name(clab_membership m);

/* --------------------------------------------------------------- bounds */

typedef struct clab_bounds_report {
  int32_t has_herman;
  double herman;
  int32_t has_theorem;
  double theorem;
  int32_t has_epsilon0;
  double epsilon0;
  int32_t chosen_delta; /* 0: none, 1: eps0, 2: 2*eps0 */
  double sup_distance;  /* dist(E, S_delta) at the winning shift */
  int32_t has_measured;
  double measured_le;
  double measured_std_error;
  double herman_margin;  /* measured - herman, valid when both present */
  double theorem_margin; /* measured - theorem, valid when both present */
} clab_bounds_report;

/* measured may be NULL: margins are then absent */
CLAB_API clab_status clab_bounds_evaluate(const clab_model* m,
                                          const clab_le_result* measured,
                                          clab_bounds_report* out);

CLAB_API clab_status clab_epsilon0(const clab_model* m, double* out);
CLAB_API clab_status clab_ellipse_distance(const clab_model* m, double delta,
                                           double E, double* out);
CLAB_API clab_status clab_jensen_integral(const clab_model* m, double delta,
                                          double E, double* out);
CLAB_API clab_status clab_term_ii_bound(const clab_model* m, double delta,
                                        double* out);
CLAB_API clab_status clab_grid_min_modulus(const clab_model* m, double delta,
                                           double E, int64_t grid_size,
                                           double* out);
CLAB_API clab_status clab_quadrature_log_integral(const clab_model* m,
                                                  double delta, int64_t nodes,
                                                  double* out);

/* -------------------------------------------------------------- oracles */

typedef enum clab_suite {
  CLAB_SUITE_LEMMA31 = 0,
  CLAB_SUITE_ELLIPSE = 1,
  CLAB_SUITE_JENSEN = 2,
  CLAB_SUITE_QUANTIZATION = 3
} clab_suite;

typedef struct clab_oracle_opts {
  int64_t trials;        /* 0: documented default */
  int64_t grid_or_nodes; /* ellipse grid size / jensen quadrature nodes */
  uint64_t seed;
  int32_t workers;
  int64_t le_n;     /* quantization suite engine parameters; 0: default */
  int32_t le_phases;
} clab_oracle_opts;

typedef struct clab_oracle_report {
  char name[16];
  int64_t trials;
  double worst_margin; /* >= 0 means the claim held everywhere */
  double worst_input[4];
  int32_t worst_input_len;
  int32_t passed;
} clab_oracle_report;

CLAB_API clab_status clab_oracle_run(clab_suite suite,
                                     const clab_oracle_opts* opts,
                                     clab_oracle_report* out);

#ifdef __cplusplus
} /* extern "C" */
#endif

#endif /* COCYCLE_LAB_H */
