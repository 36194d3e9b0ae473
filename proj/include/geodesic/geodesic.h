/* Copyright 2026 The geodesic authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#ifndef GEODESIC_GEODESIC_H
#define GEODESIC_GEODESIC_H

/*
 * C interface to libgeodesic.
 *
 * Every call returns a geo_status; on failure geo_last_error() holds a
 * message for the calling thread. Handles are opaque and owned by the
 * caller (free with the matching *_free). Strings returned through char**
 * are released with geo_string_free.
 */

#include <stddef.h>
#include <stdint.h>

#if defined(GEODESIC_BUILDING_LIBRARY)
#define GEO_API __attribute__((visibility("default")))
#else
#define GEO_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum {
  GEO_OK = 0,
  GEO_E_INVALID = 1,
  GEO_E_BUDGET = 2,
  GEO_E_TOLERANCE = 3,
  GEO_E_IO = 4,
  GEO_E_INTERNAL = 5,
  GEO_E_NULL = 6
} geo_status;

GEO_API const char* geo_last_error(void);
GEO_API const char* geo_status_name(geo_status s);
GEO_API const char* geo_version(void);
GEO_API void geo_set_seed(uint64_t seed);
GEO_API uint64_t geo_seed(void);
GEO_API void geo_string_free(char* s);

/* handles */
typedef struct geo_context geo_context;
typedef struct geo_lstrategy geo_lstrategy;
typedef struct geo_cache geo_cache;
typedef struct geo_sweep geo_sweep;
typedef struct geo_report geo_report;

GEO_API geo_status geo_context_congruence(int64_t Q, geo_context** out);
GEO_API geo_status geo_context_quaternion(int64_t dB, geo_context** out);
GEO_API geo_status geo_context_tag(const geo_context* ctx, char** out);
GEO_API void geo_context_free(geo_context* ctx);

/* "classnumber", "logsin", "smoothed[:scale[:cutoff]]", "euler[:P]" */
GEO_API geo_status geo_lstrategy_parse(const char* text, geo_lstrategy** out);
GEO_API geo_status geo_lstrategy_tag(const geo_lstrategy* s, char** out);
GEO_API void geo_lstrategy_free(geo_lstrategy* s);

/* Factorization memo persisted under dir/factors.txt. */
GEO_API geo_status geo_cache_open(const char* dir, geo_cache** out);
GEO_API geo_status geo_cache_save(const geo_cache* cache);
GEO_API size_t geo_cache_size(const geo_cache* cache);
GEO_API void geo_cache_free(geo_cache* cache);

/* arithmetic and quadratic orders */
GEO_API geo_status geo_kronecker(int64_t D, int64_t n, int* out);
GEO_API geo_status geo_fundamental_split(int64_t m, int64_t* d, int64_t* l);
GEO_API geo_status geo_narrow_class_number(int64_t D, int64_t* out);
GEO_API geo_status geo_regulator(int64_t D, double* out);
GEO_API geo_status geo_pell_unit(int64_t D, char** x, char** y);
GEO_API geo_status geo_unit_index(int64_t d, int64_t f, int64_t* out);
GEO_API geo_status geo_l_one(int64_t D, const geo_lstrategy* s, double* out);

/* multiplicities; cache may be NULL */
GEO_API geo_status geo_trace_exists(int64_t t, const geo_context* ctx, int* out);
GEO_API geo_status geo_beta(int64_t t, const geo_context* ctx, const geo_lstrategy* s, geo_cache* cache, double* out);
GEO_API geo_status geo_beta_classcount(int64_t t, const geo_context* ctx, double* out);
GEO_API geo_status geo_beta_truncated(int64_t n, int64_t P, const geo_context* ctx, double* product, double* divisor_sum);
GEO_API geo_status geo_local_factor(int64_t p, int64_t n, const geo_context* ctx, double* out);

/* Fourier side */
typedef enum { GEO_COEFF_CLOSED = 0, GEO_COEFF_DFT = 1, GEO_COEFF_SERIES = 2 } geo_coeff_method;

typedef struct {
  double re;
  double im;
  double tail_bound; /* series only */
  int b_max;         /* series only */
} geo_coefficient_value;

/* Local coefficient of beta at a / p^c. CLOSED needs p | modulus (odd);
 * DFT sums exact per-b transforms (the series without a tail estimate). */
GEO_API geo_status geo_coefficient(int64_t p, int c, int64_t a, const geo_context* ctx, geo_coeff_method method,
                                   double tol, geo_coefficient_value* out);
/* Single summand f_b. SERIES is rejected here. */
GEO_API geo_status geo_coefficient_b(int64_t p, int b, int c, int64_t a, const geo_context* ctx,
                                     geo_coeff_method method, geo_coefficient_value* out);
GEO_API geo_status geo_gauss_sum(int64_t q, double* re, double* im);

typedef enum { GEO_A_CLOSED = 0, GEO_A_NUMERIC = 1 } geo_a_method;

/* exact may be NULL; otherwise receives "num/den" (CLOSED only). */
GEO_API geo_status geo_a_value(int64_t p, int c, const geo_context* ctx, geo_a_method method, double* out, char** exact);
GEO_API geo_status geo_local_euler_factor(int64_t p, const geo_context* ctx, double* out, char** exact);

/* mean square */
typedef struct {
  double value;
  double tail_bound;
  double log_tail_bound;
  double cross_check;
  int64_t prime_bound;
} geo_euler_product;

GEO_API geo_status geo_kappa(const geo_context* ctx, int64_t prime_bound, double tol, geo_euler_product* out);
GEO_API geo_status geo_parseval_partial(const geo_context* ctx, int64_t bound, double* out);
GEO_API geo_status geo_seminorm(const geo_context* ctx, int64_t P, double s, int64_t N, double* out);

typedef struct {
  double logsin_max_deviation;
  int64_t logsin_worst_D;
  double smoothed_max_deviation;
  int64_t smoothed_worst_D;
  int64_t count;
  int ok;
} geo_cross_validation;

GEO_API geo_status geo_cross_validate(int64_t D_max, geo_cross_validation* out);

/* empirical sweeps */
typedef struct {
  int64_t N;
  double mean;
  double mean_square;
  double wall_seconds;
} geo_checkpoint;

typedef void (*geo_checkpoint_cb)(const geo_checkpoint* cp, void* user);

typedef struct {
  int workers;
  int reproducible;
  double budget_seconds;   /* 0 = unlimited */
  int64_t exact_below;     /* ClassNumber for t <= exact_below */
  int64_t chunk;
  const char* checkpoint_file; /* NULL = none */
  int resume;
  geo_cache* cache;        /* used only when not reproducible */
  geo_checkpoint_cb on_checkpoint;
  void* user;
} geo_sweep_options;

GEO_API void geo_sweep_options_init(geo_sweep_options* opts);
/* A budget overrun is not an error: the sweep is returned with partial set. */
GEO_API geo_status geo_sweep_run(const geo_context* ctx, int64_t N_max, int64_t stride, const geo_lstrategy* s,
                                 const geo_sweep_options* opts, geo_sweep** out);
GEO_API size_t geo_sweep_count(const geo_sweep* sw);
GEO_API geo_status geo_sweep_checkpoint(const geo_sweep* sw, size_t i, geo_checkpoint* out);
GEO_API int geo_sweep_partial(const geo_sweep* sw);
GEO_API int64_t geo_sweep_resumed_from(const geo_sweep* sw);
GEO_API const char* geo_sweep_strategy_tag(const geo_sweep* sw);
GEO_API void geo_sweep_free(geo_sweep* sw);

/* acceptance suites */
typedef struct {
  int criterion;
  int passed;
  int warning;
  double seconds;
  const char* suite;
  const char* detail;
  const char* attachment;
  const char* line;
} geo_check;

typedef void (*geo_check_cb)(const geo_check* check, void* user);

typedef struct {
  int workers;
  int64_t sweep_n_max;
  int64_t sweep_stride;
  double sweep_budget_seconds;
  const char* sweep_csv; /* NULL = temp dir */
  geo_check_cb on_check;
  void* user;
} geo_verify_options;

GEO_API void geo_verify_options_init(geo_verify_options* opts);
GEO_API size_t geo_verify_suite_count(void);
GEO_API const char* geo_verify_suite_name(size_t i);
/* suite NULL runs all; a failing check is reported through the report, not the status. */
GEO_API geo_status geo_verify_run(const char* suite, const geo_verify_options* opts, geo_report** out);
GEO_API size_t geo_report_count(const geo_report* rep);
GEO_API geo_status geo_report_check(const geo_report* rep, size_t i, geo_check* out);
GEO_API int geo_report_ok(const geo_report* rep);
GEO_API void geo_report_free(geo_report* rep);

#ifdef __cplusplus
}
#endif

#endif
