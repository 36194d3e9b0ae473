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

#include "geodesic/geodesic.h"

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <new>
#include <string>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/fourier.hpp"
#include "geodesic/lfunctions.hpp"
#include "geodesic/meansquare.hpp"
#include "geodesic/multiplicity.hpp"
#include "geodesic/quadratic.hpp"
#include "geodesic/verify.hpp"

using namespace geodesic;

struct geo_context {
  GroupContext ctx;
};

struct geo_lstrategy {
  LStrategy s;
};

struct geo_cache {
  FactorCache cache;
  std::filesystem::path file;
};

struct geo_sweep {
  EmpiricalSeries series;
};

struct geo_report {
  std::vector<CheckResult> checks;
  std::vector<std::string> lines;
};

namespace {

thread_local std::string g_last_error;

geo_status status_of(ErrorKind k) {
  switch (k) {
    case ErrorKind::InvalidArgument: return GEO_E_INVALID;
    case ErrorKind::Budget: return GEO_E_BUDGET;
    case ErrorKind::Tolerance: return GEO_E_TOLERANCE;
    case ErrorKind::Io: return GEO_E_IO;
    case ErrorKind::Internal: return GEO_E_INTERNAL;
  }
  return GEO_E_INTERNAL;
}

template <class F>
geo_status guard(F&& f) {
  try {
    f();
    g_last_error.clear();
    return GEO_OK;
  } catch (const Error& e) {
    g_last_error = e.what();
    return status_of(e.kind());
  } catch (const std::bad_alloc&) {
    g_last_error = "out of memory";
    return GEO_E_INTERNAL;
  } catch (const std::exception& e) {
    g_last_error = e.what();
    return GEO_E_INTERNAL;
  }
}

template <class... P>
bool any_null(const P*... ptrs) {
  return ((ptrs == nullptr) || ...);
}

#define GEO_NONNULL(...)                \
  do {                                  \
    if (any_null(__VA_ARGS__)) {        \
      g_last_error = "null argument";   \
      return GEO_E_NULL;                \
    }                                   \
  } while (0)

char* dup(const std::string& s) {
  char* out = static_cast<char*>(std::malloc(s.size() + 1));
  if (!out) throw std::bad_alloc();
  std::memcpy(out, s.c_str(), s.size() + 1);
  return out;
}

std::int64_t prime_power(std::int64_t p, int c) {
  if (c < 0) fail("exponent must be nonnegative");
  std::int64_t m = 1;
  for (int i = 0; i < c; ++i) {
    if (m > INT64_MAX / p) fail("p^c exceeds 64 bits");
    m *= p;
  }
  return m;
}

Side side_of(const GroupContext& ctx) { return ctx.is_congruence() ? Side::Congruence : Side::Quaternion; }

void require_context_prime(std::int64_t p, const GroupContext& ctx) {
  const LocalFlavor f = ctx.flavor(p);
  if (f != LocalFlavor::Level && f != LocalFlavor::Ramified) {
    fail("closed forms cover primes dividing the level or dB only");
  }
}

void fill(geo_check* out, const CheckResult& c, const std::string& line) {
  out->criterion = c.criterion;
  out->passed = c.passed;
  out->warning = c.warning;
  out->seconds = c.seconds;
  out->suite = c.suite.c_str();
  out->detail = c.detail.c_str();
  out->attachment = c.attachment.c_str();
  out->line = line.c_str();
}

}  // namespace

extern "C" {

const char* geo_last_error(void) { return g_last_error.c_str(); }

const char* geo_status_name(geo_status s) {
  switch (s) {
    case GEO_OK: return "ok";
    case GEO_E_INVALID: return "invalid_argument";
    case GEO_E_BUDGET: return "budget";
    case GEO_E_TOLERANCE: return "tolerance";
    case GEO_E_IO: return "io";
    case GEO_E_INTERNAL: return "internal";
    case GEO_E_NULL: return "null_argument";
  }
  return "unknown";
}

const char* geo_version(void) { return GEODESIC_VERSION_STRING; }
void geo_set_seed(uint64_t seed) { set_global_seed(seed); }
uint64_t geo_seed(void) { return global_seed(); }
void geo_string_free(char* s) { std::free(s); }

geo_status geo_context_congruence(int64_t Q, geo_context** out) {
  GEO_NONNULL(out);
  return guard([&] { *out = new geo_context{GroupContext::congruence(Q)}; });
}

geo_status geo_context_quaternion(int64_t dB, geo_context** out) {
  GEO_NONNULL(out);
  return guard([&] { *out = new geo_context{GroupContext::quaternion(dB)}; });
}

geo_status geo_context_tag(const geo_context* ctx, char** out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = dup(ctx->ctx.tag()); });
}

void geo_context_free(geo_context* ctx) { delete ctx; }

geo_status geo_lstrategy_parse(const char* text, geo_lstrategy** out) {
  GEO_NONNULL(text, out);
  return guard([&] { *out = new geo_lstrategy{LStrategy::parse(text)}; });
}

geo_status geo_lstrategy_tag(const geo_lstrategy* s, char** out) {
  GEO_NONNULL(s, out);
  return guard([&] { *out = dup(s->s.tag()); });
}

void geo_lstrategy_free(geo_lstrategy* s) { delete s; }

geo_status geo_cache_open(const char* dir, geo_cache** out) {
  GEO_NONNULL(dir, out);
  return guard([&] {
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) throw Error(ErrorKind::Io, std::string("cannot create cache directory ") + dir);
    auto c = std::make_unique<geo_cache>();
    c->file = std::filesystem::path(dir) / "factors.txt";
    c->cache.load(c->file);
    *out = c.release();
  });
}

geo_status geo_cache_save(const geo_cache* cache) {
  GEO_NONNULL(cache);
  return guard([&] { cache->cache.save(cache->file); });
}

size_t geo_cache_size(const geo_cache* cache) { return cache ? cache->cache.size() : 0; }
void geo_cache_free(geo_cache* cache) { delete cache; }

geo_status geo_kronecker(int64_t D, int64_t n, int* out) {
  GEO_NONNULL(out);
  return guard([&] { *out = kronecker(D, n); });
}

geo_status geo_fundamental_split(int64_t m, int64_t* d, int64_t* l) {
  GEO_NONNULL(d, l);
  return guard([&] {
    const FundamentalSplit s = fundamental_split(m);
    *d = s.d;
    *l = s.l;
  });
}

geo_status geo_narrow_class_number(int64_t D, int64_t* out) {
  GEO_NONNULL(out);
  return guard([&] { *out = narrow_class_number(D); });
}

geo_status geo_regulator(int64_t D, double* out) {
  GEO_NONNULL(out);
  return guard([&] { *out = regulator(D).log_epsilon; });
}

geo_status geo_pell_unit(int64_t D, char** x, char** y) {
  GEO_NONNULL(x, y);
  return guard([&] {
    const PellUnit u = order_unit(D);
    char* xs = dup(u.x.get_str());
    try {
      *y = dup(u.y.get_str());
    } catch (...) {
      std::free(xs);
      throw;
    }
    *x = xs;
  });
}

geo_status geo_unit_index(int64_t d, int64_t f, int64_t* out) {
  GEO_NONNULL(out);
  return guard([&] { *out = unit_index(d, f); });
}

geo_status geo_l_one(int64_t D, const geo_lstrategy* s, double* out) {
  GEO_NONNULL(s, out);
  return guard([&] { *out = l_one(D, s->s); });
}

geo_status geo_trace_exists(int64_t t, const geo_context* ctx, int* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = trace_exists(t, ctx->ctx) ? 1 : 0; });
}

geo_status geo_beta(int64_t t, const geo_context* ctx, const geo_lstrategy* s, geo_cache* cache, double* out) {
  GEO_NONNULL(ctx, s, out);
  return guard([&] { *out = beta(t, ctx->ctx, s->s, cache ? &cache->cache : nullptr); });
}

geo_status geo_beta_classcount(int64_t t, const geo_context* ctx, double* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = beta_classcount(t, ctx->ctx); });
}

geo_status geo_beta_truncated(int64_t n, int64_t P, const geo_context* ctx, double* product, double* divisor_sum) {
  GEO_NONNULL(ctx, product, divisor_sum);
  return guard([&] {
    const TruncatedBeta tb = beta_truncated_forms(n, P, ctx->ctx);
    *product = tb.product;
    *divisor_sum = tb.divisor_sum;
  });
}

geo_status geo_local_factor(int64_t p, int64_t n, const geo_context* ctx, double* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = local_factor(p, n, ctx->ctx); });
}

geo_status geo_coefficient(int64_t p, int c, int64_t a, const geo_context* ctx, geo_coeff_method method, double tol,
                           geo_coefficient_value* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] {
    if (!is_prime(p)) fail("coefficient: p must be prime");
    const std::int64_t pc = prime_power(p, c);
    const RationalPhase phase = RationalPhase::make(a, pc);
    *out = {};
    switch (method) {
      case GEO_COEFF_CLOSED: {
        require_context_prime(p, ctx->ctx);
        const complex v = closed_form_assembled(p, c, phase.a, side_of(ctx->ctx));
        out->re = v.real();
        out->im = v.imag();
        break;
      }
      case GEO_COEFF_DFT: {
        const SeriesCoefficient sc = series_coefficient(p, c, phase.a, ctx->ctx, tol);
        const LocalFlavor fl = ctx->ctx.flavor(p);
        complex v{0, 0};
        for (int b = 0; b <= sc.b_max; ++b) v += std::pow(static_cast<double>(p), -b) * dft_coefficient(p, b, fl, phase);
        out->re = v.real();
        out->im = v.imag();
        out->tail_bound = sc.tail_bound;
        out->b_max = sc.b_max;
        break;
      }
      case GEO_COEFF_SERIES: {
        const SeriesCoefficient sc = series_coefficient(p, c, phase.a, ctx->ctx, tol);
        out->re = sc.value.real();
        out->im = sc.value.imag();
        out->tail_bound = sc.tail_bound;
        out->b_max = sc.b_max;
        break;
      }
      default:
        fail("coefficient: unknown method");
    }
  });
}

geo_status geo_coefficient_b(int64_t p, int b, int c, int64_t a, const geo_context* ctx, geo_coeff_method method,
                             geo_coefficient_value* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] {
    if (!is_prime(p)) fail("coefficient: p must be prime");
    if (b < 0) fail("coefficient: b must be nonnegative");
    const RationalPhase phase = RationalPhase::make(a, prime_power(p, c));
    complex v;
    if (method == GEO_COEFF_CLOSED) {
      require_context_prime(p, ctx->ctx);
      v = closed_form_coeff_b(p, b, c, phase.a, side_of(ctx->ctx));
    } else if (method == GEO_COEFF_DFT) {
      v = dft_coefficient(p, b, ctx->ctx.flavor(p), phase);
    } else {
      fail("coefficient: a single summand has closed or dft methods only");
    }
    *out = {v.real(), v.imag(), 0.0, b};
  });
}

geo_status geo_gauss_sum(int64_t q, double* re, double* im) {
  GEO_NONNULL(re, im);
  return guard([&] {
    const complex g = gauss_sum(q);
    *re = g.real();
    *im = g.imag();
  });
}

geo_status geo_a_value(int64_t p, int c, const geo_context* ctx, geo_a_method method, double* out, char** exact) {
  GEO_NONNULL(ctx, out);
  return guard([&] {
    if (method == GEO_A_CLOSED) {
      const mpq_class v = a_value_exact(p, c, ctx->ctx);
      *out = v.get_d();
      if (exact) *exact = dup(v.get_str());
    } else {
      if (exact) fail("a_value: exact value only on the closed path");
      *out = a_value(p, c, ctx->ctx, AMethod::Numeric);
    }
  });
}

geo_status geo_local_euler_factor(int64_t p, const geo_context* ctx, double* out, char** exact) {
  GEO_NONNULL(ctx, out);
  return guard([&] {
    const mpq_class v = local_euler_factor_exact(p, ctx->ctx);
    *out = v.get_d();
    if (exact) *exact = dup(v.get_str());
  });
}

geo_status geo_kappa(const geo_context* ctx, int64_t prime_bound, double tol, geo_euler_product* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] {
    const EulerProductResult r = kappa(ctx->ctx, prime_bound, tol);
    *out = {r.value, r.tail_bound, r.log_tail_bound, r.cross_check, r.prime_bound};
  });
}

geo_status geo_parseval_partial(const geo_context* ctx, int64_t bound, double* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = parseval_partial(ctx->ctx, bound); });
}

geo_status geo_seminorm(const geo_context* ctx, int64_t P, double s, int64_t N, double* out) {
  GEO_NONNULL(ctx, out);
  return guard([&] { *out = seminorm_estimate(ctx->ctx, P, s, N); });
}

geo_status geo_cross_validate(int64_t D_max, geo_cross_validation* out) {
  GEO_NONNULL(out);
  return guard([&] {
    const CrossValidation cv = cross_validate(D_max);
    *out = {};
    out->ok = cv.ok();
    out->count = static_cast<int64_t>(cv.discriminants.size());
    for (const auto& p : cv.pairs) {
      if (p.second == "logsin") {
        out->logsin_max_deviation = p.max_deviation;
        out->logsin_worst_D = p.worst_D;
      } else {
        out->smoothed_max_deviation = p.max_deviation;
        out->smoothed_worst_D = p.worst_D;
      }
    }
  });
}

void geo_sweep_options_init(geo_sweep_options* opts) {
  if (!opts) return;
  *opts = {};
  opts->workers = 1;
  opts->reproducible = 1;
  opts->chunk = 512;
}

geo_status geo_sweep_run(const geo_context* ctx, int64_t N_max, int64_t stride, const geo_lstrategy* s,
                         const geo_sweep_options* opts, geo_sweep** out) {
  GEO_NONNULL(ctx, s, out);
  return guard([&] {
    EmpiricalOptions eo;
    if (opts) {
      eo.workers = opts->workers;
      eo.reproducible = opts->reproducible != 0;
      eo.budget_seconds = opts->budget_seconds;
      eo.exact_below = opts->exact_below;
      if (opts->chunk > 0) eo.chunk = opts->chunk;
      if (opts->checkpoint_file) eo.checkpoint_file = std::filesystem::path(opts->checkpoint_file);
      eo.resume = opts->resume != 0;
      if (opts->cache) eo.cache = &opts->cache->cache;
      if (opts->on_checkpoint) {
        const geo_checkpoint_cb cb = opts->on_checkpoint;
        void* user = opts->user;
        eo.on_checkpoint = [cb, user](const Checkpoint& c) {
          const geo_checkpoint cp{c.N, c.mean, c.mean_square, c.wall_seconds};
          cb(&cp, user);
        };
      }
    }
    *out = new geo_sweep{empirical(ctx->ctx, N_max, stride, s->s, eo)};
  });
}

size_t geo_sweep_count(const geo_sweep* sw) { return sw ? sw->series.checkpoints.size() : 0; }

geo_status geo_sweep_checkpoint(const geo_sweep* sw, size_t i, geo_checkpoint* out) {
  GEO_NONNULL(sw, out);
  if (i >= sw->series.checkpoints.size()) {
    g_last_error = "checkpoint index out of range";
    return GEO_E_INVALID;
  }
  const Checkpoint& c = sw->series.checkpoints[i];
  *out = {c.N, c.mean, c.mean_square, c.wall_seconds};
  return GEO_OK;
}

int geo_sweep_partial(const geo_sweep* sw) { return sw && sw->series.partial ? 1 : 0; }
int64_t geo_sweep_resumed_from(const geo_sweep* sw) { return sw ? sw->series.resumed_from : 0; }
const char* geo_sweep_strategy_tag(const geo_sweep* sw) { return sw ? sw->series.strategy_tag.c_str() : ""; }
void geo_sweep_free(geo_sweep* sw) { delete sw; }

void geo_verify_options_init(geo_verify_options* opts) {
  if (!opts) return;
  const VerifyOptions d;
  *opts = {};
  opts->workers = d.workers;
  opts->sweep_n_max = d.sweep_n_max;
  opts->sweep_stride = d.sweep_stride;
  opts->sweep_budget_seconds = d.sweep_budget_seconds;
}

size_t geo_verify_suite_count(void) { return suite_names().size(); }

const char* geo_verify_suite_name(size_t i) {
  const auto& names = suite_names();
  return i < names.size() ? names[i].c_str() : nullptr;
}

geo_status geo_verify_run(const char* suite, const geo_verify_options* opts, geo_report** out) {
  GEO_NONNULL(out);
  return guard([&] {
    VerifyOptions vo;
    geo_check_cb cb = nullptr;
    void* user = nullptr;
    if (opts) {
      vo.workers = opts->workers;
      vo.sweep_n_max = opts->sweep_n_max;
      vo.sweep_stride = opts->sweep_stride;
      vo.sweep_budget_seconds = opts->sweep_budget_seconds;
      if (opts->sweep_csv) vo.sweep_csv = std::filesystem::path(opts->sweep_csv);
      cb = opts->on_check;
      user = opts->user;
    }
    std::vector<std::string> names;
    if (suite) {
      names.push_back(suite);
    } else {
      names = suite_names();
    }
    auto rep = std::make_unique<geo_report>();
    rep->checks.reserve(names.size());
    rep->lines.reserve(names.size());
    for (const auto& n : names) {
      rep->checks.push_back(run_suite(n, vo));
      rep->lines.push_back(rep->checks.back().line());
      if (cb) {
        geo_check c;
        fill(&c, rep->checks.back(), rep->lines.back());
        cb(&c, user);
      }
    }
    *out = rep.release();
  });
}

size_t geo_report_count(const geo_report* rep) { return rep ? rep->checks.size() : 0; }

geo_status geo_report_check(const geo_report* rep, size_t i, geo_check* out) {
  GEO_NONNULL(rep, out);
  if (i >= rep->checks.size()) {
    g_last_error = "check index out of range";
    return GEO_E_INVALID;
  }
  fill(out, rep->checks[i], rep->lines[i]);
  return GEO_OK;
}

int geo_report_ok(const geo_report* rep) {
  if (!rep) return 0;
  for (const auto& c : rep->checks) {
    if (!c.passed) return 0;
  }
  return 1;
}

void geo_report_free(geo_report* rep) { delete rep; }

}  // extern "C"
