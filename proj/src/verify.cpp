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

#include "geodesic/verify.hpp"

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <functional>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/fourier.hpp"
#include "geodesic/lfunctions.hpp"
#include "geodesic/meansquare.hpp"
#include "geodesic/multiplicity.hpp"
#include "geodesic/quadratic.hpp"

namespace geodesic {

namespace {

std::string fmt(const char* f, ...) __attribute__((format(printf, 1, 2)));
std::string fmt(const char* f, ...) {
  char buf[512];
  va_list ap;
  va_start(ap, f);
  std::vsnprintf(buf, sizeof buf, f, ap);
  va_end(ap);
  return buf;
}

// worst deviation tracker
struct Worst {
  double value = 0;
  std::string where;
  void see(double dev, const std::string& at) {
    if (!(dev <= value)) {  // NaN sticks
      value = dev;
      where = at;
    }
  }
};

const GroupContext& quaternion_partner(std::int64_t q) {
  static const GroupContext r15 = GroupContext::quaternion(15);
  static const GroupContext r21 = GroupContext::quaternion(21);
  return q == 7 ? r21 : r15;
}

CheckResult suite_c1(const VerifyOptions&) {
  CheckResult r;
  const auto t0 = std::chrono::steady_clock::now();
  const EulerProductResult k = kappa(GroupContext::congruence(1), 100000, 1e-5);
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  const double dev = std::fabs(k.value - 1.328);
  r.passed = dev <= 1e-3 && k.tail_bound < 1e-5 && secs < 5.0;
  r.detail = fmt("C1=%.9f |C1-1.328|=%.2e tail=%.2e time=%.2fs", k.value, dev, k.tail_bound, secs);
  return r;
}

CheckResult suite_two_adic(const VerifyOptions&) {
  CheckResult r;
  const GroupContext q1 = GroupContext::congruence(1);
  const mpq_class M2 = local_euler_factor_exact(2, q1);
  // 1 + 1/9 + 1/18 + 1/144 + sum_{c>=6} 2^{5-2c}/9, the tail being (32/9) 4^{-6} (4/3)
  const mpq_class tail = mpq_class(32, 9) * mpq_class(1, 4096) * mpq_class(4, 3);
  const mpq_class table = 1 + mpq_class(1, 9) + mpq_class(1, 18) + mpq_class(1, 144) + tail;
  bool exact = M2 == mpq_class(1015, 864) && table == M2;

  std::vector<mpq_class> expected = {0, mpq_class(1, 9), mpq_class(1, 18), 0, mpq_class(1, 144), 0};
  for (int c = 6; c <= 12; ++c) {
    mpq_class v(1, 9);
    v *= 32;
    mpz_class den = 1;
    den <<= 2 * c;
    v /= den;
    expected.push_back(v);
  }
  int bad_rows = 0;
  for (int c = 1; c <= 12; ++c) {
    if (a_value_exact(2, c, q1) != expected[c]) ++bad_rows;
  }
  Worst w;
  for (int c = 1; c <= 7; ++c) {
    const double num = a_value(2, c, q1, AMethod::Numeric);
    w.see(std::fabs(num - expected[c].get_d()), fmt("c=%d", c));
  }
  r.passed = exact && bad_rows == 0 && w.value <= 1e-9;
  r.detail = fmt("M2=%s table_rows_bad=%d dft_worst=%.2e (%s)", M2.get_str().c_str(), bad_rows, w.value,
                 w.where.c_str());
  return r;
}

CheckResult suite_euler_factors(const VerifyOptions&) {
  CheckResult r;
  const GroupContext gen = GroupContext::congruence(1);
  const GroupContext lev = GroupContext::congruence(3);
  const GroupContext ram = GroupContext::quaternion(15);
  bool exact = local_euler_factor_exact(3, gen) == mpq_class(135, 128) &&
               local_euler_factor_exact(3, lev) == mpq_class(15, 8) &&
               local_euler_factor_exact(3, ram) == mpq_class(39, 32);
  Worst w;
  const double sums[3] = {1 + 1.0 / 32 + 3.0 / 128, 1 + 1.0 / 2 + 1.0 / 3 + 1.0 / 24, 1 + 1.0 / 8 + 1.0 / 12 + 1.0 / 96};
  const GroupContext* ctxs[3] = {&gen, &lev, &ram};
  for (int i = 0; i < 3; ++i) {
    w.see(std::fabs(sums[i] - local_euler_factor(3, *ctxs[i])), fmt("p=3 row %d", i));
  }
  for (std::int64_t p : {5, 7, 11}) {
    const GroupContext lp = GroupContext::congruence(p);
    const GroupContext rp = GroupContext::quaternion(p == 5 ? 15 : 3 * p);
    for (const GroupContext* ctx : {&gen, &lp, &rp}) {
      const mpq_class exact_M = local_euler_factor_exact(p, *ctx);
      for (int terms : {2, 4, 8}) {
        const mpq_class ts = local_euler_factor_termsum(p, *ctx, terms);
        w.see(std::fabs(mpq_class(ts - exact_M).get_d()), fmt("p=%lld %s terms=%d", (long long)p, ctx->tag().c_str(), terms));
      }
      w.see(std::fabs(local_euler_factor(p, *ctx) - exact_M.get_d()), fmt("p=%lld %s", (long long)p, ctx->tag().c_str()));
      const double generic = local_euler_factor_exact(p, gen).get_d();
      w.see(std::fabs(generic * kappa_correction(p, *ctx) - exact_M.get_d()),
            fmt("correction p=%lld %s", (long long)p, ctx->tag().c_str()));
    }
  }
  r.passed = exact && w.value <= 1e-12;
  r.detail = fmt("M3 exact=%s worst=%.2e (%s)", exact ? "yes" : "no", w.value, w.where.c_str());
  return r;
}

CheckResult suite_fourier(const VerifyOptions&) {
  CheckResult r;
  Worst table, assembled, zero;
  std::int64_t compared = 0;
  for (std::int64_t q : {3, 5, 7}) {
    for (Side side : {Side::Congruence, Side::Quaternion}) {
      const LocalFlavor fl = side == Side::Congruence ? LocalFlavor::Level : LocalFlavor::Ramified;
      const char* sname = side == Side::Congruence ? "level" : "ramified";
      for (int b = 0; b <= 3; ++b) {
        std::int64_t qc = 1;
        for (int c = 0; c <= 2 * b + 2; ++c, qc *= q) {
          for (std::int64_t a = (c == 0 ? 0 : 1); a < std::max<std::int64_t>(qc, 1); ++a) {
            if (c > 0 && a % q == 0) continue;
            const complex closed = closed_form_coeff_b(q, b, c, a, side);
            const complex dft = dft_coefficient(q, b, fl, RationalPhase{a, qc});
            table.see(std::abs(closed - dft), fmt("q=%lld %s b=%d c=%d a=%lld", (long long)q, sname, b, c, (long long)a));
            ++compared;
          }
        }
      }
      const GroupContext ctx = side == Side::Congruence ? GroupContext::congruence(q) : quaternion_partner(q);
      std::int64_t qc = q;
      for (int c = 1; c <= 7; ++c, qc *= q) {
        for (std::int64_t a = 1; a < qc; ++a) {
          if (a % q == 0) continue;
          const complex lhs = closed_form_assembled(q, c, a, side);
          const complex rhs = series_coefficient(q, c, a, ctx).value;
          assembled.see(std::abs(lhs - rhs), fmt("q=%lld %s c=%d a=%lld", (long long)q, sname, c, (long long)a));
        }
      }
    }
  }
  for (const GroupContext& ctx : {GroupContext::congruence(1), GroupContext::congruence(3), GroupContext::congruence(15),
                                  GroupContext::quaternion(15), GroupContext::quaternion(21)}) {
    for (std::int64_t p : {2, 3, 5, 7, 11}) {
      zero.see(std::abs(series_coefficient(p, 0, 0, ctx).value - complex{1.0, 0.0}),
               fmt("p=%lld %s", (long long)p, ctx.tag().c_str()));
    }
  }
  r.passed = table.value <= 1e-10 && assembled.value <= 1e-9 && zero.value <= 1e-9;
  r.detail = fmt("table rows=%lld worst=%.2e assembled worst=%.2e hat0 worst=%.2e", (long long)compared, table.value,
                 assembled.value, zero.value);
  return r;
}

CheckResult suite_gauss(const VerifyOptions&) {
  CheckResult r;
  Worst w;
  bool sums_ok = true;
  int primes = 0;
  for (std::int64_t q = 3; q < 100; q += 2) {
    if (!is_prime(q)) continue;
    ++primes;
    const double s = std::sqrt(static_cast<double>(q));
    const complex expected = q % 4 == 1 ? complex{s, 0} : complex{0, s};
    w.see(std::abs(gauss_sum(q) - expected), fmt("q=%lld", (long long)q));
    if (char_sum(q, 0) != complex{-1.0, 0.0}) sums_ok = false;
  }
  r.passed = w.value <= 1e-12 && sums_ok;
  r.detail = fmt("primes=%d gauss worst=%.2e (%s) char_sum(q,0)=-1 %s", primes, w.value, w.where.c_str(),
                 sums_ok ? "exact" : "FAILED");
  return r;
}

CheckResult suite_beta(const VerifyOptions&) {
  CheckResult r;
  Worst w;
  const LStrategy logsin = LStrategy::log_sin();
  for (std::int64_t Q : {1, 3, 5, 15}) {
    const GroupContext ctx = GroupContext::congruence(Q);
    for (std::int64_t t = 3; t <= 200; ++t) {
      w.see(std::fabs(beta(t, ctx, logsin) - beta_classcount(t, Q)), fmt("Q=%lld t=%lld", (long long)Q, (long long)t));
    }
  }
  int mismatches = 0;
  const LStrategy exact = LStrategy::class_number();
  for (std::int64_t Q : {1, 3, 5, 15}) {
    const GroupContext ctx = GroupContext::congruence(Q);
    for (std::int64_t t = 3; t <= 1000; ++t) {
      const bool zero = beta(t, ctx, exact) == 0.0;
      if (zero == trace_exists(t, Q)) ++mismatches;
    }
  }
  // t = 3: t^2 - 4 = 5, so beta_R(3) = 2 L(1, chi_5) with L(1, chi_5) = 2 log(golden) / sqrt 5
  const double L5 = 2 * std::log((1 + std::sqrt(5.0)) / 2) / std::sqrt(5.0);
  const double bR3 = beta(3, GroupContext::quaternion(15), exact);
  const double dev = std::fabs(bR3 - 2 * L5);
  r.passed = w.value < 1e-8 && mismatches == 0 && dev < 1e-8;
  r.detail = fmt("logsin-vs-classcount worst=%.2e (%s) zero/exists mismatches=%d beta_R15(3)=%.12f dev=%.2e", w.value,
                 w.where.c_str(), mismatches, bR3, dev);
  return r;
}

CheckResult suite_factorization(const VerifyOptions&) {
  CheckResult r;
  Worst w;
  for (const GroupContext& ctx : {GroupContext::congruence(1), GroupContext::congruence(3), GroupContext::congruence(15),
                                  GroupContext::quaternion(15)}) {
    for (std::int64_t P : {7, 11, 13}) {
      for (std::int64_t n = 3; n <= 500; ++n) {
        const TruncatedBeta tb = beta_truncated_forms(n, P, ctx);
        w.see(std::fabs(tb.product - tb.divisor_sum),
              fmt("%s P=%lld n=%lld", ctx.tag().c_str(), (long long)P, (long long)n));
      }
    }
  }
  r.passed = w.value <= 1e-10;
  r.detail = fmt("worst=%.2e (%s)", w.value, w.where.c_str());
  return r;
}

CheckResult suite_parseval(const VerifyOptions&) {
  CheckResult r;
  bool ok = true;
  std::string detail;
  for (std::int64_t Q : {1, 3}) {
    const GroupContext ctx = GroupContext::congruence(Q);
    const std::vector<double> s = parseval_series(ctx, 1000);
    std::int64_t drops = 0;
    for (std::size_t i = 1; i < s.size(); ++i) {
      if (s[i] < s[i - 1]) ++drops;
    }
    const double k = kappa(ctx).value;
    const bool fine = drops == 0 && s.back() <= k + 1e-6;
    ok = ok && fine;
    detail += fmt("Q=%lld mass=%.9f kappa=%.9f drops=%lld; ", (long long)Q, s.back(), k, (long long)drops);
  }
  r.passed = ok;
  r.detail = detail.substr(0, detail.size() - 2);
  return r;
}

CheckResult suite_lstrategy(const VerifyOptions&) {
  CheckResult r;
  const CrossValidation cv = cross_validate(10000);
  r.passed = cv.ok();
  for (const auto& p : cv.pairs) {
    if (!r.detail.empty()) r.detail += "; ";
    r.detail += fmt("%s vs %s max=%.2e at D=%lld tol=%.0e n=%lld", p.first.c_str(), p.second.c_str(), p.max_deviation,
                    (long long)p.worst_D, p.tolerance, (long long)p.count);
  }
  return r;
}

CheckResult suite_empirical(const VerifyOptions& opts) {
  CheckResult r;
  EmpiricalOptions eo;
  eo.workers = opts.workers;
  eo.reproducible = true;
  eo.budget_seconds = opts.sweep_budget_seconds;
  std::filesystem::path csv = opts.sweep_csv ? *opts.sweep_csv
                                             : std::filesystem::temp_directory_path() / "geodesic_verify_sweep.csv";
  std::error_code ec;
  std::filesystem::remove(csv, ec);
  eo.checkpoint_file = csv;
  const EmpiricalSeries s = empirical(GroupContext::congruence(1), opts.sweep_n_max, opts.sweep_stride,
                                      LStrategy::smoothed(), eo);
  r.attachment = csv.string();
  if (s.checkpoints.empty()) {
    r.detail = "no checkpoint reached";
    return r;
  }
  const Checkpoint& last = s.checkpoints.back();
  const bool mean_ok = last.mean >= 0.95 && last.mean <= 1.05;
  const double rel = std::fabs(last.mean_square - 1.328) / 1.328;
  r.passed = mean_ok && !s.partial && last.N == opts.sweep_n_max;
  r.warning = r.passed && rel > 0.15;
  r.detail = fmt("N=%lld mean=%.6f mean_square=%.6f (%.1f%% from 1.328)%s%s", (long long)last.N, last.mean,
                 last.mean_square, 100 * rel, s.partial ? " PARTIAL: budget exhausted" : "",
                 r.warning ? " WARNING: mean square outside 15% band" : "");
  return r;
}

struct Suite {
  const char* name;
  std::function<CheckResult(const VerifyOptions&)> run;
};

const std::vector<Suite>& suites() {
  static const std::vector<Suite> all = {
      {"c1", suite_c1},
      {"two_adic", suite_two_adic},
      {"euler_factors", suite_euler_factors},
      {"fourier", suite_fourier},
      {"gauss", suite_gauss},
      {"beta", suite_beta},
      {"factorization", suite_factorization},
      {"parseval", suite_parseval},
      {"lstrategy", suite_lstrategy},
      {"empirical", suite_empirical},
  };
  return all;
}

}  // namespace

std::string CheckResult::line() const {
  const char* tag = passed ? (warning ? "WARN" : "PASS") : "FAIL";
  std::string s = fmt("[%s] criterion %d %s: ", tag, criterion, suite.c_str()) + detail + fmt(" (%.2f s)", seconds);
  if (!attachment.empty()) s += " csv=" + attachment;
  return s;
}

bool VerifyReport::ok() const {
  for (const auto& c : checks) {
    if (!c.passed) return false;
  }
  return true;
}

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suites()) v.push_back(s.name);
    return v;
  }();
  return names;
}

CheckResult run_suite(const std::string& name, const VerifyOptions& opts) {
  const auto& all = suites();
  for (std::size_t i = 0; i < all.size(); ++i) {
    if (name != all[i].name && name != std::to_string(i + 1)) continue;
    const auto t0 = std::chrono::steady_clock::now();
    CheckResult r;
    try {
      r = all[i].run(opts);
    } catch (const std::exception& e) {
      r.passed = false;
      r.detail = std::string("error: ") + e.what();
    }
    r.criterion = static_cast<int>(i + 1);
    r.suite = all[i].name;
    r.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    return r;
  }
  fail("unknown suite '" + name + "'");
}

VerifyReport run_verify(const std::optional<std::string>& suite, const VerifyOptions& opts) {
  VerifyReport rep;
  if (suite) {
    rep.checks.push_back(run_suite(*suite, opts));
  } else {
    for (const auto& n : suite_names()) rep.checks.push_back(run_suite(n, opts));
  }
  return rep;
}

}  // namespace geodesic
