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

#pragma once

/*
 * Fourier coefficients of the local factors.
 *
 * The b-th summand of the p-local factor,
 *
 *   f_b(n) = (1 - chi_{(n^2-4)/p^{2b}}(p) / p)^{-1} I_{p^b}(n),
 *
 * is periodic with period p^e (e = 2b+1 generic, 2b+3 at 2, 2b+2 at level
 * and ramified primes) and vanishes off n^2 = 4 mod p^{2b}. Coefficients are
 * exact period averages, taken over that support only.
 */

#include <complex>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <tuple>
#include <vector>

#include <gmpxx.h>

#include "geodesic/multiplicity.hpp"

namespace geodesic {

using complex = std::complex<double>;

struct RationalPhase {
  std::int64_t a = 0;
  std::int64_t b = 1;

  /// Reduces a mod b; gcd(a, b) must be 1 (0/1 is the only phase with a = 0).
  static RationalPhase make(std::int64_t a, std::int64_t b);
};

enum class Side { Congruence, Quaternion };

int period_exponent(std::int64_t p, int b, LocalFlavor flavor);
std::int64_t local_period(std::int64_t p, int b, LocalFlavor flavor);

/// f_b(n) straight from the indicator definition.
double local_summand(std::int64_t p, int b, std::int64_t n, LocalFlavor flavor);

/// One f_b with its support tabulated; coefficients are cached per call site.
class LocalSummand {
 public:
  LocalSummand(std::int64_t p, int b, LocalFlavor flavor);

  std::int64_t prime() const { return p_; }
  int b() const { return b_; }
  LocalFlavor flavor() const { return flavor_; }
  int exponent() const { return e_; }
  std::int64_t period() const { return period_; }
  std::size_t support_size() const;

  /// Value at n, computed from n mod period.
  double value(std::int64_t n) const;

  /// Coefficient at a / p^c; zero once c exceeds the period exponent.
  complex coefficient(std::int64_t a, int c) const;
  complex coefficient(const RationalPhase& phase) const;

 private:
  complex inner(std::size_t coset, int k, std::int64_t r) const;

  std::int64_t p_;
  int b_;
  LocalFlavor flavor_;
  int e_;
  std::int64_t period_;
  std::int64_t step_;                        // p^{2b}
  std::vector<std::int64_t> roots_;          // n^2 = 4 mod p^{2b}
  std::vector<std::vector<double>> values_;  // values_[i][j] = f(roots_[i] + j step)
  std::vector<double> totals_;

  mutable std::mutex mu_;
  mutable std::map<std::tuple<std::size_t, int, std::int64_t>, complex> cache_;
};

/// Shared, lazily built summand table.
const LocalSummand& local_summand_table(std::int64_t p, int b, LocalFlavor flavor);

complex dft_coefficient(std::int64_t p, int b, LocalFlavor flavor, const RationalPhase& phase);

complex gauss_sum(std::int64_t q);
complex char_sum(std::int64_t q, std::int64_t a);

/// Per-b table rows for q | Q (congruence) or q | dB (quaternion).
complex closed_form_coeff_b(std::int64_t q, int b, int c, std::int64_t a, Side side);

/// Full local coefficient of beta_(q) for q | Q or q | dB.
complex closed_form_assembled(std::int64_t q, int c, std::int64_t a, Side side);

struct SeriesCoefficient {
  complex value;
  double tail_bound = 0;
  int b_max = 0;
};

/// Upper bound for |coefficient| of f_b times p^{2b}.
double summand_bound_constant(std::int64_t p, LocalFlavor flavor);

SeriesCoefficient series_coefficient(std::int64_t p, int c, std::int64_t a, const GroupContext& ctx,
                                     double tol = 1e-12);

/// Product of local coefficients over p | b, CRT-split.
complex global_coefficient(std::int64_t a, std::int64_t b, const GroupContext& ctx, double tol = 1e-12);

/// Memo of local coefficients for repeated global evaluations.
class CoefficientCache {
 public:
  explicit CoefficientCache(GroupContext ctx, double tol = 1e-12) : ctx_(std::move(ctx)), tol_(tol) {}
  complex local(std::int64_t p, int c, std::int64_t a);
  complex global(std::int64_t a, std::int64_t b);
  const GroupContext& context() const { return ctx_; }

 private:
  GroupContext ctx_;
  double tol_;
  std::map<std::tuple<std::int64_t, int, std::int64_t>, complex> local_;
};

enum class AMethod { Closed, Numeric };

mpq_class a_value_exact(std::int64_t p, int c, const GroupContext& ctx);
double a_value(std::int64_t p, int c, const GroupContext& ctx, AMethod method = AMethod::Closed,
               double tol = 1e-13);

mpq_class local_euler_factor_exact(std::int64_t p, const GroupContext& ctx);
double local_euler_factor(std::int64_t p, const GroupContext& ctx);

/// 1 + sum_{c <= terms} A(p^c) + the exact geometric tail past `terms`.
mpq_class local_euler_factor_termsum(std::int64_t p, const GroupContext& ctx, int terms);

}  // namespace geodesic
