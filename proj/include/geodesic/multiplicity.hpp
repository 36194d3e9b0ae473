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
 * Weighted multiplicities of hyperbolic classes of trace t.
 *
 *   beta(t) = sum_{f | l} (1/v) L(1, chi_D) prod_p w_p(D),   t^2 - 4 = d l^2,
 *             D = d f^2, v = l / f
 *
 * with w_q(D) = 2 or 1 + (D/q) at level primes, 0 or 1 - (D/p) at ramified
 * primes. The local factors below are the p-parts of the same sum with L
 * replaced by its Euler product.
 */

#include <cstdint>
#include <string>
#include <vector>

#include "geodesic/lfunctions.hpp"

namespace geodesic {

class FactorCache;

enum class LocalFlavor { Generic, Two, Level, Ramified };

const char* to_string(LocalFlavor f);

struct GroupContext {
  enum class Kind { Congruence, Quaternion };

  Kind kind = Kind::Congruence;
  std::int64_t modulus = 1;           // Q or dB
  std::vector<std::int64_t> primes;   // prime divisors of modulus

  static GroupContext congruence(std::int64_t Q);
  static GroupContext quaternion(std::int64_t dB);

  bool is_congruence() const { return kind == Kind::Congruence; }
  LocalFlavor flavor(std::int64_t p) const;
  std::int64_t largest_prime() const { return primes.empty() ? 1 : primes.back(); }
  /// "level:15", "quaternion:15"
  std::string tag() const;
};

inline constexpr std::int64_t kMaxTrace = 3037000499;  // t^2 - 4 fits in 63 bits

bool trace_exists(std::int64_t t, std::int64_t Q);
bool trace_exists(std::int64_t t, const GroupContext& ctx);

int local_weight(std::int64_t D, std::int64_t p, LocalFlavor flavor);

/// Product of local weights of D over the context primes.
int context_weight(std::int64_t D, const GroupContext& ctx);

double beta(std::int64_t t, const GroupContext& ctx, const LStrategy& strategy);
double beta(std::int64_t t, const GroupContext& ctx, const LStrategy& strategy, FactorCache* cache);

std::int64_t conjugacy_class_count(std::int64_t t, std::int64_t Q, std::int64_t f);

/// Same sum as beta, evaluated through h(D) log eps_D with no L-series.
double beta_classcount(std::int64_t t, std::int64_t Q);
double beta_classcount(std::int64_t t, const GroupContext& ctx);

int indicator(std::int64_t p, int b, std::int64_t n, LocalFlavor flavor);

/// Largest b with p^{2b} | n^2 - 4.
int max_b(std::int64_t p, std::int64_t n);

double local_factor(std::int64_t p, std::int64_t n, const GroupContext& ctx);

struct TruncatedBeta {
  double product;      // prod_{p <= P} local_factor
  double divisor_sum;  // P-smooth v only, Euler product in place of L
};

TruncatedBeta beta_truncated_forms(std::int64_t n, std::int64_t P, const GroupContext& ctx);

/// Product form; with `checked` the divisor-sum form must agree to 1e-10.
double beta_truncated(std::int64_t n, std::int64_t P, const GroupContext& ctx, bool checked = true);

}  // namespace geodesic
