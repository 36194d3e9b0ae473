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

#include "geodesic/multiplicity.hpp"

#include <algorithm>
#include <cmath>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/quadratic.hpp"

namespace geodesic {

namespace {

std::int64_t trace_discriminant(std::int64_t n) {
  if (n < 0) n = -n;
  if (n < 3) fail("trace must satisfy |n| >= 3, got " + std::to_string(n));
  if (n > kMaxTrace) fail("trace too large: n^2-4 must fit in 63 bits");
  return (n - 2) * (n + 2);
}

FundamentalSplit split_of(std::int64_t t, FactorCache* cache) {
  if (!cache) return trace_split(t);
  trace_discriminant(t);
  if (t < 0) t = -t;
  return fundamental_split(merge(cache->get(t - 2), cache->get(t + 2)));
}

bool divides_square(std::int64_t p, std::int64_t m) {
  return m % (p * p) == 0;
}

// m / p^{2b}, or 0 if p^{2b} does not divide m.
std::int64_t strip(std::int64_t m, std::int64_t p, int b) {
  for (int i = 0; i < b; ++i) {
    if (!divides_square(p, m)) return 0;
    m /= p * p;
  }
  return m;
}

void check_flavor(std::int64_t p, LocalFlavor flavor) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) fail("expected a prime, got " + std::to_string(p));
  if ((p == 2) != (flavor == LocalFlavor::Two)) {
    fail(std::string("flavor ") + to_string(flavor) + " is inconsistent with p = " + std::to_string(p));
  }
}

long double euler_product(std::int64_t D, std::int64_t P) {
  long double out = 1;
  for (std::uint32_t p : PrimeSieve::shared(static_cast<std::uint32_t>(P)).primes_up_to(static_cast<std::uint32_t>(P))) {
    const int c = kronecker(D, p);
    if (c != 0) out /= 1.0L - static_cast<long double>(c) / p;
  }
  return out;
}

}  // namespace

const char* to_string(LocalFlavor f) {
  switch (f) {
    case LocalFlavor::Generic: return "generic";
    case LocalFlavor::Two: return "two";
    case LocalFlavor::Level: return "level";
    case LocalFlavor::Ramified: return "ramified";
  }
  return "?";
}

GroupContext GroupContext::congruence(std::int64_t Q) {
  if (Q < 1) fail("level must be positive, got " + std::to_string(Q));
  if (Q % 2 == 0) fail("level must be odd, got " + std::to_string(Q));
  const Factorization f = factorize(Q);
  if (!f.squarefree()) fail("level must be squarefree, got " + std::to_string(Q));
  GroupContext ctx{Kind::Congruence, Q, {}};
  for (auto p : f.primes()) ctx.primes.push_back(static_cast<std::int64_t>(p));
  return ctx;
}

GroupContext GroupContext::quaternion(std::int64_t dB) {
  if (dB < 2) fail("quaternion discriminant must be > 1, got " + std::to_string(dB));
  if (dB % 2 == 0) fail("quaternion discriminant must be odd (2 | dB is not supported), got " + std::to_string(dB));
  const Factorization f = factorize(dB);
  if (!f.squarefree()) fail("quaternion discriminant must be squarefree, got " + std::to_string(dB));
  if (f.factors.size() % 2 != 0) {
    fail("quaternion discriminant needs an even number of prime factors, got " + std::to_string(dB));
  }
  GroupContext ctx{Kind::Quaternion, dB, {}};
  for (auto p : f.primes()) ctx.primes.push_back(static_cast<std::int64_t>(p));
  return ctx;
}

LocalFlavor GroupContext::flavor(std::int64_t p) const {
  if (p == 2) return LocalFlavor::Two;
  if (std::binary_search(primes.begin(), primes.end(), p)) {
    return is_congruence() ? LocalFlavor::Level : LocalFlavor::Ramified;
  }
  return LocalFlavor::Generic;
}

std::string GroupContext::tag() const {
  return (is_congruence() ? "level:" : "quaternion:") + std::to_string(modulus);
}

bool trace_exists(std::int64_t t, std::int64_t Q) {
  const GroupContext ctx = GroupContext::congruence(Q);
  const FundamentalSplit s = trace_split(t);
  for (std::int64_t q : ctx.primes) {
    if (s.l % q != 0 && kronecker(s.d, q) == -1) return false;
  }
  return true;
}

bool trace_exists(std::int64_t t, const GroupContext& ctx) {
  if (ctx.is_congruence()) return trace_exists(t, ctx.modulus);
  const FundamentalSplit s = trace_split(t);
  for (std::int64_t f : divisors(s.l)) {
    if (context_weight(s.d * f * f, ctx) != 0) return true;
  }
  return false;
}

int local_weight(std::int64_t D, std::int64_t p, LocalFlavor flavor) {
  if (p < 3 || !is_prime(static_cast<std::uint64_t>(p))) fail("local_weight: p must be an odd prime");
  switch (flavor) {
    case LocalFlavor::Level:
      return divides_square(p, D) ? 2 : 1 + kronecker(D, p);
    case LocalFlavor::Ramified:
      return divides_square(p, D) ? 0 : 1 - kronecker(D, p);
    default:
      fail(std::string("local_weight: flavor ") + to_string(flavor) + " has no weight");
  }
}

int context_weight(std::int64_t D, const GroupContext& ctx) {
  const LocalFlavor fl = ctx.is_congruence() ? LocalFlavor::Level : LocalFlavor::Ramified;
  int w = 1;
  for (std::int64_t p : ctx.primes) {
    w *= local_weight(D, p, fl);
    if (w == 0) break;
  }
  return w;
}

double beta(std::int64_t t, const GroupContext& ctx, const LStrategy& strategy) {
  return beta(t, ctx, strategy, nullptr);
}

double beta(std::int64_t t, const GroupContext& ctx, const LStrategy& strategy, FactorCache* cache) {
  if (t < 3) fail("beta: t must be >= 3, got " + std::to_string(t));
  strategy.validate();
  const FundamentalSplit s = split_of(t, cache);
  double sum = 0;
  for (std::int64_t f : divisors(s.l)) {
    const std::int64_t D = s.d * f * f;
    const int w = context_weight(D, ctx);
    if (w == 0) continue;
    sum += w * l_one(D, strategy) / static_cast<double>(s.l / f);
  }
  return sum;
}

std::int64_t conjugacy_class_count(std::int64_t t, std::int64_t Q, std::int64_t f) {
  const GroupContext ctx = GroupContext::congruence(Q);
  const FundamentalSplit s = trace_split(t);
  if (f < 1 || s.l % f != 0) {
    fail("conjugacy_class_count: f = " + std::to_string(f) + " does not divide l = " + std::to_string(s.l));
  }
  std::int64_t w = 1;
  for (std::int64_t q : ctx.primes) w *= (f % q == 0) ? 2 : 1 + kronecker(s.d, q);
  if (w == 0) return 0;
  return narrow_class_number(s.d * f * f) * w;
}

double beta_classcount(std::int64_t t, std::int64_t Q) {
  if (t < 3) fail("beta_classcount: t must be >= 3, got " + std::to_string(t));
  const FundamentalSplit s = trace_split(t);
  const long double root = std::sqrt(static_cast<long double>(s.m));
  long double sum = 0;
  for (std::int64_t f : divisors(s.l)) {
    const std::int64_t count = conjugacy_class_count(t, Q, f);
    if (count == 0) continue;
    sum += count * static_cast<long double>(regulator(s.d * f * f).log_epsilon);
  }
  return static_cast<double>(sum / root);
}

double beta_classcount(std::int64_t t, const GroupContext& ctx) {
  if (ctx.is_congruence()) return beta_classcount(t, ctx.modulus);
  if (t < 3) fail("beta_classcount: t must be >= 3, got " + std::to_string(t));
  const FundamentalSplit s = trace_split(t);
  const long double root = std::sqrt(static_cast<long double>(s.m));
  long double sum = 0;
  for (std::int64_t f : divisors(s.l)) {
    const std::int64_t D = s.d * f * f;
    const int w = context_weight(D, ctx);
    if (w == 0) continue;
    sum += w * narrow_class_number(D) * static_cast<long double>(regulator(D).log_epsilon);
  }
  return static_cast<double>(sum / root);
}

int indicator(std::int64_t p, int b, std::int64_t n, LocalFlavor flavor) {
  check_flavor(p, flavor);
  if (b < 0) fail("indicator: b must be nonnegative");
  const std::int64_t m = trace_discriminant(n);
  const std::int64_t mb = strip(m, p, b);
  if (mb == 0) return 0;
  switch (flavor) {
    case LocalFlavor::Generic:
      return 1;
    case LocalFlavor::Two:
      return is_discriminant(mb) ? 1 : 0;
    case LocalFlavor::Level:
      return divides_square(p, mb) ? 2 : 1 + kronecker(mb, p);
    case LocalFlavor::Ramified:
      return divides_square(p, mb) ? 0 : 1 - kronecker(mb, p);
  }
  return 0;
}

int max_b(std::int64_t p, std::int64_t n) {
  std::int64_t m = trace_discriminant(n);
  int b = 0;
  while (divides_square(p, m)) {
    m /= p * p;
    ++b;
  }
  return b;
}

double local_factor(std::int64_t p, std::int64_t n, const GroupContext& ctx) {
  const LocalFlavor flavor = ctx.flavor(p);
  check_flavor(p, flavor);
  std::int64_t mb = trace_discriminant(n);
  long double sum = 0, scale = 1;
  for (int b = 0;; ++b) {
    int ind = 0;
    switch (flavor) {
      case LocalFlavor::Generic: ind = 1; break;
      case LocalFlavor::Two: ind = is_discriminant(mb) ? 1 : 0; break;
      case LocalFlavor::Level: ind = divides_square(p, mb) ? 2 : 1 + kronecker(mb, p); break;
      case LocalFlavor::Ramified: ind = divides_square(p, mb) ? 0 : 1 - kronecker(mb, p); break;
    }
    if (ind != 0) sum += scale * ind / (1.0L - static_cast<long double>(kronecker(mb, p)) / p);
    if (!divides_square(p, mb)) break;
    mb /= p * p;
    scale /= p;
  }
  return static_cast<double>(sum);
}

TruncatedBeta beta_truncated_forms(std::int64_t n, std::int64_t P, const GroupContext& ctx) {
  if (n < 3) fail("beta_truncated: n must be >= 3, got " + std::to_string(n));
  if (P < 2) fail("beta_truncated: prime bound must be >= 2");
  if (P > 100000000) fail("beta_truncated: prime bound above 1e8");
  if (P < ctx.largest_prime()) {
    fail("beta_truncated: prime bound " + std::to_string(P) + " is below the context prime " +
         std::to_string(ctx.largest_prime()));
  }
  const auto primes = PrimeSieve::shared(static_cast<std::uint32_t>(P)).primes_up_to(static_cast<std::uint32_t>(P));

  long double product = 1;
  for (std::uint32_t p : primes) {
    product *= local_factor(p, n, ctx);
    if (product == 0) break;
  }

  const FundamentalSplit s = trace_split(n);
  long double dsum = 0;
  for (std::int64_t f : divisors(s.l)) {
    const std::int64_t v = s.l / f;
    const Factorization vf = factorize(v);
    if (!vf.factors.empty() && static_cast<std::int64_t>(vf.factors.back().prime) > P) continue;
    const std::int64_t D = s.d * f * f;
    const int w = context_weight(D, ctx);
    if (w == 0) continue;
    dsum += w * euler_product(D, P) / v;
  }
  return {static_cast<double>(product), static_cast<double>(dsum)};
}

double beta_truncated(std::int64_t n, std::int64_t P, const GroupContext& ctx, bool checked) {
  if (!checked) {
    if (n < 3) fail("beta_truncated: n must be >= 3, got " + std::to_string(n));
    if (P < ctx.largest_prime() || P < 2) fail("beta_truncated: prime bound below the context primes");
    long double product = 1;
    for (std::uint32_t p : PrimeSieve::shared(static_cast<std::uint32_t>(P)).primes_up_to(static_cast<std::uint32_t>(P))) {
      product *= local_factor(p, n, ctx);
      if (product == 0) break;
    }
    return static_cast<double>(product);
  }
  const TruncatedBeta b = beta_truncated_forms(n, P, ctx);
  const double scale = std::max(1.0, std::fabs(b.product));
  if (std::fabs(b.product - b.divisor_sum) > 1e-10 * scale) {
    throw Error(ErrorKind::Internal, "beta_truncated: product and divisor-sum forms disagree at n = " +
                                         std::to_string(n));
  }
  return b.product;
}

}  // namespace geodesic
