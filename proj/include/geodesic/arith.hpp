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
 * Exact 64-bit integer arithmetic: Kronecker symbols, factorization,
 * discriminant bookkeeping and a small-prime sieve.
 *
 * Everything here is allocation-light and safe to call concurrently.
 * Arbitrary precision lives in quadratic.hpp only.
 */

#include <cstdint>
#include <filesystem>
#include <map>
#include <shared_mutex>
#include <span>
#include <string>
#include <vector>

namespace geodesic {

inline constexpr std::int64_t kMaxInput = INT64_MAX;
inline constexpr std::uint64_t kDefaultSeed = 0x9e3779b97f4a7c15ULL;

/// Process-wide seed for the randomized splitting walk (default kDefaultSeed).
std::uint64_t global_seed();
void set_global_seed(std::uint64_t seed);

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m);
std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m);
std::int64_t gcd(std::int64_t a, std::int64_t b);
std::int64_t isqrt(std::int64_t n);
bool is_square(std::int64_t n);

/// Deterministic Miller-Rabin for all 64-bit inputs.
bool is_prime(std::uint64_t n);

/// Jacobi symbol (a/n) for odd n > 0.
int jacobi(std::int64_t a, std::int64_t n);

/// Kronecker symbol (D/n), total on the integers.
/// (D/0) is 1 for |D| = 1 and 0 otherwise; (D/-1) is the sign of D.
int kronecker(std::int64_t D, std::int64_t n);

struct PrimePower {
  std::uint64_t prime;
  int exponent;
  bool operator==(const PrimePower&) const = default;
};

struct Factorization {
  std::uint64_t value = 1;
  std::vector<PrimePower> factors;  // ascending by prime

  std::uint64_t recompose() const;
  bool squarefree() const;
  bool divisible_by(std::uint64_t p) const;
  int order(std::uint64_t p) const;
  std::vector<std::uint64_t> primes() const;
};

/// Trial division by primes up to 10^6, then Pollard-Brent on the cofactor.
/// The seed only steers the splitting walk; the result never depends on it.
Factorization factorize(std::int64_t n, std::uint64_t seed = global_seed());

/// Product of two factorizations (e.g. (t-2)(t+2) without forming t^2-4).
Factorization merge(const Factorization& a, const Factorization& b);

std::vector<std::int64_t> divisors(std::int64_t n);
std::vector<std::int64_t> divisors(const Factorization& f);

bool is_discriminant(std::int64_t D);
bool is_fundamental_discriminant(std::int64_t D);

/// m = d * l^2 with d a fundamental discriminant.
struct FundamentalSplit {
  std::int64_t m;
  std::int64_t d;
  std::int64_t l;
};

FundamentalSplit fundamental_split(std::int64_t m);
FundamentalSplit fundamental_split(const Factorization& m);

/// Split of t^2 - 4 computed from the factorizations of t - 2 and t + 2.
FundamentalSplit trace_split(std::int64_t t);

/// Primes up to a bound with smallest-prime-factor lookup.
class PrimeSieve {
 public:
  explicit PrimeSieve(std::uint32_t bound);

  std::uint32_t bound() const { return bound_; }
  std::span<const std::uint32_t> primes() const { return primes_; }
  std::span<const std::uint32_t> primes_up_to(std::uint32_t x) const;
  std::uint32_t smallest_factor(std::uint32_t n) const { return spf_[n]; }

  /// Shared immutable sieve covering at least `bound`.
  static const PrimeSieve& shared(std::uint32_t bound);

 private:
  std::uint32_t bound_;
  std::vector<std::uint32_t> spf_;
  std::vector<std::uint32_t> primes_;
};

/// Memo for factorize(), safe under concurrent readers and writers.
/// Optionally persisted as text, one "n p^e p^e ..." per line.
class FactorCache {
 public:
  Factorization get(std::int64_t n, std::uint64_t seed = global_seed());
  std::size_t size() const;
  void load(const std::filesystem::path& file);
  void save(const std::filesystem::path& file) const;

 private:
  mutable std::shared_mutex mu_;
  std::map<std::int64_t, Factorization> entries_;
};

std::string to_string(const Factorization& f);

}  // namespace geodesic
