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

#include <filesystem>
#include <fstream>
#include <random>

#include "doctest.h"
#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"

using namespace geodesic;

namespace {

bool slow_prime(std::int64_t n) {
  if (n < 2) return false;
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

std::int64_t slow_powmod(std::int64_t b, std::int64_t e, std::int64_t m) {
  __int128 r = 1, x = ((b % m) + m) % m;
  while (e) {
    if (e & 1) r = r * x % m;
    x = x * x % m;
    e >>= 1;
  }
  return static_cast<std::int64_t>(r);
}

bool slow_squarefree(std::int64_t n) {
  for (std::int64_t d = 2; d * d <= n; ++d) {
    if (n % (d * d) == 0) return false;
  }
  return true;
}

// fundamental discriminant straight from the definition
bool slow_fundamental(std::int64_t d) {
  if (d == 1) return false;
  const std::int64_t a = d < 0 ? -d : d;
  if (((d % 4) + 4) % 4 == 1) return slow_squarefree(a);
  if (d % 4 != 0) return false;
  const std::int64_t s = d / 4;
  const std::int64_t m = ((s % 4) + 4) % 4;
  return (m == 2 || m == 3) && slow_squarefree(s < 0 ? -s : s);
}

}  // namespace

TEST_CASE("kronecker examples") {
  CHECK(kronecker(5, 4) == 1);
  CHECK(kronecker(5, 2) == -1);
  CHECK(kronecker(12, 3) == 0);
  CHECK(kronecker(1, 0) == 1);
  CHECK(kronecker(5, 0) == 0);
  CHECK(kronecker(5, -1) == 1);
  CHECK(kronecker(-3, -1) == -1);
}

TEST_CASE("kronecker is completely multiplicative in n") {
  for (std::int64_t D : {-23, -4, -3, 5, 8, 12, 13, 21, 24, 28, 45, 60, 96, 385}) {
    for (std::int64_t n1 = -20; n1 <= 40; ++n1) {
      for (std::int64_t n2 = 1; n2 <= 40; ++n2) {
        REQUIRE(kronecker(D, n1 * n2) == kronecker(D, n1) * kronecker(D, n2));
      }
    }
  }
}

TEST_CASE("kronecker matches the Euler criterion at odd primes up to 1000") {
  for (std::int64_t p = 3; p <= 1000; p += 2) {
    if (!slow_prime(p)) continue;
    for (std::int64_t D = -200; D <= 600; ++D) {
      if (D % p == 0) continue;
      const std::int64_t e = slow_powmod(D, (p - 1) / 2, p);
      const int expect = e == 1 ? 1 : -1;
      REQUIRE(e == (expect == 1 ? 1 : p - 1));
      REQUIRE(kronecker(D, p) == expect);
    }
  }
}

TEST_CASE("factorize examples") {
  CHECK(factorize(1).factors.empty());
  const Factorization f45 = factorize(45);
  REQUIRE(f45.factors.size() == 2);
  CHECK(f45.factors[0] == PrimePower{3, 2});
  CHECK(f45.factors[1] == PrimePower{5, 1});
  const std::int64_t m61 = (std::int64_t{1} << 61) - 1;
  const Factorization fm = factorize(m61);
  REQUIRE(fm.factors.size() == 1);
  CHECK(fm.factors[0] == PrimePower{static_cast<std::uint64_t>(m61), 1});
  CHECK(is_prime(static_cast<std::uint64_t>(m61)));
  CHECK_THROWS_AS(factorize(0), Error);
  CHECK_THROWS_AS(factorize(-7), Error);
}

TEST_CASE("factorize roundtrip on random 63-bit integers") {
  std::mt19937_64 rng(20260101);
  for (int i = 0; i < 10000; ++i) {
    const std::int64_t n = static_cast<std::int64_t>(rng() >> 1) | 1;
    const Factorization f = factorize(n);
    REQUIRE(f.recompose() == static_cast<std::uint64_t>(n));
    for (std::size_t k = 0; k < f.factors.size(); ++k) {
      REQUIRE(is_prime(f.factors[k].prime));
      if (k) REQUIRE(f.factors[k - 1].prime < f.factors[k].prime);
    }
  }
}

TEST_CASE("factorization does not depend on the splitting seed") {
  // products of two primes above the trial-division bound
  const std::int64_t p = 1000003, q = 2147483647, r = 998244353;
  for (std::int64_t n : {p * q, p * r, q * 3 * 5, (std::int64_t)r * r}) {
    const Factorization a = factorize(n, 1);
    const Factorization b = factorize(n, 0xdeadbeef);
    CHECK(a.factors == b.factors);
  }
}

TEST_CASE("is_prime agrees with trial division and rejects strong pseudoprimes") {
  for (std::int64_t n = 0; n <= 20000; ++n) REQUIRE(is_prime(n) == slow_prime(n));
  for (std::uint64_t n : {2047ULL, 3215031751ULL, 3825123056546413051ULL, 341550071728321ULL}) {
    CHECK(is_prime(n) == false);
  }
  CHECK(is_prime(18446744073709551557ULL));
}

TEST_CASE("isqrt and is_square at the edges") {
  CHECK(isqrt(0) == 0);
  CHECK(isqrt(INT64_MAX) == 3037000499);
  CHECK(is_square(3037000499LL * 3037000499LL));
  CHECK_FALSE(is_square(3037000499LL * 3037000499LL - 1));
}

TEST_CASE("fundamental_split examples") {
  auto check = [](std::int64_t m, std::int64_t d, std::int64_t l) {
    const FundamentalSplit s = fundamental_split(m);
    CHECK(s.d == d);
    CHECK(s.l == l);
  };
  check(5, 5, 1);
  check(45, 5, 3);
  check(32, 8, 2);
}

TEST_CASE("fundamental_split of t^2 - 4") {
  for (std::int64_t t = 3; t <= 100000; ++t) {
    const std::int64_t m = t * t - 4;
    const FundamentalSplit s = trace_split(t);
    REQUIRE(s.d * s.l * s.l == m);
    REQUIRE(is_fundamental_discriminant(s.d));
    if (t <= 3000) REQUIRE(slow_fundamental(s.d));
  }
}

TEST_CASE("discriminant predicates against the definitions") {
  CHECK(is_discriminant(12));
  CHECK(is_discriminant(5));
  CHECK_FALSE(is_discriminant(7));
  for (std::int64_t d = -3000; d <= 3000; ++d) {
    REQUIRE(is_discriminant(d) == (((d % 4) + 4) % 4 <= 1));
    REQUIRE(is_fundamental_discriminant(d) == slow_fundamental(d));
  }
}

TEST_CASE("divisors") {
  CHECK(divisors(1) == std::vector<std::int64_t>{1});
  CHECK(divisors(12) == std::vector<std::int64_t>{1, 2, 3, 4, 6, 12});
  CHECK(divisors(45) == std::vector<std::int64_t>{1, 3, 5, 9, 15, 45});
  for (std::int64_t n = 1; n <= 2000; ++n) {
    std::vector<std::int64_t> brute;
    for (std::int64_t d = 1; d <= n; ++d) {
      if (n % d == 0) brute.push_back(d);
    }
    REQUIRE(divisors(n) == brute);
  }
}

TEST_CASE("prime sieve") {
  const PrimeSieve s(100000);
  std::size_t count = 0;
  for (std::uint32_t n = 2; n <= 100000; ++n) {
    if (slow_prime(n)) ++count;
    if (n < 5000) {
      std::uint32_t d = 2;
      while (n % d) ++d;
      REQUIRE(s.smallest_factor(n) == d);
    }
  }
  CHECK(s.primes_up_to(100000).size() == count);
  CHECK(s.primes_up_to(10).size() == 4);
}

TEST_CASE("factor cache persists and rejects bad rows") {
  const auto dir = std::filesystem::temp_directory_path() / "geodesic_test_cache";
  std::filesystem::create_directories(dir);
  const auto file = dir / "factors.txt";
  {
    FactorCache c;
    c.get(360);
    c.get(1000003LL * 1000033LL);
    c.save(file);
  }
  {
    std::ofstream out(file, std::ios::app);
    out << "100 2^2 5^1\n";  // does not recompose
  }
  FactorCache c;
  c.load(file);
  CHECK(c.size() == 2);
  CHECK(c.get(360).recompose() == 360);
  std::filesystem::remove_all(dir);
}
