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

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "doctest.h"
#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/lfunctions.hpp"
#include "geodesic/quadratic.hpp"

using namespace geodesic;

namespace {

std::vector<std::int64_t> nonsquare_discriminants(std::int64_t lo, std::int64_t hi) {
  std::vector<std::int64_t> out;
  for (std::int64_t D = lo; D <= hi; ++D) {
    if (is_discriminant(D) && !is_square(D)) out.push_back(D);
  }
  return out;
}

// smallest y >= 1 with D y^2 + 4 a square, or 0 past the cap
std::int64_t pell_y_search(std::int64_t D, std::int64_t cap) {
  for (std::int64_t y = 1; y <= cap; ++y) {
    const __int128 v = static_cast<__int128>(D) * y * y + 4;
    if (v > INT64_MAX) return 0;
    if (is_square(static_cast<std::int64_t>(v))) return y;
  }
  return 0;
}

// first k with f | y_k, powers in exact arithmetic
std::int64_t index_by_powers(std::int64_t d, std::int64_t f) {
  const PellUnit e = proper_fundamental_unit(d);
  mpz_class x = e.x, y = e.y;
  for (std::int64_t k = 1; k < 100000; ++k) {
    if (y % f == 0) return k;
    const mpz_class nx = (e.x * x + d * e.y * y) / 2;
    const mpz_class ny = (e.x * y + e.y * x) / 2;
    x = nx;
    y = ny;
  }
  return -1;
}

}  // namespace

TEST_CASE("unit and regulator examples") {
  const PellUnit u5 = proper_fundamental_unit(5);
  CHECK(u5.x == 3);
  CHECK(u5.y == 1);
  const PellUnit u8 = proper_fundamental_unit(8);
  CHECK(u8.x == 6);
  CHECK(u8.y == 2);
  const PellUnit u12 = proper_fundamental_unit(12);
  CHECK(u12.x == 4);
  CHECK(u12.y == 1);
  CHECK(unit_index(5, 1) == 1);
  CHECK(unit_index(8, 2) == 1);
  CHECK(unit_index(5, 2) == 3);
  CHECK(regulator(5).log_epsilon == doctest::Approx(0.962424).epsilon(1e-6));
  CHECK(regulator(12).log_epsilon == doctest::Approx(1.316958).epsilon(1e-6));
  CHECK(regulator(32).log_epsilon == doctest::Approx(1.762747).epsilon(1e-6));
  CHECK(regulator(5).log_epsilon == doctest::Approx(std::log((3 + std::sqrt(5.0)) / 2)).epsilon(1e-14));
}

TEST_CASE("class number examples") {
  CHECK(narrow_class_number(5) == 1);
  CHECK(narrow_class_number(12) == 2);
  CHECK(narrow_class_number(20) == 1);
  CHECK(class_number_L(5) == doctest::Approx(0.430409).epsilon(1e-6));
  CHECK(class_number_L(12) == doctest::Approx(0.760345).epsilon(1e-6));
  CHECK(class_number_L(32) == doctest::Approx(0.623225).epsilon(1e-6));
}

TEST_CASE("rejects bad discriminants") {
  CHECK_THROWS_AS(narrow_class_number(7), Error);
  CHECK_THROWS_AS(narrow_class_number(16), Error);
  CHECK_THROWS_AS(regulator(-8), Error);
  CHECK_THROWS_AS(proper_fundamental_unit(20), Error);
  CHECK_THROWS_AS(unit_index(5, 0), Error);
}

TEST_CASE("continued-fraction unit matches exhaustive y search") {
  int compared = 0;
  for (std::int64_t D : nonsquare_discriminants(5, 1500)) {
    const PellUnit u = order_unit(D);
    REQUIRE(u.x * u.x - D * u.y * u.y == 4);
    REQUIRE(u.y > 0);
    const std::int64_t y = pell_y_search(D, 200000);
    if (y == 0) {
      REQUIRE(u.y > 200000);
      continue;
    }
    REQUIRE(u.y == y);
    ++compared;
  }
  CHECK(compared >= 450);
}

TEST_CASE("unit index against powers of the fundamental unit") {
  for (std::int64_t d = 5; d < 500; ++d) {
    if (!is_fundamental_discriminant(d)) continue;
    for (std::int64_t f = 1; f <= 12; ++f) REQUIRE(unit_index(d, f) == index_by_powers(d, f));
  }
}

TEST_CASE("order relation h(d f^2) [index] = h(d) f prod (1 - chi_d(p)/p)") {
  for (std::int64_t d = 5; d < 500; ++d) {
    if (!is_fundamental_discriminant(d)) continue;
    const std::int64_t hd = narrow_class_number(d);
    for (std::int64_t f = 2; f <= 6; ++f) {
      std::int64_t rhs = hd;
      for (const auto& pp : factorize(f).factors) {
        const auto p = static_cast<std::int64_t>(pp.prime);
        for (int e = 1; e < pp.exponent; ++e) rhs *= p;
        rhs *= p - kronecker(d, p);
      }
      REQUIRE(narrow_class_number(d * f * f) * unit_index(d, f) == rhs);
    }
  }
}

TEST_CASE("reduced forms and the rho cycle") {
  std::mt19937 rng(7);
  for (std::int64_t D : nonsquare_discriminants(5, 3000)) {
    std::vector<QuadraticForm> forms = reduced_forms(D);
    for (const auto& q : forms) {
      REQUIRE(static_cast<__int128>(q.b) * q.b - 4 * static_cast<__int128>(q.a) * q.c == D);
      REQUIRE(is_reduced(rho(q, D), D));
    }
    // cycle count from a shuffled seed order
    std::shuffle(forms.begin(), forms.end(), rng);
    std::map<QuadraticForm, int> cycle;
    int cycles = 0;
    for (const auto& q : forms) {
      if (cycle.count(q)) continue;
      ++cycles;
      QuadraticForm cur = q;
      do {
        cycle[cur] = cycles;
        cur = rho(cur, D);
      } while (cur != q);
    }
    REQUIRE(cycles == narrow_class_number(D));
  }
}

TEST_CASE("reduced forms match a brute-force enumeration") {
  for (std::int64_t D : nonsquare_discriminants(5, 400)) {
    std::vector<QuadraticForm> brute;
    const std::int64_t s = isqrt(D);
    for (std::int64_t b = 1; b <= s; ++b) {
      for (std::int64_t a = -D; a <= D; ++a) {
        if (a == 0 || (b * b - D) % (4 * a) != 0) continue;
        const QuadraticForm q{a, b, (b * b - D) / (4 * a)};
        if (std::gcd(std::gcd(std::abs(q.a), q.b), std::abs(q.c)) != 1) continue;
        // sqrt(D) - b < 2|a| < sqrt(D) + b in floating point, far from ties at this size
        const double r = std::sqrt(static_cast<double>(D));
        const double a2 = 2.0 * std::abs(static_cast<double>(a));
        if (r - b < a2 && a2 < r + b) brute.push_back(q);
      }
    }
    std::vector<QuadraticForm> got = reduced_forms(D);
    std::sort(brute.begin(), brute.end());
    std::sort(got.begin(), got.end());
    REQUIRE(got == brute);
  }
}

TEST_CASE("class number formula agrees with the log-sin evaluation") {
  double worst = 0;
  for (std::int64_t d = 5; d < 10000; ++d) {
    if (!is_fundamental_discriminant(d)) continue;
    worst = std::max(worst, std::fabs(class_number_L(d) - l_one_log_sin(d)));
  }
  CHECK(worst < 1e-8);
}

TEST_CASE("accumulated regulator equals the materialized one") {
  for (std::int64_t D : nonsquare_discriminants(5, 5000)) {
    const double a = regulator(D).log_epsilon;
    const double b = regulator(D, RegulatorOptions{0}).log_epsilon;
    REQUIRE(std::fabs(a - b) <= 1e-12 * a);
  }
  // 10^10-sized discriminants stay cheap on the accumulated path
  const double r = regulator(10000000021LL * 4 + 1).log_epsilon;
  CHECK(std::isfinite(r));
  CHECK(r > 0);
}

TEST_CASE("norm of trace") {
  CHECK(norm_of_trace(3).norm == doctest::Approx(6.854102).epsilon(1e-6));
  CHECK(norm_of_trace(-3).norm == norm_of_trace(3).norm);
  CHECK(norm_of_trace(4).norm == doctest::Approx(13.928203).epsilon(1e-6));
  for (std::int64_t t = 3; t <= 500; ++t) {
    const double N = norm_of_trace(t).norm;
    const double lhs = std::sqrt(N) - 1 / std::sqrt(N);
    const double rhs = std::sqrt(static_cast<double>(t * t - 4));
    REQUIRE(std::fabs(lhs - rhs) <= 1e-10 * rhs);
  }
  CHECK_THROWS_AS(norm_of_trace(2), Error);
}
