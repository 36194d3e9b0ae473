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

#include <cmath>

#include "doctest.h"
#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/lfunctions.hpp"
#include "geodesic/multiplicity.hpp"

using namespace geodesic;

namespace {

// a matrix of trace t in Gamma_0(Q) exists iff a^2 - t a + 1 = 0 (mod Q) for some a (take b = 1)
bool matrix_exists(std::int64_t t, std::int64_t Q) {
  for (std::int64_t a = 0; a < Q; ++a) {
    if (((a * a - t * a + 1) % Q + Q) % Q == 0) return true;
  }
  return Q == 1;
}

}  // namespace

TEST_CASE("trace_exists examples and matrix oracle") {
  CHECK(trace_exists(3, 1));
  CHECK_FALSE(trace_exists(3, 3));
  CHECK(trace_exists(4, 3));
  for (std::int64_t Q : {1, 3, 5, 7, 15, 21, 105}) {
    for (std::int64_t t = 3; t <= 1000; ++t) REQUIRE(trace_exists(t, Q) == matrix_exists(t, Q));
  }
}

TEST_CASE("local weights") {
  CHECK(local_weight(12, 3, LocalFlavor::Level) == 1);
  CHECK(local_weight(5, 3, LocalFlavor::Level) == 0);
  CHECK(local_weight(5, 3, LocalFlavor::Ramified) == 2);
}

TEST_CASE("beta examples") {
  const LStrategy exact = LStrategy::class_number();
  CHECK(beta(3, GroupContext::congruence(1), exact) == doctest::Approx(0.430409).epsilon(1e-6));
  CHECK(beta(6, GroupContext::congruence(1), exact) == doctest::Approx(0.934837).epsilon(1e-6));
  CHECK(beta(3, GroupContext::quaternion(15), exact) == doctest::Approx(0.860817).epsilon(1e-6));
  CHECK(beta(3, GroupContext::congruence(3), exact) == 0.0);
  CHECK_THROWS_AS(beta(-6, GroupContext::congruence(1), exact), Error);
}

TEST_CASE("conjugacy class counts") {
  CHECK(conjugacy_class_count(4, 1, 1) == 2);
  CHECK(conjugacy_class_count(3, 3, 1) == 0);
  CHECK(conjugacy_class_count(4, 3, 1) == 2);
  CHECK(beta_classcount(3, 1) == doctest::Approx(0.430409).epsilon(1e-6));
  CHECK(beta_classcount(4, 1) == doctest::Approx(0.760345).epsilon(1e-6));
  CHECK(beta_classcount(6, 1) == doctest::Approx(0.934837).epsilon(1e-6));
}

TEST_CASE("class-count and L-value paths agree") {
  for (std::int64_t Q : {1, 3, 5, 15}) {
    const GroupContext ctx = GroupContext::congruence(Q);
    for (std::int64_t t = 3; t <= 200; ++t) {
      REQUIRE(std::fabs(beta(t, ctx, LStrategy::class_number()) - beta_classcount(t, Q)) < 1e-8);
      REQUIRE(std::fabs(beta(t, ctx, LStrategy::log_sin()) - beta_classcount(t, Q)) < 1e-8);
    }
  }
}

TEST_CASE("beta vanishes exactly when no element has the trace") {
  for (std::int64_t Q : {1, 3, 5, 15, 21}) {
    const GroupContext ctx = GroupContext::congruence(Q);
    for (std::int64_t t = 3; t <= 1000; ++t) {
      const double b = beta(t, ctx, LStrategy::class_number());
      REQUIRE(b >= 0);
      REQUIRE((b == 0.0) == !trace_exists(t, Q));
    }
  }
}

TEST_CASE("indicator and local_factor examples") {
  CHECK(indicator(3, 1, 5, LocalFlavor::Generic) == 0);
  CHECK(indicator(2, 1, 6, LocalFlavor::Two) == 1);
  CHECK(indicator(3, 0, 4, LocalFlavor::Level) == 1);
  CHECK(local_factor(3, 4, GroupContext::congruence(3)) == 1.0);
  CHECK(local_factor(3, 3, GroupContext::congruence(3)) == 0.0);
  CHECK(local_factor(5, 3, GroupContext::congruence(1)) == 1.0);
}

TEST_CASE("local factors are nonnegative with the Euler term when no b >= 1 survives") {
  const GroupContext ctx = GroupContext::congruence(1);
  for (std::int64_t p : {2, 3, 5, 7, 11, 13}) {
    for (std::int64_t n = 3; n <= 2000; ++n) {
      const double v = local_factor(p, n, ctx);
      REQUIRE(v >= 0);
      if (p > 2 && max_b(p, n) == 0) {
        const double x = static_cast<double>(kronecker(n * n - 4, p));
        const double pp = static_cast<double>(p);
        REQUIRE(v == doctest::Approx(1 / (1 - x / pp)).epsilon(1e-14));
        REQUIRE(v >= pp / (pp + 1) - 1e-15);
        REQUIRE(v <= pp / (pp - 1) + 1e-15);
      }
    }
  }
}

TEST_CASE("beta_truncated examples and the factorization identity") {
  double euler = 1;
  for (std::int64_t p : {2, 3, 5, 7}) euler /= 1 - static_cast<double>(kronecker(5, p)) / static_cast<double>(p);
  CHECK(beta_truncated(3, 7, GroupContext::congruence(1)) == doctest::Approx(euler).epsilon(1e-13));
  CHECK(beta_truncated(3, 7, GroupContext::congruence(3)) == 0.0);
  const TruncatedBeta six = beta_truncated_forms(6, 3, GroupContext::congruence(1));
  CHECK(std::fabs(six.product - six.divisor_sum) < 1e-12);

  for (std::int64_t Q : {1, 3, 15}) {
    for (std::int64_t P : {7, 11, 13}) {
      for (std::int64_t n = 3; n <= 500; ++n) {
        const TruncatedBeta tb = beta_truncated_forms(n, P, GroupContext::congruence(Q));
        REQUIRE(std::fabs(tb.product - tb.divisor_sum) < 1e-10);
      }
    }
  }
  CHECK_THROWS_AS(beta_truncated(10, 3, GroupContext::congruence(15)), Error);
}

TEST_CASE("group contexts") {
  CHECK(GroupContext::congruence(15).primes == std::vector<std::int64_t>{3, 5});
  CHECK(GroupContext::congruence(15).flavor(3) == LocalFlavor::Level);
  CHECK(GroupContext::congruence(15).flavor(2) == LocalFlavor::Two);
  CHECK(GroupContext::quaternion(15).flavor(5) == LocalFlavor::Ramified);
  CHECK(GroupContext::quaternion(15).flavor(7) == LocalFlavor::Generic);
  CHECK(GroupContext::quaternion(21).tag() == "quaternion:21");
  CHECK_THROWS_AS(GroupContext::quaternion(6), Error);   // even dB
  CHECK_THROWS_AS(GroupContext::quaternion(105), Error); // odd number of ramified primes
  CHECK_THROWS_AS(GroupContext::congruence(9), Error);
  CHECK_THROWS_AS(GroupContext::congruence(2), Error);
}
