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
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/fourier.hpp"
#include "geodesic/meansquare.hpp"

using namespace geodesic;

namespace {

std::filesystem::path scratch(const std::string& name) {
  const auto p = std::filesystem::temp_directory_path() / ("geodesic_ms_" + name);
  std::filesystem::remove(p);
  return p;
}

bool same(const std::vector<Checkpoint>& a, const std::vector<Checkpoint>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].N != b[i].N || a[i].mean != b[i].mean || a[i].mean_square != b[i].mean_square) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("C1") {
  const EulerProductResult r = c1(100000, 1e-5);
  CHECK(std::fabs(r.value - 1.328) < 1e-3);
  CHECK(r.tail_bound < 1e-5);
  const EulerProductResult big = c1(1000000, 1e-5);
  CHECK(big.value > r.value);
  CHECK(big.value - r.value < r.tail_bound);
  const EulerProductResult f = c1(1000, 1e-2, true);
  REQUIRE(!f.per_prime_factors.empty());
  CHECK(f.per_prime_factors[0].first == 2);
  CHECK(f.per_prime_factors[0].second == 1015.0 / 864.0);
  CHECK_THROWS_AS(c1(1000, 1e-6), Error);
  try {
    c1(1000, 1e-6);
  } catch (const Error& e) {
    CHECK(e.kind() == ErrorKind::Tolerance);
  }
}

TEST_CASE("Euler tail bounds") {
  // M_p - 1 < 1/p^2 for every odd prime, exactly
  for (std::uint32_t p : PrimeSieve::shared(20000).primes_up_to(20000)) {
    if (p == 2) continue;
    const mpq_class M = local_euler_factor_exact(p, GroupContext::congruence(1));
    REQUIRE(M - 1 < mpq_class(1, static_cast<unsigned long>(p) * p));
  }
  // the prime tail bound dominates the sum it replaces (plus 1/X past the sieve)
  const std::uint32_t X = 10000000;
  for (std::int64_t P : {1000, 10000, 100000}) {
    long double s = 1.0L / X;
    for (std::uint32_t p : PrimeSieve::shared(X).primes_up_to(X)) {
      if (p > P) s += 1.0L / (static_cast<long double>(p) * p);
    }
    CHECK(static_cast<double>(s) < prime_square_tail(P));
  }
}

TEST_CASE("kappa examples and the two evaluation paths") {
  const double C1 = c1().value;
  CHECK(kappa(GroupContext::congruence(1)).value == doctest::Approx(C1).epsilon(1e-15));
  CHECK(kappa(GroupContext::congruence(3)).value == doctest::Approx(C1 * 16 / 9).epsilon(1e-13));
  CHECK(kappa(GroupContext::quaternion(15)).value ==
        doctest::Approx(C1 * (52.0 / 45) * (496.0 / 355)).epsilon(1e-13));
  CHECK(kappa(GroupContext::quaternion(15)).value == doctest::Approx(2.144).epsilon(1e-3));
  for (std::int64_t Q : {1, 3, 5, 15, 21, 105}) {
    const EulerProductResult k = kappa(GroupContext::congruence(Q));
    CHECK(k.consistent);
    CHECK(std::fabs(k.value - k.cross_check) <= 1e-9 * k.value);
  }
  for (std::int64_t dB : {15, 21, 35}) {
    const EulerProductResult k = kappa(GroupContext::quaternion(dB));
    CHECK(std::fabs(k.value - k.cross_check) <= 1e-9 * k.value);
  }
  CHECK(kappa_correction(3, GroupContext::congruence(3)) == doctest::Approx(16.0 / 9).epsilon(1e-15));
  CHECK_THROWS_AS(kappa(GroupContext::congruence(1009 * 3), 1000), Error);
}

TEST_CASE("Parseval partial sums") {
  CHECK(parseval_partial(GroupContext::congruence(1), 1) == 1.0);
  // b = 2 adds A(2) = 1/9, b = 3 adds two phases of modulus 1/2
  CHECK(parseval_partial(GroupContext::congruence(3), 3) == doctest::Approx(1 + 1.0 / 9 + 0.5).epsilon(1e-12));
  for (const GroupContext& ctx : {GroupContext::congruence(1), GroupContext::congruence(3),
                                  GroupContext::congruence(5), GroupContext::quaternion(15)}) {
    const std::vector<double> s = parseval_series(ctx, 400);
    for (std::size_t i = 1; i < s.size(); ++i) REQUIRE(s[i] >= s[i - 1]);
    CHECK(s.back() <= kappa(ctx).value + 1e-6);
    CHECK(s.back() > 0.99 * kappa(ctx).value);
  }
  CHECK_THROWS_AS(parseval_partial(GroupContext::congruence(1), 10001), Error);
}

TEST_CASE("truncation seminorm") {
  const GroupContext c1 = GroupContext::congruence(1);
  const double s2_small = seminorm_estimate(c1, 10, 2, 1000);
  const double s2_big = seminorm_estimate(c1, 1000, 2, 1000);
  CHECK(s2_big < s2_small);
  const double s1 = seminorm_estimate(c1, 1000, 1, 1000);
  CHECK(s1 <= s2_big);
  CHECK(s1 > 0);
  // P = 10^4 covers every prime dividing the conductors l <= 10^3 in range
  CHECK(seminorm_estimate(c1, 10000, 1, 300) > 0);
  const double s100 = seminorm_estimate(c1, 100, 1, 1000);
  CHECK(s1 < s100);
}

TEST_CASE("empirical sweep basics") {
  const EmpiricalSeries s = empirical(GroupContext::congruence(1), 1000, 250, LStrategy::class_number());
  REQUIRE(s.checkpoints.size() == 4);
  CHECK(s.checkpoints.back().N == 1000);
  CHECK(std::fabs(s.checkpoints.back().mean - 1) < 0.15);
  CHECK_FALSE(s.partial);

  // mean is the plain average over 2 < t <= N, zeros included
  const GroupContext c3 = GroupContext::congruence(3);
  const EmpiricalSeries e3 = empirical(c3, 1000, 1000, LStrategy::class_number());
  long double sum = 0;
  int zeros = 0;
  for (std::int64_t t = 3; t <= 1000; ++t) {
    const double b = beta(t, c3, LStrategy::class_number());
    if (!trace_exists(t, 3)) {
      REQUIRE(b == 0.0);
      ++zeros;
    }
    sum += b;
  }
  CHECK(zeros > 0);
  CHECK(e3.checkpoints.back().mean == doctest::Approx(static_cast<double>(sum / 998)).epsilon(1e-13));
}

TEST_CASE("sweeps are bit-identical across worker counts") {
  EmpiricalOptions one, many;
  one.chunk = many.chunk = 97;
  many.workers = 4;
  const GroupContext ctx = GroupContext::congruence(15);
  const EmpiricalSeries a = empirical(ctx, 3000, 700, LStrategy::smoothed(500, 5000), one);
  const EmpiricalSeries b = empirical(ctx, 3000, 700, LStrategy::smoothed(500, 5000), many);
  CHECK(same(a.checkpoints, b.checkpoints));
  CHECK(a.checkpoints.back().N == 3000);
}

TEST_CASE("checkpoint CSV and resume") {
  const GroupContext ctx = GroupContext::congruence(1);
  const LStrategy s = LStrategy::class_number();
  const auto file = scratch("resume.csv");
  EmpiricalOptions o;
  o.checkpoint_file = file;
  const EmpiricalSeries first = empirical(ctx, 1500, 500, s, o);
  REQUIRE(first.checkpoints.size() == 3);

  std::ifstream in(file);
  std::string header;
  std::getline(in, header);
  CHECK(header == "N,mean,mean_square,strategy_tag,context_tag,wall_seconds");

  // without resume an existing file is refused
  CHECK_THROWS_AS(empirical(ctx, 3000, 500, s, o), Error);

  o.resume = true;
  const EmpiricalSeries resumed = empirical(ctx, 3000, 500, s, o);
  CHECK(resumed.resumed_from == 1500);
  const EmpiricalSeries fresh = empirical(ctx, 3000, 500, s);
  CHECK(same(resumed.checkpoints, fresh.checkpoints));

  const CheckpointFile cf = read_checkpoints(file);
  CHECK(cf.rows.size() == 6);
  CHECK(cf.context_tag == "level:1");
  CHECK(cf.strategy_tag == "classnumber");
  CHECK(same(cf.rows, fresh.checkpoints));

  // a different strategy cannot continue this file
  CHECK_THROWS_AS(empirical(ctx, 4000, 500, LStrategy::log_sin(), o), Error);
  std::filesystem::remove(file);
}

TEST_CASE("budget overrun returns a partial series") {
  EmpiricalOptions o;
  o.budget_seconds = 1e-9;
  const EmpiricalSeries s = empirical(GroupContext::congruence(1), 5000, 100, LStrategy::class_number(), o);
  CHECK(s.partial);
  CHECK(s.checkpoints.size() < 50);
}

TEST_CASE("exact mode changes the tag and the small-trace values") {
  EmpiricalOptions o;
  o.exact_below = 2000;
  const EmpiricalSeries a = empirical(GroupContext::congruence(1), 1000, 1000, LStrategy::smoothed(), o);
  const EmpiricalSeries b = empirical(GroupContext::congruence(1), 1000, 1000, LStrategy::class_number());
  CHECK(a.strategy_tag.find("exact") != std::string::npos);
  CHECK(a.checkpoints.back().mean == b.checkpoints.back().mean);
}
