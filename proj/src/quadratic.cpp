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

#include "geodesic/quadratic.hpp"

#include <cmath>
#include <map>
#include <numeric>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"

namespace geodesic {

namespace {

void check_order_discriminant(std::int64_t D, const char* who) {
  if (D <= 0) fail(std::string(who) + ": discriminant must be positive");
  if (!is_discriminant(D)) fail(std::string(who) + ": " + std::to_string(D) + " is not 0 or 1 mod 4");
  if (is_square(D)) fail(std::string(who) + ": " + std::to_string(D) + " is a perfect square");
}

std::int64_t start_b(std::int64_t D) {
  const std::int64_t s = isqrt(D);
  return ((s - D) % 2 == 0) ? s : s - 1;
}

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t mod_pos(__int128 a, std::int64_t m) {
  __int128 r = a % m;
  if (r < 0) r += m;
  return static_cast<std::int64_t>(r);
}

// Number of partial quotients spanning a norm +1 unit.
std::size_t unit_length(const UnitPeriod& p) {
  return p.odd() ? 2 * p.partial_quotients.size() : p.partial_quotients.size();
}

PellUnit unit_from_period(const UnitPeriod& period) {
  const std::size_t K = unit_length(period);
  const auto& a = period.partial_quotients;
  mpz_class q_prev2 = 1, q_prev1 = 0;  // q_{-2}, q_{-1}
  for (std::size_t i = 0; i < K; ++i) {
    mpz_class q = a[i % a.size()] * q_prev1 + q_prev2;
    q_prev2 = q_prev1;
    q_prev1 = q;
  }
  PellUnit u{period.D, 2 * q_prev2 + period.b * q_prev1, q_prev1};
  return u;
}

}  // namespace

OrderDiscriminant OrderDiscriminant::from(std::int64_t D) {
  check_order_discriminant(D, "order discriminant");
  const FundamentalSplit s = fundamental_split(D);
  return {s.d, s.l, D};
}

OrderDiscriminant OrderDiscriminant::of(std::int64_t d, std::int64_t f) {
  if (!is_fundamental_discriminant(d) || d <= 0) {
    fail("order discriminant: " + std::to_string(d) + " is not a positive fundamental discriminant");
  }
  if (f < 1) fail("order discriminant: conductor must be positive");
  const __int128 D = static_cast<__int128>(d) * f * f;
  if (D > INT64_MAX) fail("order discriminant: d f^2 exceeds 2^63-1");
  return {d, f, static_cast<std::int64_t>(D)};
}

double PellUnit::log() const {
  // ln((x + y sqrt D) / 2) from mantissa/exponent pairs, valid for any size.
  long ex = 0, ey = 0;
  const double mx = mpz_get_d_2exp(&ex, x.get_mpz_t());
  const double my = mpz_get_d_2exp(&ey, y.get_mpz_t());
  const long double scaled =
      static_cast<long double>(mx) +
      std::ldexp(static_cast<long double>(my), static_cast<int>(ey - ex)) *
          std::sqrt(static_cast<long double>(D));
  return static_cast<double>(std::log(scaled) + (ex - 1) * std::log(2.0L));
}

UnitPeriod unit_period(std::int64_t D) {
  check_order_discriminant(D, "unit_period");
  if (D > (INT64_MAX >> 2)) fail("unit_period: discriminant too large");
  const std::int64_t s = isqrt(D);
  const long double root = std::sqrt(static_cast<long double>(D));
  UnitPeriod out{D, start_b(D), {}, 0.0};
  std::int64_t P = out.b, Q = 2;
  long double sum = 0, comp = 0;  // Neumaier accumulation
  do {
    const std::int64_t a = (P + s) / Q;
    out.partial_quotients.push_back(a);
    const long double term = std::log((P + root) / Q);
    const long double t = sum + term;
    comp += (std::fabs(sum) >= std::fabs(term)) ? (sum - t) + term : (term - t) + sum;
    sum = t;
    const std::int64_t P1 = a * Q - P;
    const std::int64_t Q1 = static_cast<std::int64_t>((static_cast<__int128>(D) - static_cast<__int128>(P1) * P1) / Q);
    P = P1;
    Q = Q1;
  } while (!(P == out.b && Q == 2));
  long double total = sum + comp;
  if (out.odd()) total *= 2;
  out.log_unit = static_cast<double>(total);
  return out;
}

PellUnit order_unit(std::int64_t D) {
  return unit_from_period(unit_period(D));
}

PellUnit proper_fundamental_unit(std::int64_t d) {
  if (d <= 0 || !is_fundamental_discriminant(d)) {
    fail("proper_fundamental_unit: " + std::to_string(d) + " is not a positive fundamental discriminant");
  }
  return order_unit(d);
}

std::pair<std::int64_t, std::int64_t> unit_residues(std::int64_t D, std::int64_t modulus) {
  if (modulus < 1) fail("unit_residues: modulus must be positive");
  const UnitPeriod period = unit_period(D);
  const std::size_t K = unit_length(period);
  const auto& a = period.partial_quotients;
  std::int64_t q2 = 1 % modulus, q1 = 0;
  for (std::size_t i = 0; i < K; ++i) {
    const std::int64_t q = mod_pos(static_cast<__int128>(a[i % a.size()] % modulus) * q1 + q2, modulus);
    q2 = q1;
    q1 = q;
  }
  const std::int64_t x = mod_pos(2 * static_cast<__int128>(q2) + static_cast<__int128>(period.b % modulus) * q1, modulus);
  return {x, q1};
}

std::int64_t unit_index(std::int64_t d, std::int64_t f) {
  if (d <= 0 || !is_fundamental_discriminant(d)) {
    fail("unit_index: " + std::to_string(d) + " is not a positive fundamental discriminant");
  }
  if (f < 1) fail("unit_index: conductor must be positive");
  if (f == 1) return 1;
  if (f > (INT64_MAX >> 3)) fail("unit_index: conductor too large");

  const auto [x, y] = unit_residues(d, 2 * f);
  // eps = u + v w in Z[w], w = (d + sqrt d)/2; x - d y is even.
  const std::int64_t diff = mod_pos(static_cast<__int128>(x) - static_cast<__int128>(d % (2 * f)) * y, 2 * f);
  const std::int64_t u1 = (diff / 2) % f;
  const std::int64_t v1 = y % f;
  const std::int64_t nrm = mod_pos((static_cast<__int128>(d) * d - d) / 4, f);  // w^2 = d w - nrm
  const std::int64_t dm = mod_pos(d, f);

  std::int64_t u = u1, v = v1;
  const std::int64_t limit = 8 * f + 8;
  for (std::int64_t k = 1; k <= limit; ++k) {
    if (v == 0) return k;
    const __int128 uu = static_cast<__int128>(u) * u1;
    const __int128 vv = static_cast<__int128>(v) * v1 % f;
    const std::int64_t nu = mod_pos(uu - vv * nrm, f);
    const std::int64_t nv = mod_pos(static_cast<__int128>(u) * v1 + static_cast<__int128>(u1) * v + vv * dm, f);
    u = nu;
    v = nv;
  }
  throw Error(ErrorKind::Internal, "unit_index: no power of the unit found in the order");
}

Regulator regulator(std::int64_t D, const RegulatorOptions& opts) {
  const OrderDiscriminant od = OrderDiscriminant::from(D);
  const UnitPeriod period = unit_period(od.d);
  double log_eps = period.log_unit;
  if (log_eps / std::log(2.0) <= opts.max_unit_bits) {
    log_eps = unit_from_period(period).log();
  }
  const std::int64_t idx = unit_index(od.d, od.f);
  return {D, static_cast<double>(idx) * log_eps};
}

bool is_reduced(const QuadraticForm& q, std::int64_t D) {
  if (q.b <= 0 || static_cast<__int128>(q.b) * q.b >= D) return false;
  const std::int64_t a2 = 2 * (q.a < 0 ? -q.a : q.a);
  // sqrt(D) - b < 2|a| < sqrt(D) + b, compared without leaving the integers.
  const __int128 lo = a2 + q.b;
  const bool above = lo > 0 && lo * lo > D;
  const __int128 hi = a2 - q.b;
  const bool below = hi < 0 || hi * hi < D;
  return above && below;
}

QuadraticForm rho(const QuadraticForm& q, std::int64_t D) {
  const std::int64_t s = isqrt(D);
  const std::int64_t c = q.c;
  const std::int64_t ac = c < 0 ? -c : c;
  if (c == 0) fail("rho: degenerate form");
  std::int64_t r;
  if (static_cast<__int128>(ac) * ac < D) {
    // largest r < sqrt(D) with r = -b (mod 2|c|)
    const std::int64_t m = 2 * ac;
    r = -q.b + m * floor_div(s + q.b, m);
  } else {
    // -|c| < r <= |c|
    const std::int64_t m = 2 * ac;
    r = -q.b + m * floor_div(ac + q.b, m);
  }
  const __int128 num = static_cast<__int128>(r) * r - D;
  return {c, r, static_cast<std::int64_t>(num / (4 * static_cast<__int128>(c)))};
}

std::vector<QuadraticForm> reduced_forms(std::int64_t D) {
  check_order_discriminant(D, "reduced_forms");
  const std::int64_t s = isqrt(D);
  std::vector<QuadraticForm> out;
  for (std::int64_t b = (D % 2 == 0) ? 2 : 1; b <= s; b += 2) {
    const std::int64_t N = (D - b * b) / 4;  // -a c
    // sqrt(D) - b < 2a < sqrt(D) + b  =>  a in [(s - b)/2, (s + b + 1)/2]
    const std::int64_t a_lo = std::max<std::int64_t>(1, (s - b) / 2);
    const std::int64_t a_hi = (s + b + 1) / 2;
    for (std::int64_t a = a_lo; a <= a_hi; ++a) {
      if (N % a != 0) continue;
      const std::int64_t c = N / a;
      if (std::gcd(std::gcd(a, b), c) != 1) continue;
      const QuadraticForm pos{a, b, -c}, neg{-a, b, c};
      if (!is_reduced(pos, D)) continue;
      out.push_back(pos);
      out.push_back(neg);
    }
  }
  return out;
}

std::int64_t narrow_class_number(std::int64_t D) {
  const std::vector<QuadraticForm> forms = reduced_forms(D);
  std::map<QuadraticForm, bool> seen;
  for (const auto& q : forms) seen.emplace(q, false);
  std::int64_t cycles = 0;
  for (const auto& q : forms) {
    if (seen[q]) continue;
    ++cycles;
    QuadraticForm cur = q;
    do {
      auto it = seen.find(cur);
      if (it == seen.end()) throw Error(ErrorKind::Internal, "narrow_class_number: rho left the reduced set");
      it->second = true;
      cur = rho(cur, D);
    } while (cur != q);
  }
  return cycles;
}

double class_number_L(std::int64_t D) {
  const std::int64_t h = narrow_class_number(D);
  return static_cast<double>(h) * regulator(D).log_epsilon / std::sqrt(static_cast<double>(D));
}

TraceNorm norm_of_trace(std::int64_t t) {
  if (t < 0) t = -t;
  if (t <= 2) fail("norm_of_trace: |t| must exceed 2");
  const long double tt = static_cast<long double>(t);
  const long double root = std::sqrt(tt * tt - 4);
  const long double lambda = (tt + root) / 2;
  return {static_cast<double>(lambda * lambda), static_cast<double>(root)};
}

}  // namespace geodesic
