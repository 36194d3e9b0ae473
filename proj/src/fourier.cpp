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

#include "geodesic/fourier.hpp"

#include <cmath>
#include <numbers>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"

namespace geodesic {

namespace {

constexpr std::int64_t kPeriodLimit = std::int64_t{1} << 62;

std::int64_t ipow(std::int64_t p, int e) {
  std::int64_t r = 1;
  for (int i = 0; i < e; ++i) {
    if (r > kPeriodLimit / p) fail("period " + std::to_string(p) + "^" + std::to_string(e) + " exceeds 2^62");
    r *= p;
  }
  return r;
}

std::int64_t mod(std::int64_t a, std::int64_t m) {
  std::int64_t r = a % m;
  return r < 0 ? r + m : r;
}

std::int64_t mulmod_i(std::int64_t a, std::int64_t b, std::int64_t m) {
  return static_cast<std::int64_t>(static_cast<__int128>(a) * b % m);
}

// e^{-2 pi i k / M}
complex expm(std::int64_t k, std::int64_t M) {
  const long double x = 2 * std::numbers::pi_v<long double> * static_cast<long double>(mod(k, M)) /
                        static_cast<long double>(M);
  return {static_cast<double>(std::cos(x)), static_cast<double>(-std::sin(x))};
}

double cos4pi(std::int64_t a, std::int64_t M) {
  const long double x = 2 * std::numbers::pi_v<long double> * static_cast<long double>(mod(2 * (a % M), M)) /
                        static_cast<long double>(M);
  return static_cast<double>(std::cos(x));
}

struct CNeumaier {
  long double re = 0, im = 0, cre = 0, cim = 0;
  static void step(long double& s, long double& c, long double x) {
    const long double t = s + x;
    c += (std::fabs(s) >= std::fabs(x)) ? (s - t) + x : (x - t) + s;
    s = t;
  }
  void add(complex z) {
    step(re, cre, z.real());
    step(im, cim, z.imag());
  }
  complex value() const { return {static_cast<double>(re + cre), static_cast<double>(im + cim)}; }
};

int legendre(std::int64_t x, std::int64_t p) {
  return jacobi(mod(x, p), p);
}

void require_odd_prime(std::int64_t q, const char* who) {
  if (q < 3 || !is_prime(static_cast<std::uint64_t>(q))) {
    fail(std::string(who) + ": q must be an odd prime, got " + std::to_string(q));
  }
}

void require_prime(std::int64_t p, const char* who) {
  if (p < 2 || !is_prime(static_cast<std::uint64_t>(p))) {
    fail(std::string(who) + ": p must be prime, got " + std::to_string(p));
  }
}

complex eps_q(std::int64_t q) {
  return q % 4 == 1 ? complex(1, 0) : complex(0, 1);
}

std::int64_t inverse_mod(std::int64_t a, std::int64_t m) {
  std::int64_t g = m, x = 0, x1 = 1, a1 = mod(a, m);
  while (a1 != 0) {
    const std::int64_t q = g / a1;
    std::int64_t t = g - q * a1;
    g = a1;
    a1 = t;
    t = x - q * x1;
    x = x1;
    x1 = t;
  }
  if (g != 1) fail("inverse_mod: not invertible");
  return mod(x, m);
}

mpz_class zpow(std::int64_t p, int k) {
  mpz_class r;
  mpz_ui_pow_ui(r.get_mpz_t(), static_cast<unsigned long>(p), static_cast<unsigned long>(k));
  return r;
}

}  // namespace

RationalPhase RationalPhase::make(std::int64_t a, std::int64_t b) {
  if (b < 1) fail("phase denominator must be positive");
  const std::int64_t ar = mod(a, b);
  if (b == 1) return {0, 1};
  if (geodesic::gcd(ar, b) != 1) fail("phase " + std::to_string(a) + "/" + std::to_string(b) + " is not reduced");
  return {ar, b};
}

int period_exponent(std::int64_t p, int b, LocalFlavor flavor) {
  if (b < 0) fail("b must be nonnegative");
  switch (flavor) {
    case LocalFlavor::Generic: return 2 * b + 1;
    case LocalFlavor::Two: return 2 * b + 3;
    case LocalFlavor::Level:
    case LocalFlavor::Ramified: return 2 * b + 2;
  }
  (void)p;
  return 0;
}

std::int64_t local_period(std::int64_t p, int b, LocalFlavor flavor) {
  require_prime(p, "local_period");
  if ((p == 2) != (flavor == LocalFlavor::Two)) fail("local_period: flavor inconsistent with p");
  return ipow(p, period_exponent(p, b, flavor));
}

double local_summand(std::int64_t p, int b, std::int64_t n, LocalFlavor flavor) {
  const int ind = indicator(p, b, n, flavor);
  if (ind == 0) return 0.0;
  std::int64_t m = (n < 0 ? -n - 2 : n - 2) * (n < 0 ? -n + 2 : n + 2);
  for (int i = 0; i < b; ++i) m /= p * p;
  return ind / (1.0 - static_cast<double>(kronecker(m, p)) / static_cast<double>(p));
}

LocalSummand::LocalSummand(std::int64_t p, int b, LocalFlavor flavor)
    : p_(p), b_(b), flavor_(flavor), e_(period_exponent(p, b, flavor)), period_(local_period(p, b, flavor)) {
  step_ = ipow(p, 2 * b);
  // Hensel-lift n^2 = 4 one power of p at a time
  std::vector<std::int64_t> sols{0};
  std::int64_t pk = 1;
  for (int k = 1; k <= 2 * b; ++k) {
    const std::int64_t next = pk * p;
    std::vector<std::int64_t> lifted;
    for (std::int64_t r : sols) {
      for (std::int64_t t = 0; t < p; ++t) {
        const std::int64_t x = r + t * pk;
        if (mod(mulmod_i(x, x, next) - 4, next) == 0) lifted.push_back(x);
      }
    }
    sols.swap(lifted);
    pk = next;
  }
  roots_ = sols;
  const std::int64_t reps = period_ / step_;
  values_.resize(roots_.size());
  totals_.resize(roots_.size());
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    values_[i].resize(reps);
    long double tot = 0;
    for (std::int64_t j = 0; j < reps; ++j) {
      values_[i][j] = value(roots_[i] + j * step_);
      tot += values_[i][j];
    }
    totals_[i] = static_cast<double>(tot);
  }
}

std::size_t LocalSummand::support_size() const {
  std::size_t n = 0;
  for (const auto& row : values_) {
    for (double v : row) n += (v != 0.0);
  }
  return n;
}

double LocalSummand::value(std::int64_t n) const {
  const std::int64_t nm = mod(n, period_);
  const std::int64_t r = mod(mulmod_i(nm, nm, period_) - 4, period_);
  if (r % step_ != 0) return 0.0;
  const std::int64_t mb = r / step_;  // known mod p^{e-2b}
  const double p = static_cast<double>(p_);
  switch (flavor_) {
    case LocalFlavor::Generic: {
      const int lam = legendre(mb, p_);
      return 1.0 / (1.0 - lam / p);
    }
    case LocalFlavor::Two: {
      const std::int64_t m8 = mb % 8;
      if (m8 % 4 != 0 && m8 % 4 != 1) return 0.0;
      const int lam = kronecker(m8, 2);
      return 1.0 / (1.0 - lam / 2.0);
    }
    case LocalFlavor::Level: {
      if (mb % (p_ * p_) == 0) return 2.0;
      const int lam = legendre(mb, p_);
      return (1 + lam) / (1.0 - lam / p);
    }
    case LocalFlavor::Ramified: {
      if (mb % (p_ * p_) == 0) return 0.0;
      const int lam = legendre(mb, p_);
      return (1 - lam) / (1.0 - lam / p);
    }
  }
  return 0.0;
}

complex LocalSummand::inner(std::size_t coset, int k, std::int64_t r) const {
  const auto key = std::make_tuple(coset, k, r);
  {
    std::lock_guard<std::mutex> lock(mu_);
    auto it = cache_.find(key);
    if (it != cache_.end()) return it->second;
  }
  const std::int64_t M = ipow(p_, k);
  CNeumaier acc;
  const auto& row = values_[coset];
  for (std::size_t j = 0; j < row.size(); ++j) {
    if (row[j] != 0.0) acc.add(row[j] * expm(mulmod_i(static_cast<std::int64_t>(j), r, M), M));
  }
  const complex v = acc.value();
  std::lock_guard<std::mutex> lock(mu_);
  cache_.emplace(key, v);
  return v;
}

complex LocalSummand::coefficient(std::int64_t a, int c) const {
  if (c < 0) fail("coefficient: c must be nonnegative");
  if (c > e_) return {0.0, 0.0};
  const std::int64_t M = ipow(p_, c);
  const std::int64_t ar = mod(a, M);
  CNeumaier acc;
  for (std::size_t i = 0; i < roots_.size(); ++i) {
    const complex phase = expm(mulmod_i(roots_[i], ar, M), M);
    if (c <= 2 * b_) {
      acc.add(phase * totals_[i]);
    } else {
      const int k = c - 2 * b_;
      acc.add(phase * inner(i, k, mod(ar, ipow(p_, k))));
    }
  }
  return acc.value() / static_cast<double>(period_);
}

complex LocalSummand::coefficient(const RationalPhase& phase) const {
  if (phase.b == 1) return coefficient(0, 0);
  std::int64_t rest = phase.b;
  int c = 0;
  while (rest % p_ == 0) {
    rest /= p_;
    ++c;
  }
  if (rest != 1) return {0.0, 0.0};  // off the p-power lattice
  return coefficient(phase.a, c);
}

const LocalSummand& local_summand_table(std::int64_t p, int b, LocalFlavor flavor) {
  static std::mutex mu;
  static std::map<std::tuple<std::int64_t, int, int>, std::unique_ptr<LocalSummand>> tables;
  const auto key = std::make_tuple(p, b, static_cast<int>(flavor));
  {
    std::lock_guard<std::mutex> lock(mu);
    auto it = tables.find(key);
    if (it != tables.end()) return *it->second;
  }
  auto made = std::make_unique<LocalSummand>(p, b, flavor);
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[key];
  if (!slot) slot = std::move(made);
  return *slot;
}

complex dft_coefficient(std::int64_t p, int b, LocalFlavor flavor, const RationalPhase& phase) {
  require_prime(p, "dft_coefficient");
  return local_summand_table(p, b, flavor).coefficient(RationalPhase::make(phase.a, phase.b));
}

complex gauss_sum(std::int64_t q) {
  require_odd_prime(q, "gauss_sum");
  CNeumaier acc;
  for (std::int64_t m = 1; m <= q; ++m) {
    const int s = legendre(m, q);
    if (s != 0) acc.add(static_cast<double>(s) * std::conj(expm(m, q)));
  }
  return acc.value();
}

complex char_sum(std::int64_t q, std::int64_t a) {
  require_odd_prime(q, "char_sum");
  const std::int64_t ar = mod(a, q);
  if (ar == 0) {
    std::int64_t s = 0;
    for (std::int64_t n = 0; n < q; ++n) s += legendre(n * n - 4, q);
    return {static_cast<double>(s), 0.0};
  }
  CNeumaier acc;
  for (std::int64_t n = 0; n < q; ++n) {
    const int s = legendre(n * n - 4, q);
    if (s != 0) acc.add(static_cast<double>(s) * expm(n * ar, q));
  }
  return acc.value();
}

complex closed_form_coeff_b(std::int64_t q, int b, int c, std::int64_t a, Side side) {
  require_odd_prime(q, "closed_form_coeff_b");
  if (b < 0 || c < 0) fail("closed_form_coeff_b: b and c must be nonnegative");
  if (c >= 1 && a % q == 0) fail("closed_form_coeff_b: a must be prime to q");
  if (c > 2 * b + 2) return {0.0, 0.0};
  const double Q = static_cast<double>(q);
  const std::int64_t M = ipow(q, c);
  const std::int64_t ar = mod(a, M);
  const double cs = cos4pi(ar, M);
  const complex em = expm(2 * ar, M), ep = std::conj(em);
  const double lp = legendre(ar, q), lm = legendre(-ar, q);
  const double q2b2 = std::pow(Q, 2 * b + 2);
  if (side == Side::Congruence) {
    if (c == 0) return b == 0 ? 1.0 - 2.0 / (Q * Q * (Q - 1)) : 2.0 * (Q * Q + Q + 1) / q2b2;
    if (b == 0) {
      if (c == 1) return -2.0 * cs / (Q * Q * (Q - 1)) + char_sum(q, ar) / (Q - 1);
      return 2.0 / (Q * Q) * cs;
    }
    if (c <= 2 * b) return 2.0 * cs * (Q * Q + Q + 1) / q2b2;
    if (c == 2 * b + 1) {
      const complex bracket = em * lm + ep * lp;
      return (Q / (Q - 1) * std::pow(Q, 1.5) * eps_q(q) * bracket - 2.0 / (Q - 1) * cs) / q2b2;
    }
    return 2.0 / q2b2 * cs;
  }
  if (c == 0) {
    return b == 0 ? (Q - 1) * (Q * Q + 2 * Q + 2) / (Q * Q * (Q + 1)) : 2.0 * (Q * Q * Q - 1) / (q2b2 * (Q + 1));
  }
  if (b == 0) {
    if (c == 1) return -2.0 * cs / (Q * Q * (Q + 1)) - char_sum(q, ar) / (Q + 1);
    return -2.0 / (Q * Q) * cs;
  }
  if (c <= 2 * b) return 2.0 * (Q * Q * Q - 1) * cs / (q2b2 * (Q + 1));
  if (c == 2 * b + 1) {
    const complex bracket = em * lm + ep * lp;
    return -2.0 * cs / (q2b2 * (Q + 1)) - std::sqrt(Q) * eps_q(q) / (std::pow(Q, 2 * b) * (Q + 1)) * bracket;
  }
  return -2.0 / q2b2 * cs;
}

complex closed_form_assembled(std::int64_t q, int c, std::int64_t a, Side side) {
  require_odd_prime(q, "closed_form_assembled");
  if (c < 0) fail("closed_form_assembled: c must be nonnegative");
  if (c == 0) return {1.0, 0.0};
  if (a % q == 0) fail("closed_form_assembled: a must be prime to q");
  const double Q = static_cast<double>(q);
  const std::int64_t M = ipow(q, c);
  const std::int64_t ar = mod(a, M);
  const double cs = cos4pi(ar, M);
  const double sign = side == Side::Congruence ? 1.0 : -1.0;
  const double denom = side == Side::Congruence ? Q - 1 : Q + 1;
  if (c == 1) return sign * char_sum(q, ar) / denom;
  if (c == 2) return sign * 2.0 * cs / (Q * denom);
  const double scale = std::pow(Q, (3.0 * c - 4.0) / 2.0);
  if (c % 2 == 0) return sign * 2.0 * cs / (denom * scale);
  const complex em = expm(2 * ar, M), ep = std::conj(em);
  const complex bracket = em * static_cast<double>(legendre(-1, q)) + ep;
  return sign * eps_q(q) * static_cast<double>(legendre(ar, q)) * bracket / (denom * scale);
}

double summand_bound_constant(std::int64_t p, LocalFlavor flavor) {
  const double P = static_cast<double>(p);
  switch (flavor) {
    case LocalFlavor::Generic: return 2.0 * P / (P - 1);
    case LocalFlavor::Two: return 16.0;
    case LocalFlavor::Level:
    case LocalFlavor::Ramified: return 2.0 * (P * P + P + 1) / (P * P);
  }
  return 16.0;
}

SeriesCoefficient series_coefficient(std::int64_t p, int c, std::int64_t a, const GroupContext& ctx, double tol) {
  require_prime(p, "series_coefficient");
  if (c < 0) fail("series_coefficient: c must be nonnegative");
  if (c >= 1 && a % p == 0) fail("series_coefficient: a must be prime to p");
  if (!(tol > 0)) fail("series_coefficient: tol must be positive");
  const LocalFlavor flavor = ctx.flavor(p);
  const double P = static_cast<double>(p);
  const double C = summand_bound_constant(p, flavor);
  SeriesCoefficient out;
  int bmax = 0;
  for (;; ++bmax) {
    out.tail_bound = C * std::pow(P, -3.0 * (bmax + 1)) / (1.0 - std::pow(P, -3.0));
    if (out.tail_bound <= tol) break;
    if (std::log2(P) * period_exponent(p, bmax + 1, flavor) > 61) {
      throw Error(ErrorKind::Tolerance, "series_coefficient: tolerance unreachable within 62-bit periods");
    }
  }
  out.b_max = bmax;
  const std::int64_t ar = c == 0 ? 0 : mod(a, ipow(p, c));
  complex sum{0, 0};
  for (int b = bmax; b >= 0; --b) {
    if (c > period_exponent(p, b, flavor)) continue;
    sum += std::pow(P, -b) * local_summand_table(p, b, flavor).coefficient(ar, c);
  }
  out.value = sum;
  return out;
}

complex CoefficientCache::local(std::int64_t p, int c, std::int64_t a) {
  const auto key = std::make_tuple(p, c, a);
  auto it = local_.find(key);
  if (it != local_.end()) return it->second;
  const complex v = series_coefficient(p, c, a, ctx_, tol_).value;
  local_.emplace(key, v);
  return v;
}

complex CoefficientCache::global(std::int64_t a, std::int64_t b) {
  const RationalPhase ph = RationalPhase::make(a, b);
  if (ph.b == 1) return {1.0, 0.0};
  complex out{1.0, 0.0};
  for (const auto& pp : factorize(ph.b).factors) {
    const auto p = static_cast<std::int64_t>(pp.prime);
    const std::int64_t M = ipow(p, pp.exponent);
    const std::int64_t ap = mulmod_i(mod(ph.a, M), inverse_mod(ph.b / M, M), M);
    out *= local(p, pp.exponent, ap);
    if (out == complex{0.0, 0.0}) break;
  }
  return out;
}

complex global_coefficient(std::int64_t a, std::int64_t b, const GroupContext& ctx, double tol) {
  CoefficientCache cache(ctx, tol);
  return cache.global(a, b);
}

mpq_class a_value_exact(std::int64_t p, int c, const GroupContext& ctx) {
  require_prime(p, "a_value");
  if (c < 1) fail("a_value: c must be >= 1");
  const LocalFlavor flavor = ctx.flavor(p);
  const mpz_class P = p;
  mpq_class r;
  switch (flavor) {
    case LocalFlavor::Generic: {
      const mpz_class d = (P * P - 1) * (P * P - 1);
      r = c == 1 ? mpq_class(P * P - 2 * P - 1, d) : mpq_class(2 * (P - 1), d * zpow(p, 2 * c - 3));
      break;
    }
    case LocalFlavor::Two: {
      static const int num[] = {0, 1, 1, 0, 1, 0};
      static const int den[] = {1, 9, 18, 1, 144, 1};
      r = c <= 5 ? mpq_class(num[c], den[c]) : mpq_class(1, 9 * zpow(2, 2 * c - 5));
      break;
    }
    case LocalFlavor::Level:
      if (c == 1) r = mpq_class(P * P - 2 * P - 1, (P - 1) * (P - 1));
      else if (c == 2) r = mpq_class(2, P * (P - 1));
      else r = mpq_class(2, zpow(p, 2 * c - 3) * (P - 1));
      break;
    case LocalFlavor::Ramified:
      if (c == 1) r = mpq_class(P * P - 2 * P - 1, (P + 1) * (P + 1));
      else if (c == 2) r = mpq_class(2 * (P - 1), P * (P + 1) * (P + 1));
      else r = mpq_class(2 * (P - 1), (P + 1) * (P + 1) * zpow(p, 2 * c - 3));
      break;
  }
  r.canonicalize();
  return r;
}

double a_value(std::int64_t p, int c, const GroupContext& ctx, AMethod method, double tol) {
  if (method == AMethod::Closed) return a_value_exact(p, c, ctx).get_d();
  require_prime(p, "a_value");
  if (c < 1) fail("a_value: c must be >= 1");
  const std::int64_t M = ipow(p, c);
  long double s = 0;
  for (std::int64_t a = 1; a < M; ++a) {
    if (a % p == 0) continue;
    s += std::norm(series_coefficient(p, c, a, ctx, tol).value);
  }
  return static_cast<double>(s);
}

mpq_class local_euler_factor_exact(std::int64_t p, const GroupContext& ctx) {
  require_prime(p, "local_euler_factor");
  const mpz_class P = p;
  mpq_class r;
  switch (ctx.flavor(p)) {
    case LocalFlavor::Generic:
      r = mpq_class(P * P * (P * P * P + P * P - P - 3), (P * P - 1) * (P * P - 1) * (P + 1));
      break;
    case LocalFlavor::Two:
      r = mpq_class(1015, 864);
      break;
    case LocalFlavor::Level:
      r = mpq_class(2 * P * (P * P - P - 1), (P + 1) * (P - 1) * (P - 1));
      break;
    case LocalFlavor::Ramified:
      r = mpq_class(2 * P * (P * P + P + 1), (P + 1) * (P + 1) * (P + 1));
      break;
  }
  r.canonicalize();
  return r;
}

double local_euler_factor(std::int64_t p, const GroupContext& ctx) {
  return local_euler_factor_exact(p, ctx).get_d();
}

mpq_class local_euler_factor_termsum(std::int64_t p, const GroupContext& ctx, int terms) {
  require_prime(p, "local_euler_factor");
  if (terms < 0) fail("local_euler_factor_termsum: terms must be nonnegative");
  int geometric_from = 2;
  switch (ctx.flavor(p)) {
    case LocalFlavor::Generic: geometric_from = 2; break;
    case LocalFlavor::Two: geometric_from = 6; break;
    case LocalFlavor::Level:
    case LocalFlavor::Ramified: geometric_from = 3; break;
  }
  const int explicit_to = std::max(terms, geometric_from - 1);
  mpq_class sum = 1;
  for (int c = 1; c <= explicit_to; ++c) sum += a_value_exact(p, c, ctx);
  // A(p^c) has ratio 1/p^2 from geometric_from on
  const mpq_class ratio(1, mpz_class(p) * p);
  sum += a_value_exact(p, explicit_to + 1, ctx) / (1 - ratio);
  sum.canonicalize();
  return sum;
}

}  // namespace geodesic
