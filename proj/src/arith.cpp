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

#include "geodesic/arith.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <fstream>
#include <memory>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>

#include "geodesic/error.hpp"

namespace geodesic {

namespace {

constexpr std::uint32_t kTrialBound = 1000000;

}  // namespace

std::uint64_t mulmod(std::uint64_t a, std::uint64_t b, std::uint64_t m) {
  return static_cast<std::uint64_t>(static_cast<unsigned __int128>(a) * b % m);
}

std::uint64_t powmod(std::uint64_t base, std::uint64_t exp, std::uint64_t m) {
  std::uint64_t result = 1 % m;
  base %= m;
  while (exp > 0) {
    if (exp & 1) result = mulmod(result, base, m);
    base = mulmod(base, base, m);
    exp >>= 1;
  }
  return result;
}

std::int64_t gcd(std::int64_t a, std::int64_t b) {
  return std::gcd(a, b);
}

std::int64_t isqrt(std::int64_t n) {
  if (n < 0) fail("isqrt: negative argument");
  auto r = static_cast<std::int64_t>(std::sqrt(static_cast<long double>(n)));
  while (r > 0 && static_cast<__int128>(r) * r > n) --r;
  while (static_cast<__int128>(r + 1) * (r + 1) <= n) ++r;
  return r;
}

bool is_square(std::int64_t n) {
  if (n < 0) return false;
  const std::int64_t r = isqrt(n);
  return r * r == n;
}

bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t p : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % p == 0) return n == p;
  }
  std::uint64_t d = n - 1;
  int s = 0;
  while ((d & 1) == 0) {
    d >>= 1;
    ++s;
  }
  // Witness set that is exact below 2^64.
  for (std::uint64_t a : {2ULL, 325ULL, 9375ULL, 28178ULL, 450775ULL, 9780504ULL,
                          1795265022ULL}) {
    a %= n;
    if (a == 0) continue;
    std::uint64_t x = powmod(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (int r = 1; r < s; ++r) {
      x = mulmod(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

int jacobi(std::int64_t a, std::int64_t n) {
  if (n <= 0 || (n & 1) == 0) fail("jacobi: modulus must be odd and positive");
  a %= n;
  if (a < 0) a += n;
  int result = 1;
  while (a != 0) {
    while ((a & 1) == 0) {
      a >>= 1;
      const std::int64_t r = n & 7;
      if (r == 3 || r == 5) result = -result;
    }
    std::swap(a, n);
    if ((a & 3) == 3 && (n & 3) == 3) result = -result;
    a %= n;
  }
  return n == 1 ? result : 0;
}

int kronecker(std::int64_t D, std::int64_t n) {
  if (n == 0) return (D == 1 || D == -1) ? 1 : 0;
  int result = 1;
  if (n < 0) {
    if (n == INT64_MIN) fail("kronecker: argument out of range");
    n = -n;
    if (D < 0) result = -result;
  }
  const int twos = std::countr_zero(static_cast<std::uint64_t>(n));
  if (twos > 0) {
    if ((D & 1) == 0) return 0;
    n >>= twos;
    std::int64_t r = D % 8;
    if (r < 0) r += 8;
    if ((twos & 1) && (r == 3 || r == 5)) result = -result;
  }
  if (n == 1) return result;
  return result * jacobi(D, n);
}

std::uint64_t Factorization::recompose() const {
  unsigned __int128 v = 1;
  for (const auto& pp : factors) {
    for (int i = 0; i < pp.exponent; ++i) v *= pp.prime;
  }
  return static_cast<std::uint64_t>(v);
}

bool Factorization::squarefree() const {
  return std::all_of(factors.begin(), factors.end(),
                     [](const PrimePower& pp) { return pp.exponent == 1; });
}

bool Factorization::divisible_by(std::uint64_t p) const {
  return order(p) > 0;
}

int Factorization::order(std::uint64_t p) const {
  for (const auto& pp : factors) {
    if (pp.prime == p) return pp.exponent;
  }
  return 0;
}

std::vector<std::uint64_t> Factorization::primes() const {
  std::vector<std::uint64_t> out;
  out.reserve(factors.size());
  for (const auto& pp : factors) out.push_back(pp.prime);
  return out;
}

PrimeSieve::PrimeSieve(std::uint32_t bound) : bound_(std::max<std::uint32_t>(bound, 2)) {
  spf_.assign(static_cast<std::size_t>(bound_) + 1, 0);
  for (std::uint32_t i = 2; i <= bound_; ++i) {
    if (spf_[i] == 0) {
      primes_.push_back(i);
      spf_[i] = i;
    }
    for (std::uint32_t p : primes_) {
      const std::uint64_t ip = static_cast<std::uint64_t>(i) * p;
      if (p > spf_[i] || ip > bound_) break;
      spf_[ip] = p;
    }
  }
}

std::span<const std::uint32_t> PrimeSieve::primes_up_to(std::uint32_t x) const {
  const auto end = std::upper_bound(primes_.begin(), primes_.end(), x);
  return {primes_.data(), static_cast<std::size_t>(end - primes_.begin())};
}

const PrimeSieve& PrimeSieve::shared(std::uint32_t bound) {
  static std::mutex mu;
  static std::vector<std::unique_ptr<PrimeSieve>> sieves;
  std::lock_guard<std::mutex> lock(mu);
  for (const auto& s : sieves) {
    if (s->bound() >= bound) return *s;
  }
  // Round up so that repeated small requests share one table.
  std::uint32_t b = 1 << 16;
  while (b < bound) b = b > (1u << 31) ? bound : b * 2;
  sieves.push_back(std::make_unique<PrimeSieve>(b));
  return *sieves.back();
}

namespace {

std::uint64_t pollard_brent(std::uint64_t n, std::mt19937_64& rng) {
  if ((n & 1) == 0) return 2;
  std::uniform_int_distribution<std::uint64_t> dist(1, n - 1);
  for (;;) {
    std::uint64_t y = dist(rng);
    const std::uint64_t c = dist(rng);
    const std::uint64_t m = 128;
    std::uint64_t g = 1, r = 1, q = 1, x = 0, ys = 0;
    auto f = [&](std::uint64_t v) { return (mulmod(v, v, n) + c) % n; };
    do {
      x = y;
      for (std::uint64_t i = 0; i < r; ++i) y = f(y);
      std::uint64_t k = 0;
      do {
        ys = y;
        for (std::uint64_t i = 0; i < std::min(m, r - k); ++i) {
          y = f(y);
          q = mulmod(q, x > y ? x - y : y - x, n);
        }
        g = std::gcd(q, n);
        k += m;
      } while (k < r && g == 1);
      r *= 2;
    } while (g == 1);
    if (g == n) {
      do {
        ys = f(ys);
        g = std::gcd(x > ys ? x - ys : ys - x, n);
      } while (g == 1);
    }
    if (g != n) return g;
  }
}

void split_cofactor(std::uint64_t n, std::mt19937_64& rng, std::vector<std::uint64_t>& out) {
  if (n == 1) return;
  if (is_prime(n)) {
    out.push_back(n);
    return;
  }
  const std::uint64_t d = pollard_brent(n, rng);
  split_cofactor(d, rng, out);
  split_cofactor(n / d, rng, out);
}

void push_power(std::vector<PrimePower>& factors, std::uint64_t p, int e) {
  for (auto& pp : factors) {
    if (pp.prime == p) {
      pp.exponent += e;
      return;
    }
  }
  factors.push_back({p, e});
}

}  // namespace

namespace {
std::atomic<std::uint64_t> g_seed{kDefaultSeed};
}  // namespace

std::uint64_t global_seed() { return g_seed.load(std::memory_order_relaxed); }
void set_global_seed(std::uint64_t seed) { g_seed.store(seed, std::memory_order_relaxed); }

Factorization factorize(std::int64_t n, std::uint64_t seed) {
  if (n < 1) {
    fail("factorize: input must lie in [1, 2^63-1], got " + std::to_string(n));
  }
  Factorization result;
  result.value = static_cast<std::uint64_t>(n);
  std::uint64_t rest = static_cast<std::uint64_t>(n);

  if (rest <= (1u << 20)) {
    const PrimeSieve& sieve = PrimeSieve::shared(1u << 20);
    while (rest > 1) {
      const std::uint32_t p = sieve.smallest_factor(static_cast<std::uint32_t>(rest));
      int e = 0;
      while (rest % p == 0) {
        rest /= p;
        ++e;
      }
      result.factors.push_back({p, e});
    }
    return result;
  }

  const PrimeSieve& sieve = PrimeSieve::shared(kTrialBound);
  for (std::uint32_t p : sieve.primes_up_to(kTrialBound)) {
    if (static_cast<std::uint64_t>(p) * p > rest) break;
    if (rest % p != 0) continue;
    int e = 0;
    while (rest % p == 0) {
      rest /= p;
      ++e;
    }
    result.factors.push_back({p, e});
  }
  if (rest > 1) {
    const std::uint64_t trial_sq = static_cast<std::uint64_t>(kTrialBound) * kTrialBound;
    if (rest < trial_sq) {
      result.factors.push_back({rest, 1});
    } else {
      std::mt19937_64 rng(seed ^ static_cast<std::uint64_t>(n));
      std::vector<std::uint64_t> primes;
      split_cofactor(rest, rng, primes);
      for (auto p : primes) push_power(result.factors, p, 1);
    }
  }
  std::sort(result.factors.begin(), result.factors.end(),
            [](const PrimePower& a, const PrimePower& b) { return a.prime < b.prime; });
  return result;
}

Factorization merge(const Factorization& a, const Factorization& b) {
  Factorization out;
  const unsigned __int128 v = static_cast<unsigned __int128>(a.value) * b.value;
  if (v > static_cast<unsigned __int128>(INT64_MAX)) fail("merge: product exceeds 2^63-1");
  out.value = static_cast<std::uint64_t>(v);
  std::size_t i = 0, j = 0;
  while (i < a.factors.size() || j < b.factors.size()) {
    if (j == b.factors.size() || (i < a.factors.size() && a.factors[i].prime < b.factors[j].prime)) {
      out.factors.push_back(a.factors[i++]);
    } else if (i == a.factors.size() || b.factors[j].prime < a.factors[i].prime) {
      out.factors.push_back(b.factors[j++]);
    } else {
      out.factors.push_back({a.factors[i].prime, a.factors[i].exponent + b.factors[j].exponent});
      ++i;
      ++j;
    }
  }
  return out;
}

std::vector<std::int64_t> divisors(const Factorization& f) {
  std::vector<std::int64_t> out{1};
  for (const auto& pp : f.factors) {
    const std::size_t n = out.size();
    std::int64_t pk = 1;
    for (int e = 1; e <= pp.exponent; ++e) {
      pk *= static_cast<std::int64_t>(pp.prime);
      for (std::size_t i = 0; i < n; ++i) out.push_back(out[i] * pk);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<std::int64_t> divisors(std::int64_t n) {
  return divisors(factorize(n));
}

bool is_discriminant(std::int64_t D) {
  std::int64_t r = D % 4;
  if (r < 0) r += 4;
  return r == 0 || r == 1;
}

bool is_fundamental_discriminant(std::int64_t D) {
  if (D == 0 || D == 1) return false;
  const std::int64_t a = D < 0 ? -D : D;
  std::int64_t r = D % 4;
  if (r < 0) r += 4;
  if (r == 1) return factorize(a).squarefree();
  if (r != 0) return false;
  const std::int64_t s = D / 4;
  std::int64_t sr = s % 4;
  if (sr < 0) sr += 4;
  if (sr != 2 && sr != 3) return false;
  return factorize(s < 0 ? -s : s).squarefree();
}

FundamentalSplit fundamental_split(const Factorization& mf) {
  const auto m = static_cast<std::int64_t>(mf.value);
  std::int64_t kernel = 1, root = 1;
  for (const auto& pp : mf.factors) {
    if (pp.exponent & 1) kernel *= static_cast<std::int64_t>(pp.prime);
    for (int i = 0; i < pp.exponent / 2; ++i) root *= static_cast<std::int64_t>(pp.prime);
  }
  if (kernel == 1) fail("fundamental_split: " + std::to_string(m) + " is a perfect square");
  if (kernel % 4 == 1) return {m, kernel, root};
  if (root % 2 != 0) {
    fail("fundamental_split: " + std::to_string(m) + " is not a discriminant");
  }
  return {m, 4 * kernel, root / 2};
}

FundamentalSplit fundamental_split(std::int64_t m) {
  if (m <= 0) fail("fundamental_split: input must be positive");
  return fundamental_split(factorize(m));
}

FundamentalSplit trace_split(std::int64_t t) {
  if (t < 0) t = -t;
  if (t < 3) fail("trace must satisfy |t| >= 3, got " + std::to_string(t));
  if (t > 3037000499LL) fail("trace too large: t^2-4 must fit in 63 bits");
  return fundamental_split(merge(factorize(t - 2), factorize(t + 2)));
}

Factorization FactorCache::get(std::int64_t n, std::uint64_t seed) {
  {
    std::shared_lock lock(mu_);
    auto it = entries_.find(n);
    if (it != entries_.end()) return it->second;
  }
  Factorization f = factorize(n, seed);
  std::unique_lock lock(mu_);
  entries_.emplace(n, f);
  return f;
}

std::size_t FactorCache::size() const {
  std::shared_lock lock(mu_);
  return entries_.size();
}

std::string to_string(const Factorization& f) {
  std::ostringstream os;
  os << f.value;
  for (const auto& pp : f.factors) os << ' ' << pp.prime << '^' << pp.exponent;
  return os.str();
}

void FactorCache::load(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) return;
  std::string line;
  std::unique_lock lock(mu_);
  while (std::getline(in, line)) {
    std::istringstream is(line);
    Factorization f;
    if (!(is >> f.value)) continue;
    std::string tok;
    bool ok = true;
    while (is >> tok) {
      const auto caret = tok.find('^');
      if (caret == std::string::npos) {
        ok = false;
        break;
      }
      f.factors.push_back({std::stoull(tok.substr(0, caret)), std::stoi(tok.substr(caret + 1))});
    }
    // Entries that do not recompose are ignored rather than trusted.
    if (ok && f.recompose() == f.value) entries_.emplace(static_cast<std::int64_t>(f.value), f);
  }
}

void FactorCache::save(const std::filesystem::path& file) const {
  std::ofstream out(file, std::ios::trunc);
  if (!out) throw Error(ErrorKind::Io, "cannot write factor cache " + file.string());
  std::shared_lock lock(mu_);
  for (const auto& [n, f] : entries_) out << to_string(f) << '\n';
}

}  // namespace geodesic
