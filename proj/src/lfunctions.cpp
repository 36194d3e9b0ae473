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

#include "geodesic/lfunctions.hpp"

#include <cmath>
#include <cstdio>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/quadratic.hpp"

namespace geodesic {

namespace {

void check_positive_discriminant(std::int64_t D, const char* who) {
  if (D <= 0) fail(std::string(who) + ": discriminant must be positive");
  if (!is_discriminant(D)) fail(std::string(who) + ": " + std::to_string(D) + " is not 0 or 1 mod 4");
  if (is_square(D)) fail(std::string(who) + ": " + std::to_string(D) + " is a perfect square");
}

struct Neumaier {
  long double sum = 0, comp = 0;
  void add(long double x) {
    const long double t = sum + x;
    comp += (std::fabs(sum) >= std::fabs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

// e^{-l/N}/l for l <= cutoff, one table per (N, cutoff).
const std::vector<double>& smoothing_weights(double scale, std::int64_t cutoff) {
  static std::mutex mu;
  static std::map<std::pair<double, std::int64_t>, std::unique_ptr<std::vector<double>>> tables;
  std::lock_guard<std::mutex> lock(mu);
  auto& slot = tables[{scale, cutoff}];
  if (!slot) {
    auto w = std::make_unique<std::vector<double>>(cutoff + 1, 0.0);
    for (std::int64_t l = 1; l <= cutoff; ++l) {
      (*w)[l] = std::exp(-static_cast<double>(l) / scale) / static_cast<double>(l);
    }
    slot = std::move(w);
  }
  return *slot;
}

// prod_{p | f} (1 - chi_d(p)/p)
double conductor_correction(std::int64_t d, std::int64_t f) {
  double out = 1.0;
  for (const auto& pp : factorize(f).factors) {
    const auto p = static_cast<std::int64_t>(pp.prime);
    out *= 1.0 - static_cast<double>(kronecker(d, p)) / static_cast<double>(p);
  }
  return out;
}

}  // namespace

int chi(std::int64_t D, std::int64_t n) {
  if (!is_discriminant(D)) fail("chi: " + std::to_string(D) + " is not 0 or 1 mod 4");
  return kronecker(D, n);
}

void LStrategy::validate() const {
  switch (kind) {
    case Kind::SmoothedSeries:
      if (!(smoothing_scale > 0)) fail("smoothed strategy: smoothing scale must be positive");
      if (cutoff < 1) fail("smoothed strategy: cutoff must be positive");
      if (static_cast<double>(cutoff) < smoothing_scale) fail("smoothed strategy: cutoff must be >= smoothing scale");
      if (cutoff > 100000000) fail("smoothed strategy: cutoff above 1e8");
      break;
    case Kind::EulerTruncated:
      if (prime_bound < 2) fail("euler strategy: prime bound must be >= 2");
      if (prime_bound > 2000000000) fail("euler strategy: prime bound above 2e9");
      break;
    default:
      break;
  }
}

std::string LStrategy::tag() const {
  char buf[96];
  switch (kind) {
    case Kind::ClassNumber:
      return "classnumber";
    case Kind::LogSin:
      return "logsin";
    case Kind::SmoothedSeries:
      std::snprintf(buf, sizeof buf, "smoothed:%.17g:%lld", smoothing_scale, static_cast<long long>(cutoff));
      return buf;
    case Kind::EulerTruncated:
      std::snprintf(buf, sizeof buf, "euler:%lld", static_cast<long long>(prime_bound));
      return buf;
  }
  return "?";
}

LStrategy LStrategy::parse(const std::string& text) {
  std::vector<std::string> parts;
  std::size_t start = 0;
  for (;;) {
    const std::size_t colon = text.find(':', start);
    parts.push_back(text.substr(start, colon - start));
    if (colon == std::string::npos) break;
    start = colon + 1;
  }
  auto number = [&](const std::string& s) -> double {
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(s, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used == 0 || used != s.size()) fail("strategy: bad number '" + s + "' in '" + text + "'");
    return v;
  };
  auto integer = [&](const std::string& s) -> std::int64_t {
    const double v = number(s);
    if (v != std::floor(v)) fail("strategy: expected an integer in '" + text + "'");
    return static_cast<std::int64_t>(v);
  };
  LStrategy out;
  const std::string& name = parts[0];
  if (name == "classnumber" || name == "exact") {
    if (parts.size() != 1) fail("strategy: classnumber takes no parameters");
    out = class_number();
  } else if (name == "logsin") {
    if (parts.size() != 1) fail("strategy: logsin takes no parameters");
    out = log_sin();
  } else if (name == "smoothed") {
    if (parts.size() > 3) fail("strategy: smoothed[:scale[:cutoff]]");
    out = smoothed();
    if (parts.size() >= 2) out.smoothing_scale = number(parts[1]);
    if (parts.size() == 3) out.cutoff = integer(parts[2]);
  } else if (name == "euler") {
    if (parts.size() > 2) fail("strategy: euler[:bound]");
    out = euler(parts.size() == 2 ? integer(parts[1]) : 1000);
  } else {
    fail("strategy: unknown '" + text + "' (classnumber, logsin, smoothed[:N[:cutoff]], euler[:P])");
  }
  out.validate();
  return out;
}

double l_one_smoothed(std::int64_t D, double scale, std::int64_t cutoff) {
  check_positive_discriminant(D, "l_one");
  LStrategy::smoothed(scale, cutoff).validate();
  const std::vector<double>& w = smoothing_weights(scale, cutoff);
  const PrimeSieve& sieve = PrimeSieve::shared(static_cast<std::uint32_t>(cutoff));
  thread_local std::vector<signed char> ch;
  ch.assign(cutoff + 1, 0);
  Neumaier acc;
  ch[1] = 1;
  acc.add(w[1]);
  for (std::int64_t l = 2; l <= cutoff; ++l) {
    const std::uint32_t p = sieve.smallest_factor(static_cast<std::uint32_t>(l));
    const int c = (p == l) ? kronecker(D, l) : ch[p] * ch[l / p];
    ch[l] = static_cast<signed char>(c);
    if (c != 0) acc.add(c * w[l]);
  }
  return static_cast<double>(acc.value());
}

double l_one_log_sin(std::int64_t D) {
  check_positive_discriminant(D, "l_one");
  if (D > kLogSinMax) fail("l_one: logsin strategy refuses D > 1e6 (cost is linear in D)");
  const FundamentalSplit s = fundamental_split(D);
  const std::int64_t d = s.d;
  // chi_d is even, so a and d - a contribute equally
  Neumaier acc;
  const long double pi = std::numbers::pi_v<long double>;
  for (std::int64_t a = 1; 2 * a < d; ++a) {
    const int c = kronecker(d, a);
    if (c == 0) continue;
    acc.add(c * std::log(std::sin(pi * static_cast<long double>(a) / static_cast<long double>(d))));
  }
  const long double fundamental = -2 * acc.value() / std::sqrt(static_cast<long double>(d));
  return static_cast<double>(fundamental) * conductor_correction(d, s.l);
}

double l_one_euler(std::int64_t D, std::int64_t prime_bound) {
  check_positive_discriminant(D, "l_one");
  LStrategy::euler(prime_bound).validate();
  const PrimeSieve& sieve = PrimeSieve::shared(static_cast<std::uint32_t>(prime_bound));
  Neumaier logsum;
  for (std::uint32_t p : sieve.primes_up_to(static_cast<std::uint32_t>(prime_bound))) {
    const int c = kronecker(D, p);
    if (c != 0) logsum.add(-std::log1p(-static_cast<long double>(c) / p));
  }
  return static_cast<double>(std::exp(logsum.value()));
}

double l_one(std::int64_t D, const LStrategy& s) {
  s.validate();
  switch (s.kind) {
    case LStrategy::Kind::ClassNumber:
      check_positive_discriminant(D, "l_one");
      return class_number_L(D);
    case LStrategy::Kind::LogSin:
      return l_one_log_sin(D);
    case LStrategy::Kind::SmoothedSeries:
      return l_one_smoothed(D, s.smoothing_scale, s.cutoff);
    case LStrategy::Kind::EulerTruncated:
      return l_one_euler(D, s.prime_bound);
  }
  throw Error(ErrorKind::Internal, "l_one: unknown strategy");
}

bool CrossValidation::ok() const {
  for (const auto& p : pairs) {
    if (p.flagged) return false;
  }
  return true;
}

CrossValidation cross_validate(std::int64_t D_max, const CrossValidateOptions& opts) {
  if (D_max < 1) fail("cross_validate: D_max must be positive");
  for (const auto& pr : opts.pairs) {
    pr.first.validate();
    pr.second.validate();
    const bool logsin = pr.first.kind == LStrategy::Kind::LogSin || pr.second.kind == LStrategy::Kind::LogSin;
    if (logsin && D_max > 10000) fail("cross_validate: D_max above 1e4 with a logsin leg");
  }
  CrossValidation out;
  out.D_max = D_max;
  for (std::int64_t D = 5; D <= D_max; ++D) {
    if (!is_discriminant(D) || is_square(D)) continue;
    if (opts.fundamental_only && !is_fundamental_discriminant(D)) continue;
    out.discriminants.push_back(D);
  }
  std::map<std::string, std::vector<double>> values;
  auto column = [&](const LStrategy& s) -> const std::vector<double>& {
    auto& col = values[s.tag()];
    if (col.empty()) {
      col.reserve(out.discriminants.size());
      for (std::int64_t D : out.discriminants) col.push_back(l_one(D, s));
    }
    return col;
  };
  for (const auto& pr : opts.pairs) {
    const auto& a = column(pr.first);
    const auto& b = column(pr.second);
    PairDeviation dev;
    dev.first = pr.first.tag();
    dev.second = pr.second.tag();
    dev.tolerance = pr.tolerance;
    dev.count = static_cast<std::int64_t>(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) {
      const double e = std::fabs(a[i] - b[i]);
      if (e > dev.max_deviation || std::isnan(e)) {
        dev.max_deviation = e;
        dev.worst_D = out.discriminants[i];
      }
    }
    dev.flagged = !(dev.max_deviation <= pr.tolerance);
    out.pairs.push_back(dev);
  }
  return out;
}

}  // namespace geodesic
