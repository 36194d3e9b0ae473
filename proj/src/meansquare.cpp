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

#include "geodesic/meansquare.hpp"

#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <thread>

#include "geodesic/arith.hpp"
#include "geodesic/error.hpp"
#include "geodesic/fourier.hpp"

namespace geodesic {

namespace {

constexpr std::int64_t kMaxPrimeBound = 20000000;

struct Neumaier {
  long double sum = 0, comp = 0;
  void add(long double x) {
    const long double t = sum + x;
    comp += (std::fabs(sum) >= std::fabs(x)) ? (sum - t) + x : (x - t) + sum;
    sum = t;
  }
  long double value() const { return sum + comp; }
};

// log M_p for odd p outside the context: M_p - 1 = (p^3-p^2-p-1) / ((p^2-1)^2 (p+1))
long double generic_log_factor(std::int64_t p) {
  const long double P = static_cast<long double>(p);
  const long double num = P * P * P - P * P - P - 1;
  const long double den = (P * P - 1) * (P * P - 1) * (P + 1);
  return std::log1p(num / den);
}

void check_prime_bound(std::int64_t P, std::int64_t at_least, const char* who) {
  if (P < at_least) fail(std::string(who) + ": prime bound must be >= " + std::to_string(at_least));
  if (P > kMaxPrimeBound) fail(std::string(who) + ": prime bound above 2e7");
}

}  // namespace

double prime_square_tail(std::int64_t P) {
  if (P < 2) fail("prime_square_tail: P must be >= 2");
  const double x = static_cast<double>(P);
  return 2.51012 / (x * std::log(x));
}

EulerProductResult c1(std::int64_t prime_bound, double tol, bool with_factors) {
  check_prime_bound(prime_bound, 1000, "c1");
  Neumaier logsum;
  EulerProductResult out;
  out.prime_bound = prime_bound;
  if (with_factors) out.per_prime_factors.emplace_back(2, 1015.0 / 864.0);
  for (std::uint32_t p : PrimeSieve::shared(static_cast<std::uint32_t>(prime_bound))
                             .primes_up_to(static_cast<std::uint32_t>(prime_bound))) {
    if (p == 2) continue;
    const long double lf = generic_log_factor(p);
    logsum.add(lf);
    if (with_factors && p <= 100) out.per_prime_factors.emplace_back(p, static_cast<double>(std::exp(lf)));
  }
  out.value = static_cast<double>(1015.0L / 864.0L * std::exp(logsum.value()));
  out.log_tail_bound = prime_square_tail(prime_bound);
  out.tail_bound = out.value * std::expm1(out.log_tail_bound);
  if (!(out.tail_bound < tol)) {
    throw Error(ErrorKind::Tolerance, "c1: tail bound " + std::to_string(out.tail_bound) + " exceeds tol " +
                                          std::to_string(tol) + " at prime bound " + std::to_string(prime_bound));
  }
  return out;
}

double kappa_correction(std::int64_t p, const GroupContext& ctx) {
  const double P = static_cast<double>(p);
  switch (ctx.flavor(p)) {
    case LocalFlavor::Level:
      return 2 * (P * P - P - 1) * (P + 1) * (P + 1) / (P * (P * P * P + P * P - P - 3));
    case LocalFlavor::Ramified:
      return 2 * (P * P * P - 1) * (P - 1) / (P * (P * P * P + P * P - P - 3));
    default:
      return 1.0;
  }
}

EulerProductResult kappa(const GroupContext& ctx, std::int64_t prime_bound, double tol, bool with_factors) {
  check_prime_bound(prime_bound, 1000, "kappa");
  if (prime_bound < ctx.largest_prime()) {
    fail("kappa: prime bound must cover the context primes (largest " + std::to_string(ctx.largest_prime()) + ")");
  }
  EulerProductResult out = c1(prime_bound, tol, false);
  long double corr = 1;
  for (std::int64_t q : ctx.primes) corr *= kappa_correction(q, ctx);
  out.value = static_cast<double>(out.value * corr);

  Neumaier logsum;
  for (std::uint32_t p : PrimeSieve::shared(static_cast<std::uint32_t>(prime_bound))
                             .primes_up_to(static_cast<std::uint32_t>(prime_bound))) {
    const LocalFlavor fl = ctx.flavor(p);
    const long double lf = fl == LocalFlavor::Generic ? generic_log_factor(p)
                                                      : std::log(static_cast<long double>(local_euler_factor(p, ctx)));
    logsum.add(lf);
    if (with_factors && p <= 100) out.per_prime_factors.emplace_back(p, static_cast<double>(std::exp(lf)));
  }
  out.cross_check = static_cast<double>(std::exp(logsum.value()));
  out.consistent = std::fabs(out.cross_check - out.value) <= 1e-9 * out.value;
  out.tail_bound = out.value * std::expm1(out.log_tail_bound);
  if (!out.consistent) {
    throw Error(ErrorKind::Internal, "kappa: correction-product and local-factor paths disagree");
  }
  return out;
}

CheckpointFile read_checkpoints(const std::filesystem::path& file) {
  std::ifstream in(file);
  if (!in) throw Error(ErrorKind::Io, "cannot read checkpoint file " + file.string());
  CheckpointFile out;
  std::string line;
  if (!std::getline(in, line) || line != kCheckpointHeader) {
    throw Error(ErrorKind::Io, "checkpoint file " + file.string() + " has an unexpected header");
  }
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::vector<std::string> cols;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) cols.push_back(cell);
    if (cols.size() != 6) throw Error(ErrorKind::Io, "malformed checkpoint row: " + line);
    Checkpoint c;
    try {
      c.N = std::stoll(cols[0]);
      c.mean = std::stod(cols[1]);
      c.mean_square = std::stod(cols[2]);
      c.wall_seconds = std::stod(cols[5]);
    } catch (const std::exception&) {
      throw Error(ErrorKind::Io, "malformed checkpoint row: " + line);
    }
    if (!out.rows.empty()) {
      if (cols[3] != out.strategy_tag || cols[4] != out.context_tag) {
        throw Error(ErrorKind::Io, "checkpoint file mixes strategies or contexts");
      }
      if (c.N <= out.rows.back().N) throw Error(ErrorKind::Io, "checkpoint N is not increasing");
    }
    out.strategy_tag = cols[3];
    out.context_tag = cols[4];
    out.rows.push_back(c);
  }
  return out;
}

EmpiricalSeries empirical(const GroupContext& ctx, std::int64_t N_max, std::int64_t stride,
                          const LStrategy& strategy, const EmpiricalOptions& opts) {
  strategy.validate();
  if (N_max < 3) fail("empirical: N_max must be >= 3");
  if (N_max > kMaxTrace) fail("empirical: N_max too large");
  if (stride < 1) fail("empirical: stride must be positive");
  if (opts.workers < 1 || opts.workers > 1024) fail("empirical: workers must be in 1..1024");
  if (opts.chunk < 1) fail("empirical: chunk must be positive");

  EmpiricalSeries out;
  out.context = ctx;
  out.strategy = strategy;
  out.strategy_tag = strategy.tag();
  if (opts.exact_below > 0) out.strategy_tag = "exact<=" + std::to_string(opts.exact_below) + "+" + out.strategy_tag;
  const std::string ctx_tag = ctx.tag();

  Checkpoint state{2, 0.0, 0.0, 0.0};
  std::FILE* csv = nullptr;
  if (opts.checkpoint_file) {
    const auto& path = *opts.checkpoint_file;
    const bool exists = std::filesystem::exists(path) && std::filesystem::file_size(path) > 0;
    if (exists && !opts.resume) {
      throw Error(ErrorKind::Io, "checkpoint file " + path.string() + " exists; resume it or choose another path");
    }
    if (exists) {
      const CheckpointFile prior = read_checkpoints(path);
      if (!prior.rows.empty()) {
        if (prior.strategy_tag != out.strategy_tag || prior.context_tag != ctx_tag) {
          fail("resume: checkpoint file was written for " + prior.strategy_tag + " / " + prior.context_tag);
        }
        out.checkpoints = prior.rows;
        state = prior.rows.back();
        out.resumed_from = state.N;
      }
    }
    csv = std::fopen(path.c_str(), "a");
    if (!csv) throw Error(ErrorKind::Io, "cannot open checkpoint file " + path.string());
    if (!exists) {
      std::fprintf(csv, "%s\n", kCheckpointHeader);
      std::fflush(csv);
    }
  } else if (opts.resume) {
    fail("empirical: resume needs a checkpoint file");
  }

  const auto t0 = std::chrono::steady_clock::now();
  const double wall_before = state.wall_seconds;
  auto elapsed = [&] { return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count(); };

  FactorCache shared_cache;
  FactorCache* cache = opts.reproducible ? nullptr : (opts.cache ? opts.cache : &shared_cache);
  const LStrategy exact = LStrategy::class_number();

  while (state.N < N_max) {
    std::int64_t target = (state.N / stride + 1) * stride;
    while (target <= 2) target += stride;
    target = std::min(target, N_max);

    const std::int64_t lo = state.N + 1;
    const std::int64_t nchunks = (target - lo + opts.chunk) / opts.chunk;
    std::vector<std::pair<double, double>> sums(nchunks);
    std::atomic<std::int64_t> next{0};
    std::atomic<bool> out_of_budget{false};
    std::atomic<bool> failed{false};
    std::string error_text;
    ErrorKind error_kind = ErrorKind::Internal;
    std::mutex error_mu;

    auto work = [&] {
      for (;;) {
        const std::int64_t k = next.fetch_add(1);
        if (k >= nchunks || failed.load()) return;
        if (opts.budget_seconds > 0 && elapsed() > opts.budget_seconds) {
          out_of_budget = true;
          return;
        }
        const std::int64_t a = lo + k * opts.chunk;
        const std::int64_t b = std::min(target, a + opts.chunk - 1);
        Neumaier s1, s2;
        try {
          for (std::int64_t t = std::max<std::int64_t>(a, 3); t <= b; ++t) {
            const double v = beta(t, ctx, (t <= opts.exact_below) ? exact : strategy, cache);
            s1.add(v);
            s2.add(static_cast<long double>(v) * v);
          }
        } catch (const Error& e) {
          std::lock_guard<std::mutex> lock(error_mu);
          error_text = e.what();
          error_kind = e.kind();
          failed = true;
          return;
        }
        sums[k] = {static_cast<double>(s1.value()), static_cast<double>(s2.value())};
      }
    };
    const int nthreads = static_cast<int>(std::min<std::int64_t>(opts.workers, nchunks));
    if (nthreads <= 1) {
      work();
    } else {
      std::vector<std::thread> pool;
      for (int i = 0; i < nthreads; ++i) pool.emplace_back(work);
      for (auto& th : pool) th.join();
    }
    if (failed) {
      if (csv) std::fclose(csv);
      throw Error(error_kind, error_text);
    }
    if (out_of_budget) {
      out.partial = true;
      break;
    }
    // fixed ascending combination, independent of the worker count
    Neumaier seg1, seg2;
    for (const auto& [x, y] : sums) {
      seg1.add(x);
      seg2.add(y);
    }
    const double prev_count = static_cast<double>(state.N - 2);
    const double count = static_cast<double>(target - 2);
    Checkpoint next_state;
    next_state.N = target;
    next_state.mean = (state.mean * prev_count + static_cast<double>(seg1.value())) / count;
    next_state.mean_square = (state.mean_square * prev_count + static_cast<double>(seg2.value())) / count;
    next_state.wall_seconds = wall_before + elapsed();
    state = next_state;
    out.checkpoints.push_back(state);
    if (csv) {
      std::fprintf(csv, "%lld,%.17g,%.17g,%s,%s,%.3f\n", static_cast<long long>(state.N), state.mean,
                   state.mean_square, out.strategy_tag.c_str(), ctx_tag.c_str(), state.wall_seconds);
      std::fflush(csv);
    }
    if (opts.on_checkpoint) opts.on_checkpoint(state);
  }
  if (csv) std::fclose(csv);
  return out;
}

std::vector<double> parseval_series(const GroupContext& ctx, std::int64_t denominator_bound, double tol) {
  if (denominator_bound < 1) fail("parseval: denominator bound must be positive");
  if (denominator_bound > 10000) fail("parseval: denominator bound above 1e4");
  CoefficientCache cache(ctx, tol);
  std::vector<double> out;
  out.reserve(denominator_bound);
  Neumaier total;
  for (std::int64_t b = 1; b <= denominator_bound; ++b) {
    if (b == 1) {
      total.add(1.0);
      out.push_back(static_cast<double>(total.value()));
      continue;
    }
    struct Part {
      std::int64_t p;
      int c;
      std::int64_t M;
      std::int64_t cofactor_inv;
    };
    std::vector<Part> parts;
    for (const auto& pp : factorize(b).factors) {
      const auto p = static_cast<std::int64_t>(pp.prime);
      std::int64_t M = 1;
      for (int i = 0; i < pp.exponent; ++i) M *= p;
      // inverse of b/M mod M
      const std::int64_t r = (b / M) % M;
      std::int64_t inv = 1;
      for (std::int64_t x = 1; x < M; ++x) {
        if ((r * x) % M == 1) {
          inv = x;
          break;
        }
      }
      parts.push_back({p, pp.exponent, M, inv});
    }
    for (std::int64_t a = 1; a < b; ++a) {
      if (gcd(a, b) != 1) continue;
      complex v{1.0, 0.0};
      for (const auto& part : parts) {
        v *= cache.local(part.p, part.c, (a % part.M) * part.cofactor_inv % part.M);
        if (v == complex{0.0, 0.0}) break;
      }
      total.add(std::norm(v));
    }
    out.push_back(static_cast<double>(total.value()));
  }
  return out;
}

double parseval_partial(const GroupContext& ctx, std::int64_t denominator_bound, double tol) {
  return parseval_series(ctx, denominator_bound, tol).back();
}

double seminorm_estimate(const GroupContext& ctx, std::int64_t P, double s, std::int64_t N) {
  if (!(s >= 1 && s <= 2)) fail("seminorm: s must lie in [1, 2]");
  if (N < 3) fail("seminorm: N must be >= 3");
  if (P < 2 || P < ctx.largest_prime()) fail("seminorm: prime bound must cover the context primes");
  Neumaier acc;
  const LStrategy exact = LStrategy::class_number();
  for (std::int64_t n = 3; n <= N; ++n) {
    const double d = beta(n, ctx, exact) - beta_truncated(n, P, ctx, false);
    acc.add(std::pow(std::fabs(d), s));
  }
  return static_cast<double>(std::pow(acc.value() / (N - 2), 1.0L / s));
}

}  // namespace geodesic
