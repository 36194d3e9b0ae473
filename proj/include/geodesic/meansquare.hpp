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
 * Mean squares of beta as Euler products, plus the empirical sweep.
 *
 * Tail: for odd p outside the context, 0 < log M_p <= M_p - 1 < 1/p^2, and
 * sum_{p > P} 1/p^2 <= 2.51012 / (P log P) from pi(x) < 1.25506 x / log x.
 */

#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "geodesic/lfunctions.hpp"
#include "geodesic/multiplicity.hpp"

namespace geodesic {

class FactorCache;

struct EulerProductResult {
  double value = 0;
  std::int64_t prime_bound = 0;
  double tail_bound = 0;      // |true - value| <= tail_bound
  double log_tail_bound = 0;  // bound on sum_{p > P} log M_p
  std::vector<std::pair<std::int64_t, double>> per_prime_factors;  // filled on request, p <= 100
  // kappa only: the same constant along the other path
  double cross_check = 0;
  bool consistent = true;
};

/// Upper bound on sum_{p > P} 1/p^2.
double prime_square_tail(std::int64_t P);

EulerProductResult c1(std::int64_t prime_bound = 100000, double tol = 1e-5, bool with_factors = false);

/// C_1 times the correction product; cross-checked against prod_{p <= P} M_p.
EulerProductResult kappa(const GroupContext& ctx, std::int64_t prime_bound = 100000, double tol = 1e-5,
                         bool with_factors = false);

/// Correction factor of a level or ramified prime relative to the generic M_p.
double kappa_correction(std::int64_t p, const GroupContext& ctx);

struct Checkpoint {
  std::int64_t N = 0;
  double mean = 0;
  double mean_square = 0;
  double wall_seconds = 0;
};

struct EmpiricalOptions {
  int workers = 1;
  bool reproducible = true;          // no shared factor cache
  FactorCache* cache = nullptr;      // shared cache when not reproducible; internal one if null
  double budget_seconds = 0;         // 0 = unlimited
  std::int64_t exact_below = 0;      // ClassNumber for t <= exact_below
  std::int64_t chunk = 512;
  std::optional<std::filesystem::path> checkpoint_file;  // append-only CSV
  bool resume = false;
  std::function<void(const Checkpoint&)> on_checkpoint;
};

struct EmpiricalSeries {
  GroupContext context;
  LStrategy strategy;
  std::string strategy_tag;
  std::vector<Checkpoint> checkpoints;
  bool partial = false;  // budget ran out before N_max
  std::int64_t resumed_from = 0;
};

EmpiricalSeries empirical(const GroupContext& ctx, std::int64_t N_max, std::int64_t stride,
                          const LStrategy& strategy, const EmpiricalOptions& opts = {});

inline constexpr const char* kCheckpointHeader = "N,mean,mean_square,strategy_tag,context_tag,wall_seconds";

struct CheckpointFile {
  std::string strategy_tag;
  std::string context_tag;
  std::vector<Checkpoint> rows;
};

CheckpointFile read_checkpoints(const std::filesystem::path& file);

/// Partial Parseval sums: element k is the mass over reduced a/b with b <= k + 1.
std::vector<double> parseval_series(const GroupContext& ctx, std::int64_t denominator_bound, double tol = 1e-12);
double parseval_partial(const GroupContext& ctx, std::int64_t denominator_bound, double tol = 1e-12);

/// (1/(N-2) sum_{2<n<=N} |beta(n) - beta_P(n)|^s)^{1/s}, beta by class numbers.
double seminorm_estimate(const GroupContext& ctx, std::int64_t P, double s, std::int64_t N);

}  // namespace geodesic
