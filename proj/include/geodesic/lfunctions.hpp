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

#include <cstdint>
#include <string>
#include <vector>

namespace geodesic {

/// chi_D(n) = (D/n); D must be 0 or 1 mod 4.
int chi(std::int64_t D, std::int64_t n);

struct LStrategy {
  enum class Kind { ClassNumber, LogSin, SmoothedSeries, EulerTruncated };

  Kind kind = Kind::SmoothedSeries;
  double smoothing_scale = 2000.0;
  std::int64_t cutoff = 50000;
  std::int64_t prime_bound = 1000;

  static LStrategy class_number() { return {Kind::ClassNumber}; }
  static LStrategy log_sin() { return {Kind::LogSin}; }
  static LStrategy smoothed(double scale = 2000.0, std::int64_t cutoff = 50000) {
    return {Kind::SmoothedSeries, scale, cutoff};
  }
  static LStrategy euler(std::int64_t bound) { return {Kind::EulerTruncated, 2000.0, 50000, bound}; }

  void validate() const;
  /// "classnumber", "logsin", "smoothed:2000:50000", "euler:1000"
  std::string tag() const;
  static LStrategy parse(const std::string& text);
};

inline constexpr std::int64_t kLogSinMax = 1000000;

double l_one(std::int64_t D, const LStrategy& s);

/// Smoothed sum with explicit knobs; shares the weight table across calls.
double l_one_smoothed(std::int64_t D, double scale, std::int64_t cutoff);
double l_one_log_sin(std::int64_t D);
double l_one_euler(std::int64_t D, std::int64_t prime_bound);

struct StrategyPair {
  LStrategy first;
  LStrategy second;
  double tolerance;
};

struct PairDeviation {
  std::string first;
  std::string second;
  double tolerance = 0;
  double max_deviation = 0;
  std::int64_t worst_D = 0;
  std::int64_t count = 0;
  bool flagged = false;
};

struct CrossValidation {
  std::int64_t D_max = 0;
  std::vector<std::int64_t> discriminants;
  std::vector<PairDeviation> pairs;
  bool ok() const;
};

struct CrossValidateOptions {
  bool fundamental_only = false;
  std::vector<StrategyPair> pairs = {
      {LStrategy::class_number(), LStrategy::log_sin(), 1e-8},
      {LStrategy::class_number(), LStrategy::smoothed(2000.0, 50000), 1e-2},
  };
};

/// Max pairwise deviation over every non-square discriminant 1 < D <= D_max.
CrossValidation cross_validate(std::int64_t D_max, const CrossValidateOptions& opts = {});

}  // namespace geodesic
