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
 * Acceptance suites, numbered 1..10. Each returns one CheckResult; the
 * empirical suite may pass with a warning (mean-square band) and attaches
 * its convergence CSV.
 */

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace geodesic {

struct CheckResult {
  int criterion = 0;
  std::string suite;
  bool passed = false;
  bool warning = false;
  std::string detail;
  double seconds = 0;
  std::string attachment;  // e.g. the sweep CSV path

  std::string line() const;
};

struct VerifyOptions {
  int workers = 1;
  std::int64_t sweep_n_max = 100000;
  std::int64_t sweep_stride = 1000;
  double sweep_budget_seconds = 1800;
  std::optional<std::filesystem::path> sweep_csv;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool ok() const;
};

const std::vector<std::string>& suite_names();

/// Accepts a suite name or its number ("7").
CheckResult run_suite(const std::string& name, const VerifyOptions& opts = {});

VerifyReport run_verify(const std::optional<std::string>& suite = std::nullopt, const VerifyOptions& opts = {});

}  // namespace geodesic
