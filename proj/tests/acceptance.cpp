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

// Acceptance run: one line per criterion, nonzero exit if any hard gate fails.

#include <cstdio>
#include <cstdlib>
#include <cstring>
#include <string>

#include "geodesic/verify.hpp"

int main(int argc, char** argv) {
  geodesic::VerifyOptions opts;
  for (int i = 1; i < argc; ++i) {
    if (!std::strcmp(argv[i], "--sweep-csv") && i + 1 < argc) {
      opts.sweep_csv = argv[++i];
    } else if (!std::strcmp(argv[i], "--sweep-n") && i + 1 < argc) {
      opts.sweep_n_max = std::atoll(argv[++i]);
    } else if (!std::strcmp(argv[i], "--workers") && i + 1 < argc) {
      opts.workers = std::atoi(argv[++i]);
    } else {
      std::fprintf(stderr, "usage: %s [--sweep-csv FILE] [--sweep-n N] [--workers W]\n", argv[0]);
      return 2;
    }
  }
  int failed = 0, warned = 0;
  for (const auto& name : geodesic::suite_names()) {
    const geodesic::CheckResult r = geodesic::run_suite(name, opts);
    std::printf("%s\n", r.line().c_str());
    std::fflush(stdout);
    failed += !r.passed;
    warned += r.warning;
  }
  std::printf("%d of %zu criteria failed, %d warning(s)\n", failed, geodesic::suite_names().size(), warned);
  return failed ? 1 : 0;
}
