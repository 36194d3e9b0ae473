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
 * Real quadratic orders of discriminant D = d f^2 > 0.
 *
 * Units come from the continued fraction of the reduced irrational
 * theta = (b + sqrt(D)) / 2, b the largest integer below sqrt(D) with
 * b = D (mod 2). Its period yields the fundamental unit of Z[theta], which
 * is the order of discriminant D; odd periods give norm -1 and are squared.
 *
 * Order membership: write eps = (x + y sqrt(d)) / 2 = u + v w with
 * w = (d + sqrt(d)) / 2, so v = y and u = (x - d y) / 2. The order of
 * conductor f is Z + f w Z, hence eps lies in it iff f | y.
 */

#include <cstdint>
#include <optional>
#include <vector>

#include <gmpxx.h>

namespace geodesic {

/// Discriminant of the order of conductor f in Q(sqrt d).
struct OrderDiscriminant {
  std::int64_t d;  // fundamental
  std::int64_t f;  // conductor
  std::int64_t D;  // d f^2

  static OrderDiscriminant from(std::int64_t D);
  static OrderDiscriminant of(std::int64_t d, std::int64_t f);
};

/// (x + y sqrt(D)) / 2 with x^2 - D y^2 = 4 and y > 0 minimal.
struct PellUnit {
  std::int64_t D;
  mpz_class x;
  mpz_class y;

  double log() const;
};

struct Regulator {
  std::int64_t D;
  double log_epsilon;
};

/// One period of the continued fraction of (b + sqrt(D)) / 2.
struct UnitPeriod {
  std::int64_t D;
  std::int64_t b;
  std::vector<std::int64_t> partial_quotients;
  double log_unit;  // log of the norm +1 unit, accumulated from complete quotients

  bool odd() const { return partial_quotients.size() % 2 == 1; }
};

UnitPeriod unit_period(std::int64_t D);

/// Norm +1 fundamental unit of the order of discriminant D (any non-square D > 0).
PellUnit order_unit(std::int64_t D);

PellUnit proper_fundamental_unit(std::int64_t d);

/// (x mod M, y mod M) of the norm +1 unit of discriminant D, never leaving 64 bits.
std::pair<std::int64_t, std::int64_t> unit_residues(std::int64_t D, std::int64_t modulus);

/// Smallest k with eps_d^k in the order of conductor f.
std::int64_t unit_index(std::int64_t d, std::int64_t f);

struct RegulatorOptions {
  // Units wider than this are never materialized; the log is accumulated
  // from the complete quotients instead.
  int max_unit_bits = 4096;
};

Regulator regulator(std::int64_t D, const RegulatorOptions& opts = {});

/// Primitive indefinite form a x^2 + b x y + c y^2.
struct QuadraticForm {
  std::int64_t a, b, c;
  auto operator<=>(const QuadraticForm&) const = default;
};

bool is_reduced(const QuadraticForm& q, std::int64_t D);
QuadraticForm rho(const QuadraticForm& q, std::int64_t D);
std::vector<QuadraticForm> reduced_forms(std::int64_t D);

/// Number of cycles of reduced primitive forms of discriminant D.
std::int64_t narrow_class_number(std::int64_t D);

/// h(D) log eps_D / sqrt(D), i.e. L(1, chi_D) by the class number formula.
double class_number_L(std::int64_t D);

struct TraceNorm {
  double norm;        // ((|t| + sqrt(t^2-4)) / 2)^2
  double sqrt_diff;   // N^{1/2} - N^{-1/2} = sqrt(t^2 - 4)
};

TraceNorm norm_of_trace(std::int64_t t);

}  // namespace geodesic
