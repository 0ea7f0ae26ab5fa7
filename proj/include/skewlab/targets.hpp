// Copyright 2026 The skewlab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "skewlab/cfrac.hpp"
#include "skewlab/fixed_point.hpp"
#include "skewlab/torus.hpp"

namespace skewlab::targets {

using torus::TorusPoint3;

/// Balls B(y, n^-delta) in the sup norm, tested for n0 <= n <= horizon.
struct TargetSpec {
  TorusPoint3 center;
  Rational delta;
  std::uint64_t n0 = 1;
  std::uint64_t horizon = 1;
};

/// Default target center.
TorusPoint3 default_center();

/// sum_{n <= N} min(1, (2 n^-delta)^3). Exact when 3 delta is an integer,
/// otherwise lower <= true value <= upper with outward-rounded terms.
struct BcSum {
  bool exact = true;
  Rational lower;
  Rational upper;
  const Rational& value() const { return lower; }
};

BcSum bc_partial_sum(const Rational& delta, std::uint64_t N);

/// Upper bound on 8 ln N - 9, via directed rounding.
Rational eight_log_minus_nine_upper(std::uint64_t N);

enum class SystemKind { skew, baseline };

/// One start: binary digits of every base coordinate (the skew system reads
/// one stream, the baseline reads three) and 128-bit fiber coordinates.
struct Start {
  std::array<std::vector<std::uint64_t>, 3> words;  // bit i of stream c: words[c][i / 64] >> (63 - i % 64)
  std::array<u128, 2> fiber{0, 0};
};

/// Draws the start with index `index` from the stream of `seed`.
Start draw_start(SystemKind kind, std::uint64_t seed, std::uint64_t index, std::uint64_t horizon);

struct HitReport {
  std::vector<std::uint64_t> hits;       // decided hits in [n0, horizon], increasing
  std::vector<std::uint64_t> ambiguous;  // too close to the boundary to decide
};

/// Precomputed floor(2^128 n^-delta) for n in [n0, horizon], saturated at 2^128 - 1.
class RadiusTable {
 public:
  RadiusTable(const Rational& delta, std::uint64_t n0, std::uint64_t horizon);
  std::uint64_t n0() const { return n0_; }
  std::uint64_t horizon() const { return horizon_; }
  /// Floor of 2^128 r_n, and whether that floor is exact.
  u128 floor_at(std::uint64_t n) const { return lo_[n - n0_]; }
  bool exact_at(std::uint64_t n) const { return exact_[n - n0_] != 0; }

 private:
  std::uint64_t n0_;
  std::uint64_t horizon_;
  std::vector<u128> lo_;
  std::vector<std::uint8_t> exact_;
};

/// All n in [n0, horizon] with |T^n(start) - y|_inf <= n^-delta. Fiber
/// values carry the truncation error of alpha; undecidable cases are
/// reported separately.
HitReport hit_sequence(SystemKind kind, const cfrac::AlphaPair& alpha, const Start& start, const TargetSpec& target,
                       const RadiusTable& radii);

HitReport hit_sequence(SystemKind kind, const cfrac::AlphaPair& alpha, const Start& start, const TargetSpec& target);

struct EnsembleRow {
  std::uint64_t horizon = 0;
  Rational fraction;       // starts with a hit in [n0, horizon]
  Rational mean_hits;      // hits in [n0, horizon] per start
  BcSum bc;                // sum over n <= horizon
  std::uint64_t ambiguous = 0;
};

struct EnsembleConfig {
  SystemKind kind = SystemKind::skew;
  std::uint64_t starts = 1;
  std::uint64_t seed = 0;
  std::vector<std::uint64_t> horizons;
  unsigned threads = 1;
};

/// Per-horizon statistics over `starts` seeded starts. The target horizon is
/// ignored in favor of the largest configured horizon.
std::vector<EnsembleRow> ensemble_fraction(const cfrac::AlphaPair& alpha, const TargetSpec& target,
                                           const EnsembleConfig& config);

}  // namespace skewlab::targets
