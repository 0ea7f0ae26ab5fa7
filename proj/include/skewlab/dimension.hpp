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
#include <optional>
#include <string>
#include <vector>

#include "skewlab/cfrac.hpp"

namespace skewlab::dimension {

/// Cut-offs at level n:
///   Q_{2n} = q_n q'_n,      P_{2n} = ceil(Q_{2n}^theta),
///   Q_{2n+1} = q_{n+1} q'_n, P_{2n+1} = ceil(Q_{2n+1}^beta),
///   Q_{2n+2} = q_{n+1} q'_{n+1}.
struct BlockLevel {
  std::size_t n = 0;
  BigInt Q_even, P_even, Q_odd, P_odd, Q_next;
};

struct BlockSchedule {
  cfrac::AlphaPair alpha;
  Rational theta;
  Rational beta;
  std::vector<BlockLevel> levels;  // levels[i].n == i + 1

  const BlockLevel& level(std::size_t n) const;
};

/// Errors: "theta outside (12/5, 46/15)", "beta outside (12/5, 4)",
/// "insufficient depth", "interleaving fails at level n".
BlockSchedule build_schedule(const cfrac::AlphaPair& alpha, const Rational& theta, const Rational& beta,
                             std::size_t max_level);

/// The four families of orbit times covered at each level.
enum class Regime { even_Q, even_P, odd_Q, odd_P };
inline constexpr std::array<Regime, 4> kRegimes{Regime::even_Q, Regime::even_P, Regime::odd_Q, Regime::odd_P};
std::string regime_name(Regime r);

/// Geometry of one regime at one level: balls B(k alpha, Y^-1/3) for
/// k <= X are moved onto the orbit of a rational approximant, whose points
/// lie on `lines` parallel lines.
struct RegimeGeometry {
  BigInt k_first;           // first orbit time of the family
  BigInt X;                 // last orbit time of the family
  BigInt Y;                 // ball radius is Y^-1/3
  std::array<Rational, 2> approximant;
  BigInt lines;
  bool vertical = true;     // lines x = j/q (true) or y = j/q' (false)
  BigInt line_denominator;
};

RegimeGeometry regime_geometry(const BlockSchedule& schedule, std::size_t n, Regime regime);

/// X |alpha - approximant|_inf <= Y^-1/3, with the truncation radius of alpha
/// on both sides. Throws IndeterminateError ("indeterminate, deepen alpha")
/// when the radius straddles the threshold.
bool containment_check(const BlockSchedule& schedule, std::size_t n, Regime regime);

/// Balls per line, ceil(Y^1/3) + 1, and their sup-norm diameter min(4 Y^-1/3, 1/2).
BigInt balls_per_line(const BlockSchedule& schedule, std::size_t n, Regime regime);

/// Upper bound on the s-cost lines * balls * diam^s of the cover.
/// Errors: "s outside (1, 2)", "missing containment certificate".
Rational cover_cost(const BlockSchedule& schedule, std::size_t n, Regime regime, const Rational& s);

struct CoverBall {
  std::array<Rational, 2> center;
  Rational radius;  // lower bound on 2 Y^-1/3 used for coverage, diameter from the exact count
};

/// Explicit cover of the line neighborhoods (feasible at small levels only).
/// Error: "cover too large to enumerate".
std::vector<CoverBall> enumerate_cover(const BlockSchedule& schedule, std::size_t n, Regime regime,
                                       std::uint64_t limit = 1u << 20);

/// Sum of diam^s over an explicit cover, each term rounded outward.
Rational enumerated_cost(const std::vector<CoverBall>& cover, const BlockSchedule& schedule, std::size_t n,
                         Regime regime, const Rational& s);

/// Checks that every orbit ball B(k alpha, Y^-1/3) with k in the family
/// (sampled at its center and corners) lies within 2 Y^-1/3 of a line.
/// Returns the number of sampled points outside, 0 on success.
std::uint64_t direct_line_check(const BlockSchedule& schedule, std::size_t n, Regime regime,
                                std::uint64_t max_points = 1u << 16);

/// 1 - (5/3)(s-1) for the Q regimes, 4 - (5 e/3)(s-1) with e = theta or beta
/// for the P regimes. The family's cost decays when this is negative.
Rational tail_exponent(const BlockSchedule& schedule, Regime regime, const Rational& s);

struct RegimeBound {
  Regime regime = Regime::even_Q;
  std::optional<Rational> s;            // smallest certified grid point
  std::vector<bool> containment;        // per level
  std::vector<Rational> costs;          // per level at s
  std::vector<Rational> tested;         // grid points rejected before s
  std::string failure;                  // "no certificate on grid" when s is empty
};

struct DimensionBound {
  std::array<RegimeBound, 4> regimes;
  std::optional<Rational> overall;  // max over regimes
  std::optional<Rational> product;  // 1 + overall
};

/// Smallest grid s = 1 + k step per regime with certified level costs,
/// halving ratios between consecutive levels, and a negative tail exponent.
/// Error: "at least two levels required".
DimensionBound certify_dimension_bound(const BlockSchedule& schedule, const Rational& step, unsigned threads = 1);

struct BoxCount {
  std::vector<unsigned> exponents;       // epsilon = 2^-j
  std::vector<std::uint64_t> counts;
  double slope = 0.0;
};

/// Boxes of side 2^-j meeting the union of B(k alpha, k^-1/3), K_min <= k <= K_max.
/// Descriptive only. Errors: "at least three epsilons required", "epsilons must decrease".
BoxCount box_counting_estimate(const cfrac::AlphaPair& alpha, std::uint64_t k_min, std::uint64_t k_max,
                               const std::vector<unsigned>& exponents, unsigned threads = 1);

/// Same estimator on explicit sup-norm balls (center, radius) in double precision.
BoxCount box_counting_balls(const std::vector<std::array<double, 3>>& balls, const std::vector<unsigned>& exponents,
                            unsigned threads = 1);

}  // namespace skewlab::dimension
