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
#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "skewlab/rational.hpp"

namespace skewlab::cfrac {

/// Finite continued fraction 1/(a1 + 1/(a2 + ...)) together with its
/// convergents p_n/q_n. Levels are 1-based; p(0)/q(0) = 0/1 and
/// p(-1)/q(-1) = 1/0 are the recursion seeds.
class ContinuedFraction {
 public:
  ContinuedFraction() = default;

  std::size_t depth() const { return quotients_.size(); }
  const std::vector<BigInt>& quotients() const { return quotients_; }

  const BigInt& quotient(std::size_t n) const;
  const BigInt& p(long n) const;
  const BigInt& q(long n) const;
  Rational convergent(std::size_t n) const;

  /// Deepest convergent p_m/q_m.
  Rational value() const { return convergent(depth()); }

  bool operator==(const ContinuedFraction& other) const { return quotients_ == other.quotients_; }

 private:
  friend ContinuedFraction convergents(std::span<const BigInt> quotients);

  std::vector<BigInt> quotients_;
  // Index i holds level i - 1, so index 0 is level -1.
  std::vector<BigInt> p_;
  std::vector<BigInt> q_;
};

/// Runs the three-term recursion. Errors: "no quotients", "invalid quotient".
ContinuedFraction convergents(std::span<const BigInt> quotients);

struct GapBound {
  Rational gap;    // |p_m/q_m - p_n/q_n|, the deepest convergent standing in for the limit
  Rational bound;  // 1/(q_n q_{n+1})
};

/// Error: "insufficient depth" when n + 1 > depth.
GapBound approximation_gap(const ContinuedFraction& cf, std::size_t n);

/// A rotation vector alpha = (alpha_1, alpha_2) stored as a pair of
/// continued fractions truncated at a common depth. `value[c]` is the
/// deepest convergent and |alpha_c - value[c]| <= radius[c].
struct AlphaPair {
  ContinuedFraction cf1;
  ContinuedFraction cf2;
  std::size_t depth = 0;
  std::array<Rational, 2> value;
  std::array<Rational, 2> radius;

  /// Same alpha seen through its level-`level` convergents, with the exact
  /// radius 1/(q_level q_{level+1}) for every level below the depth.
  AlphaPair at_level(std::size_t level) const;

  bool operator==(const AlphaPair& other) const {
    return cf1 == other.cf1 && cf2 == other.cf2 && depth == other.depth && value == other.value &&
           radius == other.radius;
  }
};

/// Builds the pair from two quotient lists of equal length. Radii at the
/// deepest level use the window lower bounds of the next level,
/// q_{m+1} >= q'_m^4 and q'_{m+1} >= q_{m+1}^4.
AlphaPair make_alpha_pair(std::span<const BigInt> quotients1, std::span<const BigInt> quotients2);

/// An alpha known only through explicit rational values and radii (no
/// continued-fraction data). Used for fabricated or degenerate vectors.
AlphaPair make_rational_alpha(const Rational& v1, const Rational& v2, const Rational& r1 = 0,
                              const Rational& r2 = 0);

/// Greedy synthesis of a pair satisfying, for every level n <= target_depth,
///   q_n^4 <= q'_n <= 4 q_n^4   and   q'_{n-1}^4 <= q_n <= 4 q'_{n-1}^4.
/// Error: "synthesis infeasible at level n".
AlphaPair synthesize_alpha_pair(std::size_t target_depth, std::optional<BigInt> seed_a1 = std::nullopt);

/// First violated window inequality, or nullopt when every level passes.
/// Recomputes the q-sequences from the quotients.
std::optional<std::string> check_windows(const AlphaPair& alpha);

struct ProbeRecord {
  std::array<std::int64_t, 2> k;
  Rational distance;      // nearest-integer distance of k . alpha (truncated), exact
  double exponent;        // log(1/distance) / log |k|_inf, +inf when degenerate
  bool degenerate;        // distance == 0
};

struct LinearTypeProbe {
  std::uint64_t bound = 0;
  double trial_gamma = 16.0;
  std::vector<ProbeRecord> records;  // frontier of new minima of d * |k|^gamma
  double max_exponent = 0.0;         // over all nondegenerate k with |k|_inf >= 2
  std::array<std::int64_t, 2> argmax{0, 0};
  std::size_t degenerate_count = 0;
};

/// Evaluates one integer vector exactly.
ProbeRecord probe_vector(const AlphaPair& alpha, std::array<std::int64_t, 2> k);

/// Exhaustive scan of 0 < |k|_inf <= K (one of each +-k pair).
/// Error: "truncation too coarse for K".
LinearTypeProbe linear_type_scan(const AlphaPair& alpha, std::uint64_t K, double trial_gamma = 16.0,
                                 unsigned threads = 1);

}  // namespace skewlab::cfrac
