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
#include <string>
#include <vector>

#include "skewlab/cfrac.hpp"
#include "skewlab/rational.hpp"

namespace skewlab::torus {

template <std::size_t D>
struct TorusPoint {
  std::array<Rational, D> c;

  TorusPoint() = default;
  /// Reduces every coordinate into [0, 1).
  explicit TorusPoint(std::array<Rational, D> coords) {
    for (std::size_t i = 0; i < D; ++i) c[i] = frac(coords[i]);
  }

  const Rational& operator[](std::size_t i) const { return c[i]; }
  bool operator==(const TorusPoint& other) const { return c == other.c; }
};

using TorusPoint2 = TorusPoint<2>;
using TorusPoint3 = TorusPoint<3>;

/// Sup-norm distance on the torus.
template <std::size_t D>
Rational sup_distance(const TorusPoint<D>& a, const TorusPoint<D>& b) {
  Rational best = 0;
  for (std::size_t i = 0; i < D; ++i) {
    Rational d = circle_distance(a[i], b[i]);
    if (d > best) best = d;
  }
  return best;
}

/// Closed axis-aligned square or rectangle on T^2 given by center and
/// half-sides. A half-side of 1/2 covers the whole circle in that direction.
struct Rect2 {
  TorusPoint2 center;
  std::array<Rational, 2> half;
  bool clipped = false;

  /// Error: "half-side out of range" unless 0 < h <= 1/2.
  static Rect2 make(const TorusPoint2& center, const Rational& h1, const Rational& h2);

  Rational side(std::size_t i) const { return 2 * half[i]; }
  Rational area() const { return side(0) * side(1); }
  bool contains(const TorusPoint2& p) const;
};

/// Multiplies both half-sides by `factor`, clipping at the whole circle and
/// setting the flag when that happens.
Rect2 enlarge_square(const Rect2& r, const Rational& factor);

/// Half-open dyadic cube I x R of side 2^-g.
struct DyadicCube3 {
  unsigned g = 0;
  std::array<std::uint64_t, 3> k{0, 0, 0};

  Rational side() const;
  Rational volume() const;
  /// Left endpoint of the interval in coordinate i.
  Rational lower(std::size_t i) const;
  /// Base-2 word of the first coordinate, most significant bit first.
  std::vector<int> word() const;
  /// Number of 0 symbols in word().
  unsigned zeros() const;
  bool contains(const TorusPoint3& p) const;
  /// k2 * 4^g + k3 * 2^g + k1: cubes sharing a square are contiguous.
  std::uint64_t index() const;

  bool operator==(const DyadicCube3& other) const { return g == other.g && k == other.k; }
};

/// Error: "dyadic index out of range" unless every index is below 2^g.
DyadicCube3 dyadic_cube(unsigned g, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3);
/// Inverse of DyadicCube3::index.
DyadicCube3 dyadic_cube_from_index(unsigned g, std::uint64_t index);

/// Exact table of k alpha mod 1 for k = 0..N, stored as numerators over the
/// denominators of the truncated alpha.
class OrbitTable {
 public:
  std::size_t length() const { return num_[0].size() - 1; }
  const BigInt& denominator(std::size_t c) const { return den_[c]; }
  const BigInt& numerator(std::size_t c, std::size_t k) const { return num_[c].at(k); }
  TorusPoint2 point(std::size_t k) const;

 private:
  friend OrbitTable rotation_orbit(const cfrac::AlphaPair& alpha, std::size_t N);
  std::array<BigInt, 2> den_;
  std::array<std::vector<BigInt>, 2> num_;
};

/// Error: "orbit would alias at truncation" when N >= min denominator.
OrbitTable rotation_orbit(const cfrac::AlphaPair& alpha, std::size_t N);

enum class DiscrepancyMode { exact, grid };

struct Discrepancy {
  DiscrepancyMode mode = DiscrepancyMode::exact;
  Rational value;        // exact sup (exact mode) or the grid sup (grid mode)
  Rational error_bound;  // 0 in exact mode, 4/m in grid mode
  std::size_t grid = 0;
};

/// Largest prefix accepted in exact mode.
inline constexpr std::size_t kExactDiscrepancyLimit = 512;

/// Sup over non-wrapping axis-aligned rectangles of |count/n - area| for the
/// first n orbit points. Exact mode scans rectangles with edges on sample
/// coordinates plus {0, 1}, closed for the excess and open for the deficit.
/// Grid mode scans half-open rectangles with edges on the m x m grid; the
/// true value lies in [value, value + 4/m].
/// Errors: "empty prefix", "prefix exceeds orbit", "prefix too long for exact mode".
Discrepancy rectangle_discrepancy(const OrbitTable& orbit, std::size_t n, DiscrepancyMode mode,
                                  std::size_t m = 1024, unsigned threads = 1);

}  // namespace skewlab::torus
