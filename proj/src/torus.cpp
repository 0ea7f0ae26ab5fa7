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

#include "skewlab/torus.hpp"

#include <algorithm>

#include "skewlab/fixed_point.hpp"
#include "skewlab/parallel.hpp"
#include "skewlab/simd/kernels.hpp"

namespace skewlab::torus {

Rect2 Rect2::make(const TorusPoint2& center, const Rational& h1, const Rational& h2) {
  const Rational half_circle(1, 2);
  if (h1 <= 0 || h2 <= 0 || h1 > half_circle || h2 > half_circle) throw Error("half-side out of range");
  Rect2 r;
  r.center = center;
  r.half = {h1, h2};
  return r;
}

bool Rect2::contains(const TorusPoint2& p) const {
  for (std::size_t i = 0; i < 2; ++i) {
    if (circle_distance(p[i], center[i]) > half[i]) return false;
  }
  return true;
}

Rect2 enlarge_square(const Rect2& r, const Rational& factor) {
  if (factor <= 0) throw Error("enlargement factor must be positive");
  Rect2 out = r;
  const Rational half_circle(1, 2);
  for (auto& h : out.half) {
    h *= factor;
    if (h > half_circle) {
      h = half_circle;
      out.clipped = true;
    }
  }
  return out;
}

Rational DyadicCube3::side() const { return Rational(BigInt(1), pow2(g)); }

Rational DyadicCube3::volume() const { return Rational(BigInt(1), pow2(3UL * g)); }

Rational DyadicCube3::lower(std::size_t i) const {
  Rational r(BigInt(static_cast<unsigned long>(k[i])), pow2(g));
  r.canonicalize();
  return r;
}

std::vector<int> DyadicCube3::word() const {
  std::vector<int> w(g);
  for (unsigned i = 0; i < g; ++i) w[i] = static_cast<int>((k[0] >> (g - 1 - i)) & 1U);
  return w;
}

unsigned DyadicCube3::zeros() const {
  unsigned ones = static_cast<unsigned>(__builtin_popcountll(k[0]));
  return g - ones;
}

bool DyadicCube3::contains(const TorusPoint3& p) const {
  for (std::size_t i = 0; i < 3; ++i) {
    Rational lo = lower(i);
    if (p[i] < lo || p[i] >= lo + side()) return false;
  }
  return true;
}

std::uint64_t DyadicCube3::index() const { return (k[1] << (2 * g)) | (k[2] << g) | k[0]; }

DyadicCube3 dyadic_cube(unsigned g, std::uint64_t k1, std::uint64_t k2, std::uint64_t k3) {
  if (g > 20) throw Error("dyadic generation too large");
  const std::uint64_t limit = std::uint64_t{1} << g;
  if (k1 >= limit || k2 >= limit || k3 >= limit) throw Error("dyadic index out of range");
  DyadicCube3 cube;
  cube.g = g;
  cube.k = {k1, k2, k3};
  return cube;
}

DyadicCube3 dyadic_cube_from_index(unsigned g, std::uint64_t index) {
  if (g > 20) throw Error("dyadic generation too large");
  const std::uint64_t mask = (std::uint64_t{1} << g) - 1;
  if (index >> (3 * g) != 0) throw Error("dyadic index out of range");
  return dyadic_cube(g, index & mask, index >> (2 * g), (index >> g) & mask);
}

TorusPoint2 OrbitTable::point(std::size_t k) const {
  Rational x(num_[0].at(k), den_[0]);
  Rational y(num_[1].at(k), den_[1]);
  x.canonicalize();
  y.canonicalize();
  return TorusPoint2({x, y});
}

OrbitTable rotation_orbit(const cfrac::AlphaPair& alpha, std::size_t N) {
  if (N == 0) throw Error("orbit length must be positive");
  OrbitTable table;
  for (std::size_t c = 0; c < 2; ++c) {
    const Rational v = frac(alpha.value[c]);
    table.den_[c] = v.get_den();
  }
  const BigInt smallest = std::min(table.den_[0], table.den_[1]);
  if (BigInt(static_cast<unsigned long>(N)) >= smallest) throw Error("orbit would alias at truncation");
  for (std::size_t c = 0; c < 2; ++c) {
    const Rational v = frac(alpha.value[c]);
    const BigInt& p = v.get_num();
    const BigInt& q = table.den_[c];
    auto& nums = table.num_[c];
    nums.reserve(N + 1);
    BigInt acc = 0;
    for (std::size_t k = 0; k <= N; ++k) {
      nums.push_back(acc);
      acc += p;
      if (acc >= q) acc -= q;
    }
  }
  return table;
}

namespace {

// Points of the prefix as indices into the sorted distinct edge lists.
struct EdgeGrid {
  std::vector<BigInt> xs;                       // distinct x numerators plus 0 and q1
  std::vector<BigInt> ys;                       // distinct y numerators plus 0 and q2
  std::vector<std::vector<std::size_t>> by_x;  // y indices of points sitting on xs[i]
};

EdgeGrid build_edges(const OrbitTable& orbit, std::size_t n) {
  EdgeGrid g;
  auto distinct = [&](std::size_t c) {
    std::vector<BigInt> v{BigInt(0), orbit.denominator(c)};
    for (std::size_t k = 0; k < n; ++k) v.push_back(orbit.numerator(c, k));
    std::sort(v.begin(), v.end());
    v.erase(std::unique(v.begin(), v.end()), v.end());
    return v;
  };
  g.xs = distinct(0);
  g.ys = distinct(1);
  g.by_x.resize(g.xs.size());
  for (std::size_t k = 0; k < n; ++k) {
    auto xi = std::lower_bound(g.xs.begin(), g.xs.end(), orbit.numerator(0, k)) - g.xs.begin();
    auto yi = std::lower_bound(g.ys.begin(), g.ys.end(), orbit.numerator(1, k)) - g.ys.begin();
    g.by_x[static_cast<std::size_t>(xi)].push_back(static_cast<std::size_t>(yi));
  }
  return g;
}

template <class Int>
Int to_int(const BigInt& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else {
    return static_cast<Int>(to_u128(v));
  }
}

template <class Int>
BigInt to_big(const Int& v) {
  if constexpr (std::is_same_v<Int, BigInt>) {
    return v;
  } else {
    return v < 0 ? BigInt(-from_u128(static_cast<u128>(-v))) : from_u128(static_cast<u128>(v));
  }
}

// Best scaled excess and deficit over rectangles whose left edge is xs[i].
// Scaling: n * q1 * q2 * (count/n - area) = count * q1 q2 - n * wx * wy.
template <class Int>
std::pair<Int, Int> exact_column(const EdgeGrid& g, const std::vector<Int>& xs, const std::vector<Int>& gaps,
                                 const Int& scale, const Int& n, std::size_t i) {
  const std::size_t ny = g.ys.size();
  std::vector<Int> closed(ny, Int(0));
  std::vector<Int> open(ny, Int(0));
  Int best_over(-1);
  Int best_under(-1);
  bool have_under = false;
  for (std::size_t j = i; j < xs.size(); ++j) {
    for (std::size_t y : g.by_x[j]) closed[y] += scale;
    if (j > i + 1) {
      for (std::size_t y : g.by_x[j - 1]) open[y] += scale;
    }
    const Int nw = n * (xs[j] - xs[i]);
    // Closed rectangles: E[b] = cnt[b] + max(0, E[b-1] - nw * gap[b]).
    Int run = closed[0];
    Int best = run;
    for (std::size_t b = 1; b < ny; ++b) {
      Int carry = run - nw * gaps[b];
      run = closed[b] + (carry > 0 ? carry : Int(0));
      if (run > best) best = run;
    }
    if (best > best_over) best_over = best;
    if (j == i) continue;
    // Open rectangles (ys[a], ys[b]): F[b] = nw * gap[b] + max(0, F[b-1] - cnt[b-1]).
    Int frun = nw * gaps[1];
    Int fbest = frun;
    for (std::size_t b = 2; b < ny; ++b) {
      Int carry = frun - open[b - 1];
      frun = nw * gaps[b] + (carry > 0 ? carry : Int(0));
      if (frun > fbest) fbest = frun;
    }
    if (!have_under || fbest > best_under) {
      best_under = fbest;
      have_under = true;
    }
  }
  return {best_over, best_under};
}

template <class Int>
Rational exact_discrepancy(const OrbitTable& orbit, std::size_t n, unsigned threads) {
  EdgeGrid g = build_edges(orbit, n);
  std::vector<Int> xs;
  for (const auto& x : g.xs) xs.push_back(to_int<Int>(x));
  std::vector<Int> gaps(g.ys.size(), Int(0));
  for (std::size_t b = 1; b < g.ys.size(); ++b) gaps[b] = to_int<Int>(g.ys[b] - g.ys[b - 1]);
  const Int scale = to_int<Int>(orbit.denominator(0) * orbit.denominator(1));
  const Int nn = to_int<Int>(BigInt(static_cast<unsigned long>(n)));

  std::vector<std::pair<Int, Int>> per_column(xs.size());
  parallel_for(xs.size(), threads, [&](std::size_t i) { per_column[i] = exact_column<Int>(g, xs, gaps, scale, nn, i); });
  Int best(0);
  for (const auto& [over, under] : per_column) {
    if (over > best) best = over;
    if (under > best) best = under;
  }
  Rational d(to_big<Int>(best), orbit.denominator(0) * orbit.denominator(1) * static_cast<unsigned long>(n));
  d.canonicalize();
  return d;
}

Discrepancy grid_discrepancy(const OrbitTable& orbit, std::size_t n, std::size_t m, unsigned threads) {
  if (m < 1 || m > 4096) throw Error("grid size out of range");
  const auto mm = static_cast<std::int64_t>(m);
  const auto nn = static_cast<std::int64_t>(n);
  // Cell weights count * m^2 - n, so a union of cells scores n m^2 (count/n - area).
  std::vector<std::int64_t> weight(m * m, -nn);
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t cell[2];
    for (std::size_t c = 0; c < 2; ++c) {
      BigInt scaled = orbit.numerator(c, k) * static_cast<unsigned long>(m);
      BigInt idx;
      mpz_fdiv_q(idx.get_mpz_t(), scaled.get_mpz_t(), orbit.denominator(c).get_mpz_t());
      cell[c] = static_cast<std::size_t>(idx.get_ui());
    }
    weight[cell[0] * m + cell[1]] += mm * mm;
  }
  // Column-major prefix over rows: rows are x cells, columns are y cells.
  const std::size_t stride = m + 1;
  std::vector<std::int64_t> prefix(m * stride, 0);
  for (std::size_t c = 0; c < m; ++c) {
    std::int64_t acc = 0;
    for (std::size_t r = 0; r < m; ++r) {
      prefix[c * stride + r] = acc;
      acc += weight[r * m + c];
    }
    prefix[c * stride + m] = acc;
  }
  simd::SlabFn kernel = simd::slab_extrema_fn();
  std::vector<simd::SlabExtrema> per_top(m);
  parallel_for(m, threads, [&](std::size_t t) {
    std::vector<std::int64_t> scratch(4 * m);
    per_top[t] = kernel(prefix.data(), m, m, t + 1, scratch.data());
  });
  std::int64_t best = 0;
  for (const auto& e : per_top) best = std::max({best, e.over, e.under});
  Discrepancy out;
  out.mode = DiscrepancyMode::grid;
  out.grid = m;
  out.value = Rational(BigInt(static_cast<long>(best)), BigInt(static_cast<long>(nn * mm * mm)));
  out.value.canonicalize();
  out.error_bound = Rational(4, static_cast<unsigned long>(m));
  out.error_bound.canonicalize();
  return out;
}

}  // namespace

Discrepancy rectangle_discrepancy(const OrbitTable& orbit, std::size_t n, DiscrepancyMode mode, std::size_t m,
                                  unsigned threads) {
  if (n == 0) throw Error("empty prefix");
  if (n > orbit.length() + 1) throw Error("prefix exceeds orbit");
  if (mode == DiscrepancyMode::grid) return grid_discrepancy(orbit, n, m, threads);
  if (n > kExactDiscrepancyLimit) throw Error("prefix too long for exact mode");
  const std::size_t bits = mpz_sizeinbase(orbit.denominator(0).get_mpz_t(), 2) +
                           mpz_sizeinbase(orbit.denominator(1).get_mpz_t(), 2) + 12;
  Discrepancy out;
  out.mode = DiscrepancyMode::exact;
  out.error_bound = 0;
  // Intermediate values stay below 2 n q1 q2 in magnitude.
  if (bits + 2 < 126) {
    out.value = exact_discrepancy<i128>(orbit, n, threads);
  } else {
    out.value = exact_discrepancy<BigInt>(orbit, n, threads);
  }
  return out;
}

}  // namespace skewlab::torus
