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

#include "skewlab/dimension.hpp"

#include <algorithm>
#include <bit>
#include <cmath>

#include "skewlab/parallel.hpp"

namespace skewlab::dimension {

namespace {

unsigned long small_part(const BigInt& v) {
  if (!v.fits_ulong_p()) throw Error("exponent too large");
  return v.get_ui();
}

BigInt rational_power_ceil(const BigInt& base, const Rational& e) {
  return ceil_rational_power(base, small_part(e.get_num()), small_part(e.get_den()));
}

// Sup-norm diameter of a ball of radius 2 Y^-1/3 on T^2, raised to s and
// rounded up.
Rational diameter_power_upper(const BigInt& Y, const Rational& s) {
  // 4 Y^-1/3 >= 1/2 iff Y <= 512.
  if (Y <= 512) return pow_upper(Rational(1, 2), s);
  return pow_upper(Rational(64) / Rational(Y), s / 3);
}

void require_open_unit_s(const Rational& s) {
  if (s <= 1 || s >= 2) throw Error("s outside (1, 2)");
}

Rational nearest_line_distance(const Rational& x, const BigInt& q) {
  Rational xq = x * Rational(q);
  BigInt j = floor_of(xq + Rational(1, 2));
  return circle_distance(x, Rational(j) / Rational(q));
}

}  // namespace

const BlockLevel& BlockSchedule::level(std::size_t n) const {
  if (n == 0 || n > levels.size()) throw Error("level outside schedule");
  return levels[n - 1];
}

BlockSchedule build_schedule(const cfrac::AlphaPair& alpha, const Rational& theta, const Rational& beta,
                             std::size_t max_level) {
  if (theta <= Rational(12, 5) || theta >= Rational(46, 15)) throw Error("theta outside (12/5, 46/15)");
  if (beta <= Rational(12, 5) || beta >= Rational(4)) throw Error("beta outside (12/5, 4)");
  if (max_level == 0) throw Error("at least one level required");
  if (alpha.cf1.depth() < max_level + 1 || alpha.cf2.depth() < max_level + 1) throw Error("insufficient depth");

  BlockSchedule out;
  out.alpha = alpha;
  out.theta = theta;
  out.beta = beta;
  const auto& c1 = alpha.cf1;
  const auto& c2 = alpha.cf2;
  for (std::size_t n = 1; n <= max_level; ++n) {
    BlockLevel lv;
    lv.n = n;
    const long ln = static_cast<long>(n);
    lv.Q_even = c1.q(ln) * c2.q(ln);
    lv.P_even = rational_power_ceil(lv.Q_even, theta);
    lv.Q_odd = c1.q(ln + 1) * c2.q(ln);
    lv.P_odd = rational_power_ceil(lv.Q_odd, beta);
    lv.Q_next = c1.q(ln + 1) * c2.q(ln + 1);
    if (!(lv.Q_even <= lv.P_even && lv.P_even < lv.Q_odd && lv.Q_odd <= lv.P_odd && lv.P_odd < lv.Q_next)) {
      throw Error("interleaving fails at level " + std::to_string(n));
    }
    out.levels.push_back(std::move(lv));
  }
  return out;
}

std::string regime_name(Regime r) {
  switch (r) {
    case Regime::even_Q: return "even_Q";
    case Regime::even_P: return "even_P";
    case Regime::odd_Q: return "odd_Q";
    case Regime::odd_P: return "odd_P";
  }
  return "unknown";
}

RegimeGeometry regime_geometry(const BlockSchedule& schedule, std::size_t n, Regime regime) {
  const BlockLevel& lv = schedule.level(n);
  const auto& c1 = schedule.alpha.cf1;
  const auto& c2 = schedule.alpha.cf2;
  const long ln = static_cast<long>(n);
  RegimeGeometry g;
  switch (regime) {
    case Regime::even_Q:
      g.k_first = lv.Q_even;
      g.X = lv.P_even;
      g.Y = lv.Q_even;
      g.approximant = {c1.convergent(n), c2.convergent(n)};
      g.vertical = true;
      g.line_denominator = c1.q(ln);
      break;
    case Regime::even_P:
      g.k_first = lv.P_even + 1;
      g.X = lv.Q_odd;
      g.Y = lv.P_even;
      g.approximant = {c1.convergent(n + 1), c2.convergent(n)};
      g.vertical = false;
      g.line_denominator = c2.q(ln);
      break;
    case Regime::odd_Q:
      g.k_first = lv.Q_odd;
      g.X = lv.P_odd;
      g.Y = lv.Q_odd;
      g.approximant = {c1.convergent(n + 1), c2.convergent(n)};
      g.vertical = false;
      g.line_denominator = c2.q(ln);
      break;
    case Regime::odd_P:
      g.k_first = lv.P_odd + 1;
      g.X = lv.Q_next;
      g.Y = lv.P_odd;
      g.approximant = {c1.convergent(n + 1), c2.convergent(n + 1)};
      g.vertical = true;
      g.line_denominator = c1.q(ln + 1);
      break;
  }
  g.lines = g.line_denominator + 1;
  return g;
}

bool containment_check(const BlockSchedule& schedule, std::size_t n, Regime regime) {
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  const auto& a = schedule.alpha;
  Rational hi = 0;
  Rational lo = 0;
  for (std::size_t c = 0; c < 2; ++c) {
    Rational d = abs(a.value[c] - g.approximant[c]);
    Rational up = d + a.radius[c];
    Rational down = d > a.radius[c] ? Rational(d - a.radius[c]) : Rational(0);
    hi = std::max(hi, up);
    lo = std::max(lo, down);
  }
  // X e <= Y^-1/3  <=>  (X e)^3 Y <= 1.
  const Rational X(g.X);
  const Rational Y(g.Y);
  auto holds = [&](const Rational& e) {
    Rational t = X * e;
    return t * t * t * Y <= 1;
  };
  if (holds(hi)) return true;
  if (!holds(lo)) return false;
  throw IndeterminateError("indeterminate, deepen alpha");
}

BigInt balls_per_line(const BlockSchedule& schedule, std::size_t n, Regime regime) {
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  return ceil_root(g.Y, 3) + 1;
}

Rational cover_cost(const BlockSchedule& schedule, std::size_t n, Regime regime, const Rational& s) {
  require_open_unit_s(s);
  if (!containment_check(schedule, n, regime)) throw Error("missing containment certificate");
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  Rational count(g.lines * (ceil_root(g.Y, 3) + 1));
  return count * diameter_power_upper(g.Y, s);
}

std::vector<CoverBall> enumerate_cover(const BlockSchedule& schedule, std::size_t n, Regime regime,
                                       std::uint64_t limit) {
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  BigInt per_line = ceil_root(g.Y, 3) + 1;
  if (g.lines * per_line > limit) throw Error("cover too large to enumerate");
  const std::uint64_t L = to_u64(g.lines);
  const std::uint64_t B = to_u64(per_line);
  // 2 Y^-1/3 = (8/Y)^(1/3), rounded down so that coverage claims stay valid.
  const Rational radius = root_lower(Rational(8) / Rational(g.Y), 3);
  std::vector<CoverBall> out;
  out.reserve(L * B);
  for (std::uint64_t j = 0; j < L; ++j) {
    Rational across = Rational(BigInt(j)) / Rational(g.line_denominator);
    for (std::uint64_t i = 0; i < B; ++i) {
      // Spacing 1/(B-1) <= Y^-1/3 along the line.
      Rational along = Rational(BigInt(i)) / Rational(BigInt(B - 1));
      CoverBall ball;
      ball.center = g.vertical ? std::array<Rational, 2>{across, along} : std::array<Rational, 2>{along, across};
      ball.radius = radius;
      out.push_back(std::move(ball));
    }
  }
  return out;
}

Rational enumerated_cost(const std::vector<CoverBall>& cover, const BlockSchedule& schedule, std::size_t n,
                         Regime regime, const Rational& s) {
  require_open_unit_s(s);
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  Rational total = 0;
  for (std::size_t i = 0; i < cover.size(); ++i) total += diameter_power_upper(g.Y, s);
  return total;
}

std::uint64_t direct_line_check(const BlockSchedule& schedule, std::size_t n, Regime regime,
                                std::uint64_t max_points) {
  RegimeGeometry g = regime_geometry(schedule, n, regime);
  if (g.X < g.k_first) return 0;
  BigInt span = g.X - g.k_first + 1;
  if (span > max_points) throw Error("family too large for a direct check");
  const std::size_t axis = g.vertical ? 0 : 1;
  const auto& a = schedule.alpha;
  const Rational rho_up = root_upper(Rational(1) / Rational(g.Y), 3);
  const Rational strip = root_lower(Rational(8) / Rational(g.Y), 3);
  std::uint64_t outside = 0;
  const std::uint64_t k0 = to_u64(g.k_first);
  const std::uint64_t k1 = to_u64(g.X);
  for (std::uint64_t k = k0; k <= k1; ++k) {
    Rational kk{BigInt(k)};
    Rational x = frac(kk * a.value[axis]);
    Rational slack = kk * a.radius[axis];
    for (int sgn : {0, -1, 1}) {
      Rational p = frac(x + Rational(sgn) * rho_up);
      if (nearest_line_distance(p, g.line_denominator) + slack > strip) ++outside;
    }
  }
  return outside;
}

Rational tail_exponent(const BlockSchedule& schedule, Regime regime, const Rational& s) {
  const Rational excess = s - 1;
  switch (regime) {
    case Regime::even_Q:
    case Regime::odd_Q: return Rational(1) - Rational(5, 3) * excess;
    case Regime::even_P: return Rational(4) - Rational(5, 3) * schedule.theta * excess;
    case Regime::odd_P: return Rational(4) - Rational(5, 3) * schedule.beta * excess;
  }
  return Rational(0);
}

DimensionBound certify_dimension_bound(const BlockSchedule& schedule, const Rational& step, unsigned threads) {
  const std::size_t L = schedule.levels.size();
  if (L < 2) throw Error("at least two levels required");
  if (step <= 0 || step >= 1) throw Error("grid step outside (0, 1)");
  std::vector<Rational> grid;
  for (BigInt k = 1;; ++k) {
    Rational s = 1 + Rational(k) * step;
    if (s >= 2) break;
    grid.push_back(s);
  }

  DimensionBound out;
  parallel_for(kRegimes.size(), threads, [&](std::size_t r) {
    RegimeBound& rb = out.regimes[r];
    rb.regime = kRegimes[r];
    for (std::size_t n = 1; n <= L; ++n) rb.containment.push_back(containment_check(schedule, n, rb.regime));
    for (std::size_t n = 1; n <= L; ++n) {
      if (!rb.containment[n - 1]) {
        rb.failure = "containment fails at level " + std::to_string(n);
        return;
      }
    }
    for (const Rational& s : grid) {
      bool ok = tail_exponent(schedule, rb.regime, s) < 0;
      std::vector<Rational> costs;
      if (ok) {
        for (std::size_t n = 1; n <= L; ++n) costs.push_back(cover_cost(schedule, n, rb.regime, s));
        for (std::size_t n = 1; n < L && ok; ++n) ok = 2 * costs[n] <= costs[n - 1];
      }
      if (ok) {
        rb.s = s;
        rb.costs = std::move(costs);
        return;
      }
      rb.tested.push_back(s);
    }
    rb.failure = "no certificate on grid";
  });

  Rational best = 0;
  for (const auto& rb : out.regimes) {
    if (!rb.s) return out;
    best = std::max(best, *rb.s);
  }
  out.overall = best;
  out.product = best + 1;
  return out;
}

BoxCount box_counting_balls(const std::vector<std::array<double, 3>>& balls, const std::vector<unsigned>& exponents,
                            unsigned threads) {
  if (exponents.size() < 3) throw Error("at least three epsilons required");
  for (std::size_t i = 1; i < exponents.size(); ++i) {
    if (exponents[i] <= exponents[i - 1]) throw Error("epsilons must decrease");
  }
  if (exponents.back() > 14) throw Error("epsilon too small for the box grid");
  BoxCount out;
  out.exponents = exponents;
  out.counts.assign(exponents.size(), 0);
  parallel_for(exponents.size(), threads, [&](std::size_t e) {
    const std::uint64_t side = std::uint64_t{1} << exponents[e];
    const std::uint64_t words = (side + 63) / 64;
    std::vector<std::uint64_t> bits(side * words, 0);
    auto mark_row = [&](std::uint64_t row, std::uint64_t c0, std::uint64_t c1) {
      std::uint64_t* w = bits.data() + row * words;
      for (std::uint64_t c = c0; c <= c1;) {
        std::uint64_t wi = c / 64;
        std::uint64_t lo = c % 64;
        std::uint64_t hi = std::min<std::uint64_t>(63, lo + (c1 - c));
        std::uint64_t mask = (hi == 63 ? ~std::uint64_t{0} : ((std::uint64_t{1} << (hi + 1)) - 1)) &
                             (~std::uint64_t{0} << lo);
        w[wi] |= mask;
        c += hi - lo + 1;
      }
    };
    // Closed interval [v - r, v + r] on the circle as one or two index ranges.
    auto ranges = [&](double v, double r, std::uint64_t out_r[2][2]) -> int {
      if (2 * r >= 1.0) {
        out_r[0][0] = 0;
        out_r[0][1] = side - 1;
        return 1;
      }
      double a = (v - r) * static_cast<double>(side);
      double b = (v + r) * static_cast<double>(side);
      auto ia = static_cast<std::int64_t>(std::floor(a));
      auto ib = static_cast<std::int64_t>(std::floor(b));
      if (ib - ia + 1 >= static_cast<std::int64_t>(side)) {
        out_r[0][0] = 0;
        out_r[0][1] = side - 1;
        return 1;
      }
      const auto m = static_cast<std::int64_t>(side);
      std::int64_t sa = ((ia % m) + m) % m;
      std::int64_t sb = sa + (ib - ia);
      if (sb < m) {
        out_r[0][0] = static_cast<std::uint64_t>(sa);
        out_r[0][1] = static_cast<std::uint64_t>(sb);
        return 1;
      }
      out_r[0][0] = static_cast<std::uint64_t>(sa);
      out_r[0][1] = side - 1;
      out_r[1][0] = 0;
      out_r[1][1] = static_cast<std::uint64_t>(sb - m);
      return 2;
    };
    for (const auto& ball : balls) {
      std::uint64_t xr[2][2];
      std::uint64_t yr[2][2];
      int nx = ranges(ball[0], ball[2], xr);
      int ny = ranges(ball[1], ball[2], yr);
      for (int yi = 0; yi < ny; ++yi) {
        for (std::uint64_t row = yr[yi][0]; row <= yr[yi][1]; ++row) {
          for (int xi = 0; xi < nx; ++xi) mark_row(row, xr[xi][0], xr[xi][1]);
        }
      }
    }
    std::uint64_t count = 0;
    for (std::uint64_t w : bits) count += static_cast<std::uint64_t>(std::popcount(w));
    out.counts[e] = count;
  });

  // Least-squares slope of log2 N against log2(1/epsilon).
  const double m = static_cast<double>(exponents.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < exponents.size(); ++i) {
    double x = exponents[i];
    double y = std::log2(static_cast<double>(std::max<std::uint64_t>(out.counts[i], 1)));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  out.slope = (m * sxy - sx * sy) / (m * sxx - sx * sx);
  return out;
}

BoxCount box_counting_estimate(const cfrac::AlphaPair& alpha, std::uint64_t k_min, std::uint64_t k_max,
                               const std::vector<unsigned>& exponents, unsigned threads) {
  if (k_min == 0 || k_max < k_min) throw Error("invalid orbit range");
  const double a1 = alpha.value[0].get_d();
  const double a2 = alpha.value[1].get_d();
  std::vector<std::array<double, 3>> balls;
  balls.reserve(k_max - k_min + 1);
  for (std::uint64_t k = k_min; k <= k_max; ++k) {
    double kd = static_cast<double>(k);
    double x = kd * a1;
    double y = kd * a2;
    balls.push_back({x - std::floor(x), y - std::floor(y), std::cbrt(1.0 / kd)});
  }
  return box_counting_balls(balls, exponents, threads);
}

}  // namespace skewlab::dimension
