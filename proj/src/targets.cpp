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

#include "skewlab/targets.hpp"

#include <mpfr.h>

#include <algorithm>
#include <optional>
#include <random>

#include "skewlab/parallel.hpp"
#include "skewlab/simd/kernels.hpp"

namespace skewlab::targets {

TorusPoint3 default_center() { return TorusPoint3({Rational(1, 3), Rational(1, 3), Rational(1, 3)}); }

namespace {

// Pairwise summation keeps operand sizes balanced.
Rational tree_sum(std::vector<Rational>& terms, std::size_t lo, std::size_t hi) {
  if (hi - lo == 0) return Rational(0);
  if (hi - lo == 1) return terms[lo];
  std::size_t mid = lo + (hi - lo) / 2;
  return tree_sum(terms, lo, mid) + tree_sum(terms, mid, hi);
}

// Largest n <= N with n^delta <= 2, i.e. with a clipped (unit) term.
std::uint64_t last_clipped(const Rational& delta, std::uint64_t N) {
  auto clipped = [&](std::uint64_t n) {
    return compare_power(Rational(BigInt(static_cast<unsigned long>(n))), delta, Rational(2)) <= 0;
  };
  if (!clipped(1)) return 0;
  std::uint64_t lo = 1;
  std::uint64_t hi = N;
  if (clipped(hi)) return hi;
  while (hi - lo > 1) {
    std::uint64_t mid = lo + (hi - lo) / 2;
    (clipped(mid) ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace

BcSum bc_partial_sum(const Rational& delta, std::uint64_t N) {
  if (delta <= 0) throw Error("delta must be positive");
  if (N == 0) throw Error("horizon must be positive");
  const std::uint64_t clip = last_clipped(delta, N);
  BcSum out;
  const Rational three_delta = 3 * delta;
  std::vector<Rational> lower;
  std::vector<Rational> upper;
  const bool integral = three_delta.get_den() == 1 && three_delta.get_num().fits_ulong_p();
  out.exact = integral;
  for (std::uint64_t n = clip + 1; n <= N; ++n) {
    Rational nr(BigInt(static_cast<unsigned long>(n)));
    if (integral) {
      lower.emplace_back(BigInt(8), big_pow(BigInt(static_cast<unsigned long>(n)), three_delta.get_num().get_ui()));
    } else {
      lower.push_back(8 * pow_lower(nr, -three_delta));
      upper.push_back(8 * pow_upper(nr, -three_delta));
    }
  }
  for (auto& t : lower) t.canonicalize();
  const Rational clipped_part(BigInt(static_cast<unsigned long>(clip)));
  out.lower = clipped_part + tree_sum(lower, 0, lower.size());
  out.upper = integral ? out.lower : clipped_part + tree_sum(upper, 0, upper.size());
  return out;
}

Rational eight_log_minus_nine_upper(std::uint64_t N) {
  if (N == 0) throw Error("horizon must be positive");
  mpfr_t v;
  mpfr_init2(v, 256);
  mpfr_set_ui(v, N, MPFR_RNDU);
  mpfr_log(v, v, MPFR_RNDU);
  mpfr_mul_ui(v, v, 8, MPFR_RNDU);
  mpfr_sub_ui(v, v, 9, MPFR_RNDU);
  BigInt mant;
  mpfr_exp_t e = mpfr_get_z_2exp(mant.get_mpz_t(), v);
  mpfr_clear(v);
  if (e >= 0) return Rational(mant << static_cast<unsigned long>(e));
  Rational out(mant, pow2(static_cast<unsigned long>(-e)));
  out.canonicalize();
  return out;
}

RadiusTable::RadiusTable(const Rational& delta, std::uint64_t n0, std::uint64_t horizon)
    : n0_(std::max<std::uint64_t>(n0, 1)), horizon_(horizon) {
  if (delta < 0) throw Error("delta must be nonnegative");
  if (!delta.get_num().fits_ulong_p() || !delta.get_den().fits_ulong_p()) throw Error("delta too large");
  const unsigned long p = delta.get_num().get_ui();
  const unsigned long q = delta.get_den().get_ui();
  if (q > 64) throw Error("delta denominator too large");
  const BigInt scale = pow2(128 * q);
  const BigInt cap = pow2(128) - 1;
  if (horizon_ < n0_) return;
  lo_.resize(horizon_ - n0_ + 1);
  exact_.resize(horizon_ - n0_ + 1);
  for (std::uint64_t n = n0_; n <= horizon_; ++n) {
    // floor(2^128 n^(-p/q)) = floor((2^(128 q) / n^p)^(1/q)).
    BigInt np = big_pow(BigInt(static_cast<unsigned long>(n)), p);
    BigInt quot;
    BigInt rem;
    mpz_fdiv_qr(quot.get_mpz_t(), rem.get_mpz_t(), scale.get_mpz_t(), np.get_mpz_t());
    BigInt root;
    int exact_root = mpz_root(root.get_mpz_t(), quot.get_mpz_t(), q);
    bool exact = rem == 0 && exact_root != 0;
    if (root > cap) {
      root = cap;
      exact = false;
    }
    lo_[n - n0_] = to_u128(root);
    exact_[n - n0_] = exact ? 1 : 0;
  }
}

namespace {

constexpr std::uint64_t kStreamTag = 0x7a3c9e5bU;

std::mt19937_64 stream_engine(std::uint64_t seed, std::uint64_t index, std::uint32_t stream, SystemKind kind) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(index >> 32), stream,
                    static_cast<std::uint32_t>(kind == SystemKind::skew ? 1 : 2),
                    static_cast<std::uint32_t>(kStreamTag)};
  return std::mt19937_64(seq);
}

std::size_t words_for(std::uint64_t horizon) { return static_cast<std::size_t>(horizon / 64 + 4); }

inline int bit_at(const std::vector<std::uint64_t>& words, std::uint64_t i) {
  return static_cast<int>((words[i / 64] >> (63 - i % 64)) & 1U);
}

// The 128 digits starting at digit i: the fixed-point value of frac(2^i x), floored.
inline u128 window(const std::vector<std::uint64_t>& words, std::uint64_t i) {
  const std::size_t w = i / 64;
  const unsigned s = static_cast<unsigned>(i % 64);
  std::uint64_t hi = words[w];
  std::uint64_t lo = words[w + 1];
  if (s != 0) {
    hi = (hi << s) | (lo >> (64 - s));
    lo = (lo << s) | (words[w + 2] >> (64 - s));
  }
  return (static_cast<u128>(hi) << 64) | lo;
}

inline u128 sat_add(u128 a, u128 b) {
  u128 s = a + b;
  return s < a ? ~u128{0} : s;
}

inline u128 sat_mul(u128 a, u128 b) {
  if (a != 0 && b > ~u128{0} / a) return ~u128{0};
  return a * b;
}

inline u128 circ(u128 v) {
  u128 neg = u128{0} - v;
  return v < neg ? v : neg;
}

inline std::uint64_t top64(u128 v) { return static_cast<std::uint64_t>(v >> 64); }

// Fixed-point coordinate with an error radius in units of 2^-128.
struct Fixed {
  u128 value;
  u128 error;
};

Fixed fixed_of(const Rational& x) {
  u128 v = fixed_floor_128(x);
  bool exact = fixed_value_128(v) == frac(x);
  return {v, exact ? u128{0} : u128{1}};
}

// ceil(r 2^128) for the truncation radius, saturated.
u128 radius_units(const Rational& r) {
  Rational scaled = r * Rational(pow2(128));
  BigInt c = ceil_of(scaled);
  if (c >= pow2(128)) return ~u128{0};
  return to_u128(c);
}

enum class Outcome { miss, hit, ambiguous };

// Decides max_c |p_c - y_c| <= r given per-coordinate distance estimates.
Outcome decide(const std::array<u128, 3>& dist, const std::array<u128, 3>& err, u128 r_floor, bool r_exact) {
  u128 lo = 0;
  u128 hi = 0;
  const u128 half = u128{1} << 127;
  for (std::size_t c = 0; c < 3; ++c) {
    u128 dl = dist[c] > err[c] ? dist[c] - err[c] : 0;
    u128 dh = std::min(sat_add(dist[c], err[c]), half);
    lo = std::max(lo, dl);
    hi = std::max(hi, dh);
  }
  if (hi <= r_floor) return Outcome::hit;
  const u128 r_up = r_exact ? r_floor : sat_add(r_floor, 1);
  if (lo > r_up) return Outcome::miss;
  return Outcome::ambiguous;
}

constexpr std::size_t kBlock = 1024;

}  // namespace

Start draw_start(SystemKind kind, std::uint64_t seed, std::uint64_t index, std::uint64_t horizon) {
  Start s;
  const std::size_t streams = kind == SystemKind::skew ? 1 : 3;
  for (std::size_t c = 0; c < streams; ++c) {
    auto eng = stream_engine(seed, index, static_cast<std::uint32_t>(c), kind);
    s.words[c].resize(words_for(horizon));
    for (auto& w : s.words[c]) w = eng();
  }
  if (kind == SystemKind::skew) {
    auto eng = stream_engine(seed, index, 3, kind);
    for (auto& f : s.fiber) {
      std::uint64_t hi = eng();
      std::uint64_t lo = eng();
      f = (static_cast<u128>(hi) << 64) | lo;
    }
  }
  return s;
}

HitReport hit_sequence(SystemKind kind, const cfrac::AlphaPair& alpha, const Start& start, const TargetSpec& target,
                       const RadiusTable& radii) {
  HitReport rep;
  const std::uint64_t n0 = std::max<std::uint64_t>(target.n0, 1);
  const std::uint64_t horizon = target.horizon;
  if (horizon < n0) return rep;
  if (radii.n0() > n0 || radii.horizon() < horizon) throw Error("radius table does not cover the window");
  const std::size_t streams = kind == SystemKind::skew ? 1 : 3;
  for (std::size_t c = 0; c < streams; ++c) {
    if (start.words[c].size() < words_for(horizon)) throw Error("insufficient entropy bits");
  }

  std::array<Fixed, 3> y;
  for (std::size_t c = 0; c < 3; ++c) y[c] = fixed_of(target.center[c]);
  std::array<u128, 2> step{0, 0};
  std::array<u128, 2> step_err{0, 0};
  if (kind == SystemKind::skew) {
    for (std::size_t c = 0; c < 2; ++c) {
      step[c] = fixed_floor_128(alpha.value[c]);
      step_err[c] = sat_add(radius_units(alpha.radius[c]), 1);
    }
  }

  // Fiber after n steps and the zero count so far.
  std::array<u128, 2> fiber = start.fiber;
  std::uint64_t zeros = 0;
  auto advance = [&](std::uint64_t k) {
    if (bit_at(start.words[0], k) == 0) {
      ++zeros;
      fiber[0] += step[0];
      fiber[1] += step[1];
    }
  };
  for (std::uint64_t k = 0; k < n0 && kind == SystemKind::skew; ++k) advance(k);

  std::vector<std::uint64_t> dx(kBlock), d1(kBlock), d2(kBlock), thr(kBlock);
  std::vector<std::uint8_t> flags(kBlock);
  std::vector<std::array<u128, 3>> pos(kBlock);
  std::vector<std::array<u128, 3>> err(kBlock);
  simd::HitFilterFn filter = simd::hit_filter_fn();

  for (std::uint64_t base = n0; base <= horizon; base += kBlock) {
    const std::size_t count = static_cast<std::size_t>(std::min<std::uint64_t>(kBlock, horizon - base + 1));
    for (std::size_t i = 0; i < count; ++i) {
      const std::uint64_t n = base + i;
      if (kind == SystemKind::skew) {
        pos[i] = {window(start.words[0], n), fiber[0], fiber[1]};
        const u128 z = zeros;
        err[i] = {sat_add(1, y[0].error), sat_add(sat_mul(z, step_err[0]), y[1].error),
                  sat_add(sat_mul(z, step_err[1]), y[2].error)};
        advance(n);
      } else {
        pos[i] = {window(start.words[0], n), window(start.words[1], n), window(start.words[2], n)};
        err[i] = {sat_add(1, y[0].error), sat_add(1, y[1].error), sat_add(1, y[2].error)};
      }
      dx[i] = top64(pos[i][0] - y[0].value);
      d1[i] = top64(pos[i][1] - y[1].value);
      d2[i] = top64(pos[i][2] - y[2].value);
      const u128 e = std::max({err[i][0], err[i][1], err[i][2]});
      const std::uint64_t slack = top64(e) + 3;
      const std::uint64_t r = top64(radii.floor_at(n));
      thr[i] = r > ~std::uint64_t{0} - slack ? ~std::uint64_t{0} : r + slack;
    }
    filter(dx.data(), d1.data(), d2.data(), thr.data(), count, flags.data());
    for (std::size_t i = 0; i < count; ++i) {
      if (!flags[i]) continue;
      const std::uint64_t n = base + i;
      std::array<u128, 3> dist;
      for (std::size_t c = 0; c < 3; ++c) dist[c] = circ(pos[i][c] - y[c].value);
      switch (decide(dist, err[i], radii.floor_at(n), radii.exact_at(n))) {
        case Outcome::hit:
          rep.hits.push_back(n);
          break;
        case Outcome::ambiguous:
          rep.ambiguous.push_back(n);
          break;
        case Outcome::miss:
          break;
      }
    }
  }
  return rep;
}

HitReport hit_sequence(SystemKind kind, const cfrac::AlphaPair& alpha, const Start& start, const TargetSpec& target) {
  if (target.horizon < std::max<std::uint64_t>(target.n0, 1)) return {};
  RadiusTable radii(target.delta, target.n0, target.horizon);
  return hit_sequence(kind, alpha, start, target, radii);
}

std::vector<EnsembleRow> ensemble_fraction(const cfrac::AlphaPair& alpha, const TargetSpec& target,
                                           const EnsembleConfig& config) {
  if (config.starts == 0) throw Error("ensemble needs at least one start");
  if (config.horizons.empty()) throw Error("no horizons");
  if (target.delta <= 0) throw Error("delta must be positive");
  const std::uint64_t max_h = *std::max_element(config.horizons.begin(), config.horizons.end());
  TargetSpec t = target;
  t.n0 = std::max<std::uint64_t>(target.n0, 1);
  t.horizon = max_h;
  const std::size_t H = config.horizons.size();

  std::optional<RadiusTable> radii;
  if (max_h >= t.n0) radii.emplace(t.delta, t.n0, max_h);

  // Per start and horizon: (any hit, hit count, ambiguous count).
  struct Tally {
    std::vector<std::uint8_t> any;
    std::vector<std::uint64_t> hits;
    std::vector<std::uint64_t> ambiguous;
  };
  std::vector<Tally> tallies(config.starts);
  parallel_for(config.starts, config.threads, [&](std::size_t i) {
    Tally tally{std::vector<std::uint8_t>(H, 0), std::vector<std::uint64_t>(H, 0), std::vector<std::uint64_t>(H, 0)};
    if (radii) {
      Start s = draw_start(config.kind, config.seed, i, max_h);
      HitReport rep = hit_sequence(config.kind, alpha, s, t, *radii);
      for (std::size_t h = 0; h < H; ++h) {
        const std::uint64_t limit = config.horizons[h];
        auto nh = static_cast<std::uint64_t>(std::upper_bound(rep.hits.begin(), rep.hits.end(), limit) - rep.hits.begin());
        auto na = static_cast<std::uint64_t>(
            std::upper_bound(rep.ambiguous.begin(), rep.ambiguous.end(), limit) - rep.ambiguous.begin());
        tally.hits[h] = nh;
        tally.ambiguous[h] = na;
        tally.any[h] = nh > 0 ? 1 : 0;
      }
    }
    tallies[i] = std::move(tally);
  });

  std::vector<EnsembleRow> rows(H);
  const BigInt M(static_cast<unsigned long>(config.starts));
  for (std::size_t h = 0; h < H; ++h) {
    std::uint64_t any = 0;
    BigInt hits = 0;
    std::uint64_t amb = 0;
    for (const auto& tally : tallies) {
      any += tally.any[h];
      hits += static_cast<unsigned long>(tally.hits[h]);
      amb += tally.ambiguous[h];
    }
    EnsembleRow& row = rows[h];
    row.horizon = config.horizons[h];
    row.fraction = Rational(BigInt(static_cast<unsigned long>(any)), M);
    row.fraction.canonicalize();
    row.mean_hits = Rational(hits, M);
    row.mean_hits.canonicalize();
    row.bc = bc_partial_sum(target.delta, row.horizon);
    row.ambiguous = amb;
  }
  return rows;
}

}  // namespace skewlab::targets
