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

#include "skewlab/skewprod.hpp"

#include <algorithm>
#include <cmath>
#include <map>

#include "skewlab/fixed_point.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab::skewprod {

TorusPoint3 SkewSystem::step(const TorusPoint3& state) const {
  const Rational half(1, 2);
  if (state[0] < half) {
    return TorusPoint3({2 * state[0], state[1] + alpha_.value[0], state[2] + alpha_.value[1]});
  }
  return TorusPoint3({2 * state[0], state[1], state[2]});
}

TorusPoint3 SkewSystem::iterate(const TorusPoint3& state, std::uint64_t n) const {
  const std::uint64_t z = zero_count(state[0], n);
  Rational x = state[0];
  if (n > 0) x = frac(x * pow2(n));
  Rational zr(BigInt(static_cast<unsigned long>(z)));
  return TorusPoint3({x, state[1] + zr * alpha_.value[0], state[2] + zr * alpha_.value[1]});
}

BitState SkewSystem::iterate(const BitState& state, std::uint64_t n) const {
  if (n > state.available()) throw Error("insufficient entropy bits");
  BitState out = state;
  std::uint64_t z = 0;
  for (std::uint64_t i = 0; i < n; ++i) z += state.bits[state.offset + i] == 0;
  out.offset += n;
  Rational zr(BigInt(static_cast<unsigned long>(z)));
  out.fiber = TorusPoint2({state.fiber[0] + zr * alpha_.value[0], state.fiber[1] + zr * alpha_.value[1]});
  return out;
}

std::uint64_t zero_count(const Rational& x, std::uint64_t n) {
  Rational y = frac(x);
  const Rational half(1, 2);
  std::uint64_t z = 0;
  for (std::uint64_t k = 0; k < n; ++k) {
    if (y < half) {
      ++z;
      y *= 2;
    } else {
      y = 2 * y - 1;
    }
  }
  return z;
}

namespace {

template <class Int>
Int arc_overlap(const Int& s1, const Int& l1, const Int& s2, const Int& l2, const Int& M) {
  // Rotate so the first arc starts at 0; the second then sits at d and d - M.
  Int d = s2 - s1;
  if (d < 0) d += M;
  Int total(0);
  Int hi = d + l2 < l1 ? d + l2 : l1;
  if (hi > d) total += hi - d;
  Int wrap_hi = d - M + l2;
  if (wrap_hi > l1) wrap_hi = l1;
  if (wrap_hi > 0) total += wrap_hi;
  return total;
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
    return from_u128(static_cast<u128>(v));
  }
}

// R_A and R_B on circles of size M_c = Q_c 2^gA, where alpha_c = P_c/Q_c.
template <class Int>
struct SquarePair {
  std::array<Int, 2> M, step, startA, lenA, startB, lenB;

  Int overlap(std::size_t c, std::uint64_t s) const {
    Int shift = (Int(static_cast<long>(s)) * step[c]) % M[c];
    Int sa = startA[c] - shift;
    if (sa < 0) sa += M[c];
    return arc_overlap<Int>(sa, lenA[c], startB[c], lenB[c], M[c]);
  }

  BigInt area_numerator(std::uint64_t s) const { return to_big<Int>(overlap(0, s)) * to_big<Int>(overlap(1, s)); }
};

struct Circles {
  std::array<BigInt, 2> P, Q;
};

Circles circles_of(const cfrac::AlphaPair& alpha) {
  Circles out;
  for (std::size_t c = 0; c < 2; ++c) {
    Rational v = frac(alpha.value[c]);
    out.P[c] = v.get_num();
    out.Q[c] = v.get_den();
  }
  return out;
}

template <class Int>
SquarePair<Int> square_pair(const Circles& circ, unsigned gA, std::uint64_t kA2, std::uint64_t kA3, unsigned gB,
                            std::uint64_t kB2, std::uint64_t kB3) {
  SquarePair<Int> sp;
  const std::array<std::uint64_t, 2> kA{kA2, kA3};
  const std::array<std::uint64_t, 2> kB{kB2, kB3};
  for (std::size_t c = 0; c < 2; ++c) {
    BigInt M = circ.Q[c] << gA;
    BigInt lenB = circ.Q[c] << (gA - gB);
    sp.M[c] = to_int<Int>(M);
    sp.step[c] = to_int<Int>(circ.P[c] << gA);
    sp.lenA[c] = to_int<Int>(circ.Q[c]);
    sp.startA[c] = to_int<Int>(circ.Q[c] * static_cast<unsigned long>(kA[c]));
    sp.lenB[c] = to_int<Int>(lenB);
    sp.startB[c] = to_int<Int>(lenB * static_cast<unsigned long>(kB[c]));
  }
  return sp;
}

// Shift factors s stay below 2^20, so products fit when M has <= 100 bits.
bool fits_i128(const Circles& circ, unsigned gA) {
  for (const auto& q : circ.Q) {
    if (mpz_sizeinbase(q.get_mpz_t(), 2) + gA > 100) return false;
  }
  return true;
}

// Area numerators f(s) = |(R_A - s alpha) n R_B| * M0 M1 for s in [0, count).
std::vector<BigInt> area_numerators(const Circles& circ, const DyadicCube3& A, const DyadicCube3& B,
                                    std::uint64_t count) {
  if (count > (std::uint64_t{1} << 20)) throw Error("iterate too large");
  std::vector<BigInt> out;
  out.reserve(count);
  if (fits_i128(circ, A.g)) {
    auto sp = square_pair<i128>(circ, A.g, A.k[1], A.k[2], B.g, B.k[1], B.k[2]);
    for (std::uint64_t s = 0; s < count; ++s) out.push_back(sp.area_numerator(s));
  } else {
    auto sp = square_pair<BigInt>(circ, A.g, A.k[1], A.k[2], B.g, B.k[1], B.k[2]);
    for (std::uint64_t s = 0; s < count; ++s) out.push_back(sp.area_numerator(s));
  }
  return out;
}

BigInt binomial(std::uint64_t m, std::uint64_t j) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), m, j);
  return out;
}

// Zeros among the first `len` digits of the g-digit word of k.
unsigned prefix_zeros(std::uint64_t k, unsigned g, unsigned len) {
  return len - static_cast<unsigned>(__builtin_popcountll(k >> (g - len)));
}

// For n < g(B): the single branch compatible with both words, if any.
bool branch_compatible(const DyadicCube3& A, const DyadicCube3& B, std::uint64_t n) {
  const unsigned overlap = B.g - static_cast<unsigned>(n);
  const std::uint64_t tail_B = B.k[0] & ((std::uint64_t{1} << overlap) - 1);
  const std::uint64_t head_A = A.k[0] >> (A.g - overlap);
  return tail_B == head_A;
}

Rational make_rational(const BigInt& num, const BigInt& den) {
  Rational r(num, den);
  r.canonicalize();
  return r;
}

}  // namespace

Rational preimage_measure_exact(const cfrac::AlphaPair& alpha, const DyadicCube3& A, const DyadicCube3& B,
                                std::uint64_t n) {
  if (A.g < B.g) throw Error("cube order");
  const Circles circ = circles_of(alpha);
  const BigInt area_den = (circ.Q[0] << A.g) * (circ.Q[1] << A.g);
  const BigInt den = area_den << (n + A.g);
  if (n < B.g) {
    if (!branch_compatible(A, B, n)) return Rational(0);
    const unsigned z = prefix_zeros(B.k[0], B.g, static_cast<unsigned>(n));
    std::vector<BigInt> f = area_numerators(circ, A, B, z + 1);
    return make_rational(f[z], den);
  }
  const std::uint64_t m = n - B.g;
  const unsigned zB = B.zeros();
  std::vector<BigInt> f = area_numerators(circ, A, B, zB + m + 1);
  BigInt total = 0;
  for (std::uint64_t j = 0; j <= m; ++j) {
    if (f[zB + j] != 0) total += binomial(m, j) * f[zB + j];
  }
  return make_rational(total, den);
}

Rect2 enlarged_target(const cfrac::AlphaPair& alpha, const DyadicCube3& A, const DyadicCube3& B) {
  if (A.g < B.g) throw Error("cube order");
  const Rational half_side_A(BigInt(1), pow2(A.g + 1));
  const Rational half_side_B(BigInt(1), pow2(B.g + 1));
  Rational zB(BigInt(B.zeros()));
  std::array<Rational, 2> center;
  for (std::size_t c = 0; c < 2; ++c) {
    Rational a = A.lower(c + 1) + half_side_A;
    Rational b = B.lower(c + 1) + half_side_B;
    center[c] = a - b - zB * alpha.value[c];
  }
  Rect2 rb = Rect2::make(TorusPoint2(center), half_side_B, half_side_B);
  return torus::enlarge_square(rb, Rational(3));
}

BinomialIndicatorSum binomial_indicator_sum(std::uint64_t n, std::uint64_t nB, const Rect2& R,
                                            const cfrac::AlphaPair& alpha) {
  if (n <= nB) throw Error("n must exceed n_B");
  const std::uint64_t m = n - nB;
  BinomialIndicatorSum out;
  out.S = 0;
  for (std::uint64_t k = 0; k <= m; ++k) {
    Rational kr(BigInt(static_cast<unsigned long>(k)));
    if (R.contains(TorusPoint2({kr * alpha.value[0], kr * alpha.value[1]}))) out.S += binomial(m, k);
  }
  out.sigma2 = R.area() * Rational(pow2(m));
  out.sigma1 = Rational(out.S) - out.sigma2;
  return out;
}

namespace {

// Membership of s alpha in the enlarged square around a - b, in integers:
// everything is scaled by K_c = 2 Q_c 2^gA.
struct TargetTest {
  std::array<BigInt, 2> K, step, center, half;

  bool contains(std::uint64_t s) const {
    for (std::size_t c = 0; c < 2; ++c) {
      if (half[c] * 2 >= K[c]) continue;
      BigInt pos = step[c] * static_cast<unsigned long>(s) - center[c];
      mpz_fdiv_r(pos.get_mpz_t(), pos.get_mpz_t(), K[c].get_mpz_t());
      BigInt dist = pos <= K[c] - pos ? pos : BigInt(K[c] - pos);
      if (dist > half[c]) return false;
    }
    return true;
  }
};

TargetTest target_test(const Circles& circ, unsigned gA, std::uint64_t kA2, std::uint64_t kA3, unsigned gB,
                       std::uint64_t kB2, std::uint64_t kB3) {
  TargetTest t;
  const std::array<std::uint64_t, 2> kA{kA2, kA3};
  const std::array<std::uint64_t, 2> kB{kB2, kB3};
  for (std::size_t c = 0; c < 2; ++c) {
    const BigInt& Q = circ.Q[c];
    t.K[c] = Q << (gA + 1);
    t.step[c] = circ.P[c] << (gA + 1);
    // a = (2 kA + 1) / 2^(gA+1), b = (2 kB + 1) / 2^(gB+1).
    BigInt a = Q * static_cast<unsigned long>(2 * kA[c] + 1);
    BigInt b = (Q * static_cast<unsigned long>(2 * kB[c] + 1)) << (gA - gB);
    t.center[c] = a - b;
    // Half-side 3/2^(gB+1), clipped at 1/2.
    BigInt h = (Q * 3UL) << (gA - gB);
    t.half[c] = std::min(h, BigInt(Q << gA));
  }
  return t;
}

struct EntryValues {
  Rational measure;
  Rational bound;
  Rational needed;
  bool dominated = false;
  bool exact = true;
};

// Per-(R_A, R_B) tables over n in the list and zB in [0, gB].
struct SquareTables {
  unsigned gA = 0;
  std::uint64_t ra = 0;
  std::vector<BigInt> f_small;          // area numerators for s <= gB
  std::vector<std::vector<EntryValues>> by_n;  // [n index][zB]
};

struct ScanContext {
  const cfrac::AlphaPair& alpha;
  Circles circ;
  const ScanConfig& config;
  std::vector<Rational> n_pow_s_upper;  // per n index
};

Rational lebesgue_cube(unsigned g) { return Rational(BigInt(1), pow2(3UL * g)); }

EntryValues finish_entry(const ScanContext& ctx, std::size_t ni, unsigned gA, unsigned gB, Rational measure,
                         Rational bound, bool exact) {
  EntryValues e;
  e.measure = std::move(measure);
  e.bound = std::move(bound);
  e.exact = exact;
  const Rational LA = lebesgue_cube(gA);
  const Rational product = 9 * LA * lebesgue_cube(gB);
  Rational excess = e.measure - product;
  if (excess <= 0) {
    e.dominated = true;
    e.needed = 0;
  } else {
    e.needed = excess / LA * ctx.n_pow_s_upper[ni];
  }
  return e;
}

// log C(m, j) - m log 2, for the approximate regime.
long double log_weight(std::uint64_t m, std::uint64_t j) {
  const auto lm = static_cast<long double>(m);
  const auto lj = static_cast<long double>(j);
  return std::lgammal(lm + 1) - std::lgammal(lj + 1) - std::lgammal(lm - lj + 1) - lm * std::log(2.0L);
}

long double ratio_to_ld(const BigInt& num, const BigInt& den) {
  long en = 0;
  long ed = 0;
  if (num == 0) return 0.0L;
  double mn = mpz_get_d_2exp(&en, num.get_mpz_t());
  double md = mpz_get_d_2exp(&ed, den.get_mpz_t());
  return static_cast<long double>(mn) / md * std::pow(2.0L, static_cast<long double>(en - ed));
}

SquareTables build_tables(const ScanContext& ctx, unsigned gA, std::uint64_t ra, unsigned gB, std::uint64_t rb) {
  SquareTables t;
  t.gA = gA;
  t.ra = ra;
  const std::uint64_t maskA = (std::uint64_t{1} << gA) - 1;
  const std::uint64_t maskB = (std::uint64_t{1} << gB) - 1;
  const std::uint64_t kA2 = ra >> gA, kA3 = ra & maskA;
  const std::uint64_t kB2 = rb >> gB, kB3 = rb & maskB;
  const auto& n_list = ctx.config.n_list;
  const std::uint64_t n_max = *std::max_element(n_list.begin(), n_list.end());
  const std::uint64_t n_exact_max = std::min(n_max, kExactHorizon);
  const std::uint64_t count = std::max<std::uint64_t>(n_max, gB) + 1;

  DyadicCube3 A = torus::dyadic_cube(gA, 0, kA2, kA3);
  DyadicCube3 B = torus::dyadic_cube(gB, 0, kB2, kB3);
  std::vector<BigInt> f = area_numerators(ctx.circ, A, B, count);
  TargetTest target = target_test(ctx.circ, gA, kA2, kA3, gB, kB2, kB3);
  std::vector<BigInt> chi(count);
  for (std::uint64_t s = 0; s < count; ++s) chi[s] = target.contains(s) ? 1 : 0;
  t.f_small.assign(f.begin(), f.begin() + gB + 1);

  const BigInt area_den = (ctx.circ.Q[0] << gA) * (ctx.circ.Q[1] << gA);
  const Rational LA = lebesgue_cube(gA);
  const Rational LRA2(BigInt(1), pow2(2UL * gA));
  const Rational LIA(BigInt(1), pow2(gA));

  // Requested m = n - gB for the exact regime, in increasing order.
  std::map<std::uint64_t, std::vector<std::size_t>> wanted;
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    if (n_list[ni] >= gB && n_list[ni] <= kExactHorizon) wanted[n_list[ni] - gB].push_back(ni);
  }
  t.by_n.assign(n_list.size(), std::vector<EntryValues>(gB + 1));

  // Pascal recursion V_m(z) = V_{m-1}(z) + V_{m-1}(z+1), so V_m(z) = sum_j C(m,j) V_0(z+j).
  const std::uint64_t top = gB + (n_exact_max >= gB ? n_exact_max - gB : 0);
  std::vector<BigInt> V(f.begin(), f.begin() + top + 1);
  std::vector<BigInt> W(chi.begin(), chi.begin() + top + 1);
  std::uint64_t m = 0;
  for (const auto& [target_m, indices] : wanted) {
    while (m < target_m) {
      for (std::uint64_t z = 0; z + m + 1 <= top; ++z) {
        V[z] += V[z + 1];
        W[z] += W[z + 1];
      }
      ++m;
    }
    for (std::size_t ni : indices) {
      const std::uint64_t n = n_list[ni];
      for (unsigned zB = 0; zB <= gB; ++zB) {
        Rational measure = make_rational(V[zB], area_den << (n + gA));
        Rational bound;
        if (n <= gB) {
          bound = Rational(BigInt(1), pow2(n)) * LA;
        } else {
          bound = Rational(W[zB]) * Rational(BigInt(1), pow2(n)) * LIA * LRA2;
        }
        t.by_n[ni][zB] = finish_entry(ctx, ni, gA, gB, std::move(measure), std::move(bound), true);
      }
    }
  }

  // Log-domain regime.
  for (std::size_t ni = 0; ni < n_list.size(); ++ni) {
    const std::uint64_t n = n_list[ni];
    if (n <= kExactHorizon) continue;
    const std::uint64_t mm = n - gB;
    for (unsigned zB = 0; zB <= gB; ++zB) {
      long double mean_area = 0.0L;
      long double mean_chi = 0.0L;
      for (std::uint64_t j = 0; j <= mm; ++j) {
        long double w = std::exp(log_weight(mm, j));
        if (w == 0.0L) continue;
        mean_area += w * ratio_to_ld(f[zB + j], area_den);
        if (chi[zB + j] != 0) mean_chi += w;
      }
      // measure = 2^-gA-gB E[area], bound = E[chi] 2^-gB L(I_A) L2(R_A).
      const long double scale = std::pow(2.0L, -static_cast<long double>(gA + gB));
      Rational measure(static_cast<double>(mean_area * scale));
      Rational bound(static_cast<double>(mean_chi * scale / std::pow(2.0L, static_cast<long double>(2 * gA))));
      t.by_n[ni][zB] = finish_entry(ctx, ni, gA, gB, std::move(measure), std::move(bound), false);
    }
  }
  return t;
}

}  // namespace

ScanSummary mixing_scan(const cfrac::AlphaPair& alpha, const ScanConfig& config, const CertificateSink& sink) {
  if (config.n_list.empty()) throw Error("empty scan");
  if (config.s <= 0 || config.s > 1) throw Error("s must lie in (0, 1]");
  if (config.max_gen > 8) throw Error("generation too large for a scan");
  for (auto n : config.n_list) {
    if (n == 0) throw Error("iterates must be positive");
    if (n > (std::uint64_t{1} << 16)) throw Error("iterate too large");
  }
  ScanContext ctx{alpha, circles_of(alpha), config, {}};
  for (auto n : config.n_list) ctx.n_pow_s_upper.push_back(pow_upper(Rational(BigInt(static_cast<unsigned long>(n))), config.s));

  ScanSummary summary;
  summary.c_star = 0;
  MixingCertificate cert;
  cert.truncation_level = alpha.depth;
  std::uint64_t next_id = 0;

  for (unsigned gB = 0; gB <= config.max_gen; ++gB) {
    const std::uint64_t squares_B = std::uint64_t{1} << (2 * gB);
    for (std::uint64_t rb = 0; rb < squares_B; ++rb) {
      // Every (gA, R_A) table for this R_B, built in parallel, consumed in order.
      std::vector<std::pair<unsigned, std::uint64_t>> jobs;
      for (unsigned gA = gB; gA <= config.max_gen; ++gA) {
        for (std::uint64_t ra = 0; ra < (std::uint64_t{1} << (2 * gA)); ++ra) jobs.emplace_back(gA, ra);
      }
      std::vector<SquareTables> tables(jobs.size());
      parallel_for(jobs.size(), config.threads,
                   [&](std::size_t i) { tables[i] = build_tables(ctx, jobs[i].first, jobs[i].second, gB, rb); });

      const std::uint64_t maskB = (std::uint64_t{1} << gB) - 1;
      for (std::uint64_t kB1 = 0; kB1 < (std::uint64_t{1} << gB); ++kB1) {
        cert.B = torus::dyadic_cube(gB, kB1, rb >> gB, rb & maskB);
        const unsigned zB = cert.B.zeros();
        for (const SquareTables& tab : tables) {
          const unsigned gA = tab.gA;
          const std::uint64_t maskA = (std::uint64_t{1} << gA) - 1;
          const Rational LA = lebesgue_cube(gA);
          cert.product_term = 9 * LA * lebesgue_cube(gB);
          // Values shared by every kA1 at a given n, for n >= gB.
          std::vector<std::uint64_t> ids(config.n_list.size());
          for (auto& id : ids) id = ++next_id;
          for (std::uint64_t kA1 = 0; kA1 < (std::uint64_t{1} << gA); ++kA1) {
            cert.A = torus::dyadic_cube(gA, kA1, tab.ra >> gA, tab.ra & maskA);
            for (std::size_t ni = 0; ni < config.n_list.size(); ++ni) {
              const std::uint64_t n = config.n_list[ni];
              cert.n = n;
              EntryValues single;
              const EntryValues* e;
              if (n < gB) {
                Rational measure = 0;
                if (branch_compatible(cert.A, cert.B, n)) {
                  const unsigned z = prefix_zeros(kB1, gB, static_cast<unsigned>(n));
                  const BigInt area_den = (ctx.circ.Q[0] << gA) * (ctx.circ.Q[1] << gA);
                  measure = make_rational(tab.f_small[z], area_den << (n + gA));
                }
                Rational bound = Rational(BigInt(1), pow2(n)) * LA;
                single = finish_entry(ctx, ni, gA, gB, std::move(measure), std::move(bound), true);
                e = &single;
                cert.value_id = ++next_id;
              } else {
                e = &tab.by_n[ni][zB];
                cert.value_id = ids[ni];
              }
              cert.exact = e->exact;
              cert.exact_measure = e->measure;
              cert.binomial_bound = e->bound;
              cert.needed_C = e->needed;
              cert.product_dominates = e->dominated;
              ++summary.certificates;
              if (e->dominated) ++summary.product_dominated;
              if (!e->exact) ++summary.approximate;
              if (e->needed > summary.c_star) summary.c_star = e->needed;
              sink(cert);
            }
          }
        }
      }
    }
  }
  return summary;
}

bool mixing_inequality_holds(const MixingCertificate& cert, const Rational& C, const Rational& s) {
  const Rational LA = cert.A.volume();
  Rational excess = cert.exact_measure - cert.product_term;
  if (excess <= 0) return true;
  if (C <= 0) return false;
  // excess <= C n^-s L_A  <=>  n^s <= C L_A / excess.
  return compare_power(Rational(BigInt(static_cast<unsigned long>(cert.n))), s, C * LA / excess) <= 0;
}

namespace {

// 1 inside, 0 outside, -1 undecided at this truncation.
int guarded_member(const cfrac::AlphaPair& alpha, const Rect2& R, std::uint64_t k) {
  Rational kr(BigInt(static_cast<unsigned long>(k)));
  bool inside = true;
  for (std::size_t c = 0; c < 2; ++c) {
    if (R.half[c] * 2 >= 1) continue;
    Rational d = circle_distance(kr * alpha.value[c], R.center[c]);
    Rational e = kr * alpha.radius[c];
    if (d - e > R.half[c]) return 0;
    if (d + e > R.half[c]) inside = false;
  }
  return inside ? 1 : -1;
}

}  // namespace

SensitivityReport indicator_sensitivity(const cfrac::AlphaPair& fine, const cfrac::AlphaPair& coarse,
                                        unsigned max_gen, std::uint64_t max_k) {
  SensitivityReport rep;
  for (unsigned gB = 0; gB <= max_gen; ++gB) {
    for (unsigned gA = gB; gA <= max_gen; ++gA) {
      const std::uint64_t sideA = std::uint64_t{1} << gA;
      const std::uint64_t sideB = std::uint64_t{1} << gB;
      for (std::uint64_t ra = 0; ra < sideA * sideA; ++ra) {
        for (std::uint64_t rb = 0; rb < sideB * sideB; ++rb) {
          DyadicCube3 A = torus::dyadic_cube(gA, 0, ra / sideA, ra % sideA);
          // kB1 = all ones gives zB = 0, so the square is centered at a - b.
          DyadicCube3 B = torus::dyadic_cube(gB, sideB - 1, rb / sideB, rb % sideB);
          Rect2 R = enlarged_target(fine, A, B);
          for (std::uint64_t k = 0; k <= max_k; ++k) {
            int a = guarded_member(fine, R, k);
            int b = guarded_member(coarse, R, k);
            ++rep.checked;
            if (a < 0 || b < 0) {
              ++rep.ambiguous;
            } else if (a != b) {
              ++rep.mismatches;
            }
          }
        }
      }
    }
  }
  return rep;
}

}  // namespace skewlab::skewprod
