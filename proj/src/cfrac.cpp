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

#include "skewlab/cfrac.hpp"

#include <cmath>
#include <cstdlib>
#include <limits>

#include "skewlab/fixed_point.hpp"
#include "skewlab/parallel.hpp"

namespace skewlab::cfrac {

const BigInt& ContinuedFraction::quotient(std::size_t n) const {
  if (n == 0 || n > depth()) throw Error("quotient level out of range");
  return quotients_[n - 1];
}

const BigInt& ContinuedFraction::p(long n) const {
  if (n < -1 || n > static_cast<long>(depth())) throw Error("convergent level out of range");
  return p_[static_cast<std::size_t>(n + 1)];
}

const BigInt& ContinuedFraction::q(long n) const {
  if (n < -1 || n > static_cast<long>(depth())) throw Error("convergent level out of range");
  return q_[static_cast<std::size_t>(n + 1)];
}

Rational ContinuedFraction::convergent(std::size_t n) const {
  Rational r(p(static_cast<long>(n)), q(static_cast<long>(n)));
  r.canonicalize();
  return r;
}

ContinuedFraction convergents(std::span<const BigInt> quotients) {
  if (quotients.empty()) throw Error("no quotients");
  ContinuedFraction cf;
  cf.quotients_.assign(quotients.begin(), quotients.end());
  cf.p_ = {BigInt(1), BigInt(0)};
  cf.q_ = {BigInt(0), BigInt(1)};
  for (const BigInt& a : quotients) {
    if (a < 1) throw Error("invalid quotient");
    std::size_t last = cf.p_.size() - 1;
    cf.p_.push_back(a * cf.p_[last] + cf.p_[last - 1]);
    cf.q_.push_back(a * cf.q_[last] + cf.q_[last - 1]);
  }
  return cf;
}

GapBound approximation_gap(const ContinuedFraction& cf, std::size_t n) {
  if (n == 0 || n + 1 > cf.depth()) throw Error("insufficient depth");
  Rational gap = abs(cf.value() - cf.convergent(n));
  Rational bound(BigInt(1), cf.q(static_cast<long>(n)) * cf.q(static_cast<long>(n) + 1));
  bound.canonicalize();
  return {gap, bound};
}

AlphaPair AlphaPair::at_level(std::size_t level) const {
  if (cf1.depth() == 0) throw Error("alpha has no continued-fraction data");
  if (level == 0 || level > depth) throw Error("insufficient depth");
  if (level == depth) return *this;
  AlphaPair out = *this;
  out.value = {cf1.convergent(level), cf2.convergent(level)};
  const long l = static_cast<long>(level);
  out.radius = {Rational(BigInt(1), cf1.q(l) * cf1.q(l + 1)), Rational(BigInt(1), cf2.q(l) * cf2.q(l + 1))};
  out.radius[0].canonicalize();
  out.radius[1].canonicalize();
  return out;
}

AlphaPair make_alpha_pair(std::span<const BigInt> quotients1, std::span<const BigInt> quotients2) {
  if (quotients1.size() != quotients2.size()) throw Error("quotient lists differ in length");
  AlphaPair alpha;
  alpha.cf1 = convergents(quotients1);
  alpha.cf2 = convergents(quotients2);
  alpha.depth = quotients1.size();
  alpha.value = {alpha.cf1.value(), alpha.cf2.value()};
  const long m = static_cast<long>(alpha.depth);
  const BigInt& qm = alpha.cf1.q(m);
  const BigInt& qpm = alpha.cf2.q(m);
  BigInt next_q_lower = big_pow(qpm, 4);
  BigInt next_qp_lower = big_pow(next_q_lower, 4);
  alpha.radius = {Rational(BigInt(1), qm * next_q_lower), Rational(BigInt(1), qpm * next_qp_lower)};
  alpha.radius[0].canonicalize();
  alpha.radius[1].canonicalize();
  return alpha;
}

AlphaPair make_rational_alpha(const Rational& v1, const Rational& v2, const Rational& r1, const Rational& r2) {
  AlphaPair alpha;
  alpha.value = {frac(v1), frac(v2)};
  alpha.radius = {r1, r2};
  return alpha;
}

namespace {

// Smallest admissible quotient landing q_n = a q_{n-1} + q_{n-2} in [lo, hi].
BigInt greedy_quotient(const BigInt& lo, const BigInt& hi, const BigInt& q_prev, const BigInt& q_prev2,
                       std::size_t level) {
  BigInt need = lo - q_prev2;
  BigInt a;
  mpz_cdiv_q(a.get_mpz_t(), need.get_mpz_t(), q_prev.get_mpz_t());
  if (a < 1) a = 1;
  BigInt qn = a * q_prev + q_prev2;
  if (qn < lo || qn > hi) throw Error("synthesis infeasible at level " + std::to_string(level));
  return a;
}

}  // namespace

AlphaPair synthesize_alpha_pair(std::size_t target_depth, std::optional<BigInt> seed_a1) {
  if (target_depth == 0) throw Error("target depth must be positive");
  std::vector<BigInt> a1;
  std::vector<BigInt> a2;
  // Running q-sequences with seeds q_{-1} = 0, q_0 = 1.
  std::vector<BigInt> q1{BigInt(0), BigInt(1)};
  std::vector<BigInt> q2{BigInt(0), BigInt(1)};
  for (std::size_t n = 1; n <= target_depth; ++n) {
    // q_n in [q'_{n-1}^4, 4 q'_{n-1}^4].
    BigInt lo = big_pow(q2.back(), 4);
    BigInt hi = 4 * lo;
    BigInt a;
    if (n == 1 && seed_a1) {
      a = *seed_a1;
      BigInt qn = a * q1.back() + q1[q1.size() - 2];
      if (a < 1 || qn < lo || qn > hi) throw Error("synthesis infeasible at level 1");
    } else if (n == 1) {
      a = 2;
    } else {
      a = greedy_quotient(lo, hi, q1.back(), q1[q1.size() - 2], n);
    }
    a1.push_back(a);
    q1.push_back(a * q1.back() + q1[q1.size() - 2]);

    // q'_n in [q_n^4, 4 q_n^4].
    lo = big_pow(q1.back(), 4);
    hi = 4 * lo;
    BigInt b = greedy_quotient(lo, hi, q2.back(), q2[q2.size() - 2], n);
    a2.push_back(b);
    q2.push_back(b * q2.back() + q2[q2.size() - 2]);
  }
  AlphaPair alpha = make_alpha_pair(a1, a2);
  if (auto failure = check_windows(alpha)) throw Error("synthesis infeasible: " + *failure);
  return alpha;
}

std::optional<std::string> check_windows(const AlphaPair& alpha) {
  if (alpha.cf1.depth() != alpha.depth || alpha.cf2.depth() != alpha.depth) {
    return std::string("continued fractions do not match the declared depth");
  }
  // Independent recomputation of the q-sequences.
  auto qs = [](const std::vector<BigInt>& a) {
    std::vector<BigInt> q{BigInt(0), BigInt(1)};
    for (const BigInt& x : a) q.push_back(x * q.back() + q[q.size() - 2]);
    return q;  // q[n + 1] is level n
  };
  std::vector<BigInt> q = qs(alpha.cf1.quotients());
  std::vector<BigInt> qp = qs(alpha.cf2.quotients());
  auto level = [](std::size_t n) { return " at level " + std::to_string(n); };
  for (std::size_t n = 1; n <= alpha.depth; ++n) {
    const BigInt& qn = q[n + 1];
    const BigInt& qpn = qp[n + 1];
    const BigInt& qp_prev = qp[n];
    BigInt qn4 = big_pow(qn, 4);
    if (qpn < qn4) return "q'_n < q_n^4" + level(n);
    if (qpn > 4 * qn4) return "q'_n > 4 q_n^4" + level(n);
    BigInt qpp4 = big_pow(qp_prev, 4);
    if (qn < qpp4) return "q_n < q'_{n-1}^4" + level(n);
    if (qn > 4 * qpp4) return "q_n > 4 q'_{n-1}^4" + level(n);
    if (n + 1 <= alpha.depth) {
      BigInt qn16 = big_pow(qn, 16);
      BigInt qpn16 = big_pow(qpn, 16);
      if (q[n + 2] < qn16 || q[n + 2] > 16 * qn16) return "q_{n+1} outside [q_n^16, 16 q_n^16]" + level(n);
      if (qp[n + 2] < qpn16 || qp[n + 2] > 16 * qpn16) return "q'_{n+1} outside [q'_n^16, 16 q'_n^16]" + level(n);
    }
  }
  return std::nullopt;
}

namespace {

double exponent_of(const Rational& distance, std::int64_t norm) {
  if (distance == 0) return std::numeric_limits<double>::infinity();
  if (norm < 2) return 0.0;
  return -log2_of(distance) / std::log2(static_cast<double>(norm));
}

std::int64_t sup_norm(std::array<std::int64_t, 2> k) { return std::max(std::llabs(k[0]), std::llabs(k[1])); }

}  // namespace

ProbeRecord probe_vector(const AlphaPair& alpha, std::array<std::int64_t, 2> k) {
  if (k[0] == 0 && k[1] == 0) throw Error("zero vector excluded");
  Rational x = alpha.value[0] * Rational(k[0]) + alpha.value[1] * Rational(k[1]);
  Rational d = circle_distance(x, Rational(0));
  return {k, d, exponent_of(d, sup_norm(k)), d == 0};
}

namespace {

struct ShellBest {
  u128 distance = ~u128{0};
  std::array<std::int64_t, 2> k{0, 0};
  bool found = false;
};

void offer(ShellBest& best, u128 d, std::array<std::int64_t, 2> k) {
  // Ties go to the lexicographically smallest (k2, k1), which keeps merges order-independent.
  if (!best.found || d < best.distance ||
      (d == best.distance && std::pair(k[1], k[0]) < std::pair(best.k[1], best.k[0]))) {
    best.distance = d;
    best.k = k;
    best.found = true;
  }
}

}  // namespace

LinearTypeProbe linear_type_scan(const AlphaPair& alpha, std::uint64_t K, double trial_gamma, unsigned threads) {
  if (K == 0) throw Error("scan bound must be positive");
  if (K > (std::uint64_t{1} << 40)) throw Error("scan bound too large");
  // Truncation of alpha moves k . alpha by at most K (r1 + r2).
  Rational trunc = Rational(static_cast<unsigned long>(K)) * (alpha.radius[0] + alpha.radius[1]);
  Rational guard = 1 / rational_pow(Rational(2 * static_cast<unsigned long>(K)), 20);
  if (trunc >= guard) throw Error("truncation too coarse for K");

  const u128 a1 = fixed_floor_128(alpha.value[0]);
  const u128 a2 = fixed_floor_128(alpha.value[1]);
  // Fixed-point rounding contributes at most 2K units of 2^-128; a value this
  // close to an integer is rechecked exactly.
  const u128 suspect_below = static_cast<u128>(4) * K + 4;
  const auto kk = static_cast<std::int64_t>(K);

  struct Partial {
    std::vector<ShellBest> shells;
    std::vector<std::array<std::int64_t, 2>> suspects;
  };
  const std::size_t rows = K + 1;  // k2 = 0..K
  std::vector<Partial> partials(rows);
  parallel_for(rows, threads, [&](std::size_t row) {
    const auto k2 = static_cast<std::int64_t>(row);
    Partial part;
    part.shells.resize(K + 1);
    const std::int64_t k1_begin = k2 == 0 ? 1 : -kk;
    u128 u = static_cast<u128>(k2) * a2 + static_cast<u128>(k1_begin) * a1;
    for (std::int64_t k1 = k1_begin; k1 <= kk; ++k1, u += a1) {
      u128 d = u <= (u128{0} - u) ? u : u128{0} - u;
      if (d < suspect_below) {
        part.suspects.push_back({k1, k2});
        continue;
      }
      auto shell = static_cast<std::size_t>(std::max<std::int64_t>(std::llabs(k1), k2));
      offer(part.shells[shell], d, {k1, k2});
    }
    // Keep only what the merge needs.
    partials[row] = std::move(part);
  });

  std::vector<ShellBest> shells(K + 1);
  std::vector<std::array<std::int64_t, 2>> suspects;
  for (auto& part : partials) {
    for (std::size_t s = 1; s <= K; ++s) {
      if (part.shells[s].found) offer(shells[s], part.shells[s].distance, part.shells[s].k);
    }
    suspects.insert(suspects.end(), part.suspects.begin(), part.suspects.end());
    part.shells.clear();
    part.shells.shrink_to_fit();
  }

  LinearTypeProbe probe;
  probe.bound = K;
  probe.trial_gamma = trial_gamma;

  // Exact minimum per shell: the fixed-point winner, compared against any
  // suspects that fall in the same shell.
  std::vector<std::optional<ProbeRecord>> exact(K + 1);
  for (std::size_t s = 1; s <= K; ++s) {
    if (shells[s].found) exact[s] = probe_vector(alpha, shells[s].k);
  }
  for (const auto& k : suspects) {
    ProbeRecord rec = probe_vector(alpha, k);
    if (rec.degenerate) {
      ++probe.degenerate_count;
      continue;
    }
    auto s = static_cast<std::size_t>(sup_norm(k));
    if (!exact[s] || rec.distance < exact[s]->distance) exact[s] = rec;
  }

  double running = std::numeric_limits<double>::infinity();
  for (std::size_t s = 1; s <= K; ++s) {
    if (!exact[s]) continue;
    const ProbeRecord& rec = *exact[s];
    double scaled = log2_of(rec.distance) + trial_gamma * std::log2(static_cast<double>(s));
    if (scaled < running) {
      running = scaled;
      probe.records.push_back(rec);
    }
    if (s >= 2 && rec.exponent > probe.max_exponent) {
      probe.max_exponent = rec.exponent;
      probe.argmax = rec.k;
    }
  }
  return probe;
}

}  // namespace skewlab::cfrac
