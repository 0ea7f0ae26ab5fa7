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

#include <doctest.h>

#include <chrono>
#include <cmath>
#include <random>

#include "skewlab/cfrac.hpp"

using namespace skewlab;
using namespace skewlab::cfrac;

namespace {

std::vector<BigInt> ints(std::initializer_list<long> xs) {
  std::vector<BigInt> out;
  for (long x : xs) out.emplace_back(x);
  return out;
}

// Value of 1/(a1 + 1/(a2 + ...)) by backward evaluation, independent of the recursion.
Rational backward_value(const std::vector<BigInt>& a) {
  Rational x = 0;
  for (auto it = a.rbegin(); it != a.rend(); ++it) x = 1 / (Rational(*it) + x);
  return x;
}

}  // namespace

TEST_CASE("convergents of the pi fractional part") {
  auto cf = convergents(ints({7, 15, 1, 292}));
  CHECK(cf.convergent(1) == Rational(1, 7));
  CHECK(cf.convergent(2) == Rational(15, 106));
  CHECK(cf.convergent(3) == Rational(16, 113));
  CHECK(cf.convergent(4) == Rational(4687, 33102));
  // 3 + 16/113 = 355/113.
  CHECK(3 + cf.convergent(3) == Rational(355, 113));
}

TEST_CASE("convergents of (3, 7, 15, 1) and the first gap bound") {
  auto cf = convergents(ints({3, 7, 15, 1}));
  CHECK(cf.convergent(1) == Rational(1, 3));
  CHECK(cf.convergent(2) == Rational(7, 22));
  CHECK(cf.convergent(3) == Rational(106, 333));
  CHECK(cf.convergent(4) == Rational(113, 355));
  auto gap = approximation_gap(cf, 1);
  CHECK(gap.bound == Rational(1, 66));
  CHECK(gap.gap <= gap.bound);
  CHECK_THROWS_WITH_AS(approximation_gap(cf, 4), "insufficient depth", Error);
}

TEST_CASE("convergents reject bad input") {
  CHECK_THROWS_WITH_AS(convergents(std::vector<BigInt>{}), "no quotients", Error);
  CHECK_THROWS_WITH_AS(convergents(ints({2, 0})), "invalid quotient", Error);
}

TEST_CASE("recursion, coprimality and the determinant identity") {
  std::mt19937_64 rng(2026);
  for (int trial = 0; trial < 200; ++trial) {
    std::size_t len = 1 + rng() % 30;
    std::vector<BigInt> a;
    for (std::size_t i = 0; i < len; ++i) a.emplace_back(static_cast<unsigned long>(1 + rng() % 1000000));
    auto cf = convergents(a);
    CHECK(cf.value() == backward_value(a));
    for (long n = 1; n <= static_cast<long>(len); ++n) {
      BigInt g;
      mpz_gcd(g.get_mpz_t(), cf.p(n).get_mpz_t(), cf.q(n).get_mpz_t());
      CHECK(g == 1);
      BigInt det = cf.p(n) * cf.q(n - 1) - cf.p(n - 1) * cf.q(n);
      CHECK(det == (n % 2 == 1 ? 1 : -1));
    }
    for (std::size_t n = 1; n < len; ++n) {
      Rational diff = abs(cf.convergent(n) - cf.convergent(n + 1));
      CHECK(diff == Rational(BigInt(1), cf.q(static_cast<long>(n)) * cf.q(static_cast<long>(n) + 1)));
      if (n + 1 < len) {
        // Alternation: consecutive convergents straddle the deepest value.
        CHECK(sgn(cf.convergent(n) - cf.value()) == -sgn(cf.convergent(n + 1) - cf.value()));
      }
    }
  }
}

TEST_CASE("synthesis produces the expected first levels") {
  AlphaPair a = synthesize_alpha_pair(2);
  CHECK(a.cf1.q(1) == 2);
  CHECK(a.cf2.q(1) == 16);
  CHECK(a.cf1.q(2) == 65537);
  CHECK(a.cf2.q(2) >= big_pow(BigInt(65537), 4));
  CHECK(a.cf2.q(2) <= 4 * big_pow(BigInt(65537), 4));
  CHECK(a.value[0] == Rational(32768, 65537));
  CHECK_FALSE(check_windows(a).has_value());
}

TEST_CASE("depth-4 synthesis is fast and passes the independent checker") {
  auto start = std::chrono::steady_clock::now();
  AlphaPair a = synthesize_alpha_pair(4);
  double seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  CHECK(seconds < 10.0);
  CHECK(a.depth == 4);
  CHECK_FALSE(check_windows(a).has_value());
  // Radii are valid bounds for the levels below the depth.
  for (std::size_t level = 1; level < 4; ++level) {
    AlphaPair low = a.at_level(level);
    CHECK(abs(low.value[0] - a.value[0]) <= low.radius[0]);
    CHECK(abs(low.value[1] - a.value[1]) <= low.radius[1]);
  }
}

TEST_CASE("synthesis seeds and failures") {
  AlphaPair a = synthesize_alpha_pair(2, BigInt(3));
  CHECK(a.cf1.q(1) == 3);
  CHECK_FALSE(check_windows(a).has_value());
  CHECK_THROWS_WITH_AS(synthesize_alpha_pair(2, BigInt(5)), "synthesis infeasible at level 1", Error);
  CHECK_THROWS_AS(synthesize_alpha_pair(0), Error);
}

TEST_CASE("the checker flags a tampered pair") {
  AlphaPair good = synthesize_alpha_pair(2);
  std::vector<BigInt> a1 = good.cf1.quotients();
  std::vector<BigInt> a2 = good.cf2.quotients();
  a2[1] *= 5;  // q'_2 leaves its window
  auto bad = make_alpha_pair(a1, a2);
  auto msg = check_windows(bad);
  REQUIRE(msg.has_value());
  CHECK(msg->find("level 2") != std::string::npos);
  a2 = good.cf2.quotients();
  a1[1] -= 1;  // q_2 drops below q'_1^4 = q_1^16
  msg = check_windows(make_alpha_pair(a1, a2));
  REQUIRE(msg.has_value());
  CHECK(*msg == "q_{n+1} outside [q_n^16, 16 q_n^16] at level 1");
}

TEST_CASE("probe_vector is exact") {
  AlphaPair a = synthesize_alpha_pair(3);
  // 2 alpha_1 = 65536/65537 + O(radius), distance 1/65537 at the truncation.
  ProbeRecord r = probe_vector(a, {2, 0});
  CHECK(r.distance == abs(2 * a.value[0] - 1));
  CHECK_FALSE(r.degenerate);
  CHECK(r.exponent == doctest::Approx(std::log2(65537.0)).epsilon(1e-6));
  CHECK_THROWS_AS(probe_vector(a, {0, 0}), Error);
}

TEST_CASE("linear-type scan matches brute force and is thread independent") {
  AlphaPair a = synthesize_alpha_pair(3);
  const std::uint64_t K = 40;
  LinearTypeProbe one = linear_type_scan(a, K, 16.0, 1);
  LinearTypeProbe four = linear_type_scan(a, K, 16.0, 4);
  CHECK(one.max_exponent == four.max_exponent);
  CHECK(one.argmax == four.argmax);
  REQUIRE(one.records.size() == four.records.size());
  for (std::size_t i = 0; i < one.records.size(); ++i) CHECK(one.records[i].k == four.records[i].k);

  double best = 0.0;
  for (long k2 = 0; k2 <= static_cast<long>(K); ++k2) {
    for (long k1 = -static_cast<long>(K); k1 <= static_cast<long>(K); ++k1) {
      if (k2 == 0 && k1 <= 0) continue;
      if (std::max(std::labs(k1), k2) < 2) continue;
      ProbeRecord r = probe_vector(a, {k1, k2});
      if (!r.degenerate) best = std::max(best, r.exponent);
    }
  }
  CHECK(one.max_exponent == doctest::Approx(best));
  CHECK(one.max_exponent >= 16.0);
}

TEST_CASE("linear-type scan guards against a coarse truncation") {
  AlphaPair a = synthesize_alpha_pair(1);
  CHECK_THROWS_WITH_AS(linear_type_scan(a, 1000), "truncation too coarse for K", Error);
}
