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

#include <random>

#include "oracles/branch_oracle.hpp"
#include "skewlab/skewprod.hpp"

using namespace skewlab;
using namespace skewlab::skewprod;
using torus::dyadic_cube;
using torus::dyadic_cube_from_index;

namespace {

const cfrac::AlphaPair& alpha3() {
  static const cfrac::AlphaPair a = cfrac::synthesize_alpha_pair(3);
  return a;
}

std::uint64_t cube_count(unsigned g) { return std::uint64_t{1} << (3 * g); }

BigInt choose(unsigned long m, unsigned long k) {
  BigInt out;
  mpz_bin_uiui(out.get_mpz_t(), m, k);
  return out;
}

}  // namespace

TEST_CASE("step follows the half-open branch rule") {
  SkewSystem sys(alpha3());
  const auto& a = alpha3().value;
  TorusPoint3 p = sys.step(TorusPoint3({Rational(0), Rational(1, 5), Rational(2, 5)}));
  CHECK(p == TorusPoint3({Rational(0), Rational(1, 5) + a[0], Rational(2, 5) + a[1]}));
  TorusPoint3 q = sys.step(TorusPoint3({Rational(1, 2), Rational(1, 5), Rational(2, 5)}));
  CHECK(q == TorusPoint3({Rational(0), Rational(1, 5), Rational(2, 5)}));

  TorusPoint3 start({Rational(1, 3), Rational(0), Rational(0)});
  TorusPoint3 two = sys.iterate(start, 2);
  CHECK(two == TorusPoint3({Rational(1, 3), a[0], a[1]}));
  CHECK(two == sys.step(sys.step(start)));

  std::mt19937_64 rng(8);
  for (int i = 0; i < 30; ++i) {
    TorusPoint3 s({Rational(BigInt(static_cast<unsigned long>(rng() % 997)), BigInt(997)), Rational(1, 7), Rational(3, 7)});
    TorusPoint3 walk = s;
    const std::uint64_t n = rng() % 40;
    for (std::uint64_t k = 0; k < n; ++k) walk = sys.step(walk);
    CHECK(sys.iterate(s, n) == walk);
  }
}

TEST_CASE("bitstream iteration tracks the fiber exactly") {
  SkewSystem sys(alpha3());
  BitState st{{0, 1, 1, 0, 0}, 0, TorusPoint2({Rational(0), Rational(0)})};
  BitState out = sys.iterate(st, 4);
  CHECK(out.offset == 4);
  CHECK(out.fiber == TorusPoint2({2 * alpha3().value[0], 2 * alpha3().value[1]}));
  CHECK(out.available() == 1);
  CHECK_THROWS_WITH_AS(sys.iterate(out, 2), "insufficient entropy bits", Error);
  // x = 0.01100b = 3/8 gives the same zero count.
  CHECK(zero_count(Rational(3, 8), 4) == 2);
}

TEST_CASE("preimage measure: trivial cases and cube order") {
  const auto whole = dyadic_cube(0, 0, 0, 0);
  for (std::uint64_t n : {0, 1, 5, 40}) CHECK(preimage_measure_exact(alpha3(), whole, whole, n) == 1);
  const auto c = dyadic_cube(2, 1, 3, 2);
  CHECK(preimage_measure_exact(alpha3(), c, c, 0) == c.volume());
  CHECK_THROWS_WITH_AS(preimage_measure_exact(alpha3(), whole, c, 3), "cube order", Error);
}

TEST_CASE("preimage measure equals the branch oracle at g = 2, n = 6") {
  oracle::BranchOracle orc(alpha3());
  for (std::uint64_t ia = 0; ia < cube_count(2); ia += 3) {
    for (std::uint64_t ib = 0; ib < cube_count(2); ib += 5) {
      const auto A = dyadic_cube_from_index(2, ia);
      const auto B = dyadic_cube_from_index(2, ib);
      CHECK(preimage_measure_exact(alpha3(), A, B, 6) == orc.measure(A, B, 6));
    }
  }
}

TEST_CASE("preimage measure equals the branch oracle on a random sample") {
  oracle::BranchOracle orc(alpha3());
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 400; ++trial) {
    const unsigned gB = static_cast<unsigned>(rng() % 4);
    const unsigned gA = gB + static_cast<unsigned>(rng() % (4 - gB));
    const auto A = dyadic_cube_from_index(gA, rng() % cube_count(gA));
    const auto B = dyadic_cube_from_index(gB, rng() % cube_count(gB));
    const unsigned n = static_cast<unsigned>(rng() % 13);
    const Rational m = preimage_measure_exact(alpha3(), A, B, n);
    CHECK(m == orc.measure(A, B, n));
    CHECK(m <= A.volume());
    CHECK(m <= B.volume());
    if (n <= gB) CHECK(m <= A.volume() / Rational(pow2(n)));
  }
}

TEST_CASE("preimage measure is measure preserving") {
  std::mt19937_64 rng(4);
  for (unsigned gB = 0; gB <= 2; ++gB) {
    for (unsigned g = gB; g <= 2; ++g) {
      const auto B = dyadic_cube_from_index(gB, rng() % cube_count(gB));
      for (std::uint64_t n : {0, 1, 3, 7, 10}) {
        Rational sum = 0;
        for (std::uint64_t i = 0; i < cube_count(g); ++i) {
          sum += preimage_measure_exact(alpha3(), dyadic_cube_from_index(g, i), B, n);
        }
        CHECK(sum == B.volume());
      }
    }
  }
}

TEST_CASE("binomial indicator sum: whole torus and direct summation") {
  const Rect2 whole = Rect2::make(TorusPoint2({Rational(1, 2), Rational(1, 2)}), Rational(1, 2), Rational(1, 2));
  for (std::uint64_t n : {3, 10, 30}) {
    auto r = binomial_indicator_sum(n, 2, whole, alpha3());
    CHECK(r.S == pow2(n - 2));
    CHECK(r.sigma2 == Rational(pow2(n - 2)));
    CHECK(r.sigma1 == 0);
  }
  CHECK_THROWS_WITH_AS(binomial_indicator_sum(2, 2, whole, alpha3()), "n must exceed n_B", Error);

  // m = 8, area 1/4: nine explicit indicator tests.
  const Rect2 quarter = Rect2::make(TorusPoint2({Rational(1, 3), Rational(2, 3)}), Rational(1, 4), Rational(1, 4));
  auto r = binomial_indicator_sum(11, 3, quarter, alpha3());
  BigInt direct = 0;
  for (unsigned long k = 0; k <= 8; ++k) {
    const Rational kk{BigInt(k)};
    if (quarter.contains(TorusPoint2({kk * alpha3().value[0], kk * alpha3().value[1]}))) direct += choose(8, k);
  }
  CHECK(r.S == direct);
  CHECK(r.sigma2 == Rational(1, 4) * 256);
  CHECK(r.sigma1 == Rational(direct) - r.sigma2);
}

TEST_CASE("sigma2 identity on random rectangles") {
  std::mt19937_64 rng(12);
  for (int i = 0; i < 100; ++i) {
    const std::uint64_t nB = rng() % 4;
    const std::uint64_t n = nB + 1 + rng() % 40;
    auto pick = [&](unsigned long den) { return Rational(BigInt(static_cast<unsigned long>(rng() % den)), BigInt(den)); };
    Rational h0 = Rational(BigInt(1 + rng() % 50), BigInt(100));
    Rational h1 = Rational(BigInt(1 + rng() % 50), BigInt(100));
    const Rect2 R = Rect2::make(TorusPoint2({pick(977), pick(983)}), h0, h1);
    auto r = binomial_indicator_sum(n, nB, R, alpha3());
    CHECK(r.sigma2 == R.area() * Rational(pow2(n - nB)));
    CHECK(r.sigma1 == Rational(r.S) - r.sigma2);
  }
}

TEST_CASE("mixing scan certificates are consistent and thread independent") {
  ScanConfig cfg;
  cfg.max_gen = 1;
  cfg.n_list = {2, 3, 8, 20};
  std::vector<MixingCertificate> one;
  std::vector<MixingCertificate> four;
  ScanSummary s1 = mixing_scan(alpha3(), cfg, [&](const MixingCertificate& c) { one.push_back(c); });
  cfg.threads = 4;
  ScanSummary s4 = mixing_scan(alpha3(), cfg, [&](const MixingCertificate& c) { four.push_back(c); });
  CHECK(s1.c_star == s4.c_star);
  CHECK(s1.certificates == one.size());
  // Pairs with gB <= gA <= 1: 1 * 9 + 8 * 8 = 73, times 4 iterates.
  CHECK(one.size() == 73 * 4);
  REQUIRE(one.size() == four.size());
  Rational c_max = 0;
  for (std::size_t i = 0; i < one.size(); ++i) {
    const auto& c = one[i];
    CHECK(c.A == four[i].A);
    CHECK(c.B == four[i].B);
    CHECK(c.n == four[i].n);
    CHECK(c.exact_measure == four[i].exact_measure);
    CHECK(c.exact);
    CHECK(c.exact_measure == preimage_measure_exact(alpha3(), c.A, c.B, c.n));
    CHECK(c.exact_measure <= c.binomial_bound);
    CHECK(c.product_term == 9 * c.A.volume() * c.B.volume());
    CHECK(c.needed_C >= 0);
    CHECK(mixing_inequality_holds(c, s1.c_star, cfg.s));
    CHECK(mixing_inequality_holds(c, c.needed_C, cfg.s));
    if (c.A.g == 0 && c.B.g == 0) CHECK(c.needed_C == 0);
    c_max = std::max(c_max, c.needed_C);
  }
  CHECK(c_max == s1.c_star);
}

TEST_CASE("mixing scan errors") {
  ScanConfig cfg;
  CHECK_THROWS_WITH_AS(mixing_scan(alpha3(), cfg, [](const MixingCertificate&) {}), "empty scan", Error);
  cfg.n_list = {4};
  cfg.s = Rational(3, 2);
  CHECK_THROWS_WITH_AS(mixing_scan(alpha3(), cfg, [](const MixingCertificate&) {}), "s must lie in (0, 1]", Error);
}

TEST_CASE("indicator sensitivity between depth 3 and depth 2") {
  auto coarse = alpha3().at_level(2);
  SensitivityReport r = indicator_sensitivity(alpha3(), coarse, 1, 64);
  CHECK(r.checked > 0);
  CHECK(r.mismatches == 0);
}
