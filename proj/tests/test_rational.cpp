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

#include "skewlab/rational.hpp"

using namespace skewlab;

TEST_CASE("parse_rational accepts fractions, integers and decimals") {
  CHECK(parse_rational("3/4") == Rational(3, 4));
  CHECK(parse_rational("-6/8") == Rational(-3, 4));
  CHECK(parse_rational(" 5 ") == Rational(5));
  CHECK(parse_rational("0.125") == Rational(1, 8));
  CHECK(parse_rational("-1.5") == Rational(-3, 2));
  CHECK(parse_rational("123456789012345678901234567890/3") ==
        Rational(BigInt("41152263004115226300411522630")));
}

TEST_CASE("parse_rational rejects malformed text") {
  CHECK_THROWS_WITH_AS(parse_rational("1/0"), "invalid rational: zero denominator", Error);
  CHECK_THROWS_AS(parse_rational(""), Error);
  CHECK_THROWS_AS(parse_rational("abc"), Error);
  CHECK_THROWS_AS(parse_rational("1/-2"), Error);
  CHECK_THROWS_AS(parse_rational("1.2.3"), Error);
}

TEST_CASE("to_string round-trips through parse_rational") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 200; ++i) {
    Rational r(BigInt(static_cast<long>(rng() % 2000001) - 1000000), BigInt(static_cast<unsigned long>(rng() % 1000 + 1)));
    r.canonicalize();
    CHECK(parse_rational(to_string(r)) == r);
  }
  CHECK(to_string(parse_rational("6/4")) == "3/2");
  CHECK(to_string(Rational(0)) == "0/1");
}

TEST_CASE("floor, ceil and fractional part") {
  CHECK(floor_of(Rational(-7, 2)) == -4);
  CHECK(ceil_of(Rational(-7, 2)) == -3);
  CHECK(floor_of(Rational(6)) == 6);
  CHECK(ceil_of(Rational(6)) == 6);
  CHECK(frac(Rational(-1, 3)) == Rational(2, 3));
  CHECK(frac(Rational(7, 3)) == Rational(1, 3));
  CHECK(circle_distance(Rational(1, 10), Rational(9, 10)) == Rational(1, 5));
  CHECK(circle_distance(Rational(0), Rational(1, 2)) == Rational(1, 2));
}

TEST_CASE("integer roots bracket the true root") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 500; ++i) {
    BigInt v(static_cast<unsigned long>(rng() >> 8));
    unsigned long r = 2 + rng() % 5;
    BigInt lo = floor_root(v, r);
    BigInt hi = ceil_root(v, r);
    CHECK(big_pow(lo, r) <= v);
    CHECK(big_pow(lo + 1, r) > v);
    CHECK(big_pow(hi, r) >= v);
    CHECK((hi == lo || hi == lo + 1));
  }
  CHECK(ceil_root(BigInt(27), 3) == 3);
  CHECK(ceil_root(BigInt(28), 3) == 4);
  CHECK_THROWS_AS(floor_root(BigInt(-1), 2), Error);
}

TEST_CASE("ceil_rational_power is the least integer above the power") {
  CHECK(ceil_rational_power(BigInt(32), 13, 5) == 8192);
  CHECK(ceil_rational_power(BigInt(2), 1, 2) == 2);
  CHECK(ceil_rational_power(BigInt(10), 3, 1) == 1000);
  // 33^(13/5) is irrational; compare with the integer inequality directly.
  BigInt c = ceil_rational_power(BigInt(33), 13, 5);
  CHECK(big_pow(c, 5) >= big_pow(BigInt(33), 13));
  CHECK(big_pow(c - 1, 5) < big_pow(BigInt(33), 13));
}

TEST_CASE("directed roots and powers bracket the exact value") {
  std::mt19937_64 rng(17);
  for (int i = 0; i < 100; ++i) {
    Rational x(BigInt(static_cast<unsigned long>(rng() % 100000 + 1)), BigInt(static_cast<unsigned long>(rng() % 100000 + 1)));
    x.canonicalize();
    unsigned long r = 2 + rng() % 6;
    Rational up = root_upper(x, r);
    Rational lo = root_lower(x, r);
    CHECK(rational_pow(up, r) >= x);
    CHECK(rational_pow(lo, r) <= x);
    CHECK(up - lo <= up / Rational(BigInt(1), pow2(1)) * Rational(BigInt(1), pow2(50)) * 4);

    Rational e(BigInt(static_cast<long>(rng() % 41) - 20), BigInt(static_cast<unsigned long>(rng() % 19 + 1)));
    e.canonicalize();
    Rational pu = pow_upper(x, e);
    Rational pl = pow_lower(x, e);
    CHECK(compare_power(x, e, pu) <= 0);
    CHECK(compare_power(x, e, pl) >= 0);
  }
}

TEST_CASE("compare_power decides exact comparisons") {
  CHECK(compare_power(Rational(8), Rational(1, 3), Rational(2)) == 0);
  CHECK(compare_power(Rational(9), Rational(1, 3), Rational(2)) > 0);
  CHECK(compare_power(Rational(7), Rational(1, 3), Rational(2)) < 0);
  CHECK(compare_power(Rational(4), Rational(-1, 2), Rational(1, 2)) == 0);
  CHECK_THROWS_AS(compare_power(Rational(0), Rational(1), Rational(1)), Error);
}

TEST_CASE("to_u64 and log2_of") {
  CHECK(to_u64(BigInt(12345)) == 12345u);
  CHECK_THROWS_AS(to_u64(pow2(64)), Error);
  CHECK(log2_of(Rational(1, 1024)) == doctest::Approx(-10.0));
}
