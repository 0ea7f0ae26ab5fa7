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

#include <gmpxx.h>

#include <cstdint>
#include <stdexcept>
#include <string>
#include <string_view>

namespace skewlab {

using BigInt = mpz_class;
using Rational = mpq_class;

/// Base class for every error raised by the library. Messages are stable
/// strings that callers (and tests) may match on.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Raised when a guarded comparison cannot be decided at the current
/// truncation of alpha.
class IndeterminateError : public Error {
 public:
  using Error::Error;
};

/// Parses "p/q", "p" or a plain decimal such as "0.125" into an exact value.
Rational parse_rational(std::string_view text);

/// Canonical "p/q" form; the denominator is always printed.
std::string to_string(const Rational& value);
std::string to_string(const BigInt& value);

BigInt floor_of(const Rational& value);
BigInt ceil_of(const Rational& value);

/// Representative of value mod 1 in [0, 1).
Rational frac(const Rational& value);

/// Distance on the circle R/Z.
Rational circle_distance(const Rational& a, const Rational& b);

BigInt pow2(unsigned long exponent);
BigInt big_pow(const BigInt& base, unsigned long exponent);
Rational rational_pow(const Rational& base, unsigned long exponent);

/// Integer r-th roots, r >= 1, of a nonnegative integer.
BigInt floor_root(const BigInt& value, unsigned long r);
BigInt ceil_root(const BigInt& value, unsigned long r);

/// ceil(value^(num/den)) for a nonnegative integer value and num, den >= 1.
BigInt ceil_rational_power(const BigInt& value, unsigned long num, unsigned long den);

/// Directed-rounding bounds on x^(1/r) for rational x > 0. The result
/// carries at least `bits` significant bits.
Rational root_upper(const Rational& x, unsigned long r, unsigned bits = 64);
Rational root_lower(const Rational& x, unsigned long r, unsigned bits = 64);

/// Directed-rounding bounds on base^exponent for rational base > 0 and any
/// rational exponent.
Rational pow_upper(const Rational& base, const Rational& exponent, unsigned bits = 64);
Rational pow_lower(const Rational& base, const Rational& exponent, unsigned bits = 64);

/// Exact comparison of base^exponent against a bound: returns -1, 0, 1 as
/// base^exponent is below, equal to, or above `bound`. base > 0, bound > 0.
int compare_power(const Rational& base, const Rational& exponent, const Rational& bound);

/// log2 of a positive rational, to double precision.
double log2_of(const Rational& value);

std::uint64_t to_u64(const BigInt& value);

}  // namespace skewlab
