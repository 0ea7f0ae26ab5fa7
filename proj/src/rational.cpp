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

#include "skewlab/rational.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

namespace skewlab {

namespace {

bool is_digits(std::string_view s) {
  return !s.empty() && std::all_of(s.begin(), s.end(),
                                   [](unsigned char c) { return std::isdigit(c) != 0; });
}

BigInt parse_integer(std::string_view s) {
  std::string_view body = s;
  bool negative = false;
  if (!body.empty() && (body.front() == '-' || body.front() == '+')) {
    negative = body.front() == '-';
    body.remove_prefix(1);
  }
  if (!is_digits(body)) throw Error("invalid rational: '" + std::string(s) + "'");
  BigInt v(std::string(body), 10);
  return negative ? BigInt(-v) : v;
}

// Number of significant bits, 0 for zero.
long bit_length(const BigInt& v) {
  if (v == 0) return 0;
  return static_cast<long>(mpz_sizeinbase(v.get_mpz_t(), 2));
}

}  // namespace

Rational parse_rational(std::string_view text) {
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.front()))) text.remove_prefix(1);
  while (!text.empty() && std::isspace(static_cast<unsigned char>(text.back()))) text.remove_suffix(1);
  if (text.empty()) throw Error("invalid rational: empty string");

  if (auto slash = text.find('/'); slash != std::string_view::npos) {
    BigInt num = parse_integer(text.substr(0, slash));
    std::string_view den_text = text.substr(slash + 1);
    if (!is_digits(den_text)) throw Error("invalid rational: '" + std::string(text) + "'");
    BigInt den(std::string(den_text), 10);
    if (den == 0) throw Error("invalid rational: zero denominator");
    Rational r(num, den);
    r.canonicalize();
    return r;
  }
  if (auto dot = text.find('.'); dot != std::string_view::npos) {
    std::string_view int_part = text.substr(0, dot);
    std::string_view frac_part = text.substr(dot + 1);
    bool negative = !int_part.empty() && int_part.front() == '-';
    if (!int_part.empty() && (int_part.front() == '-' || int_part.front() == '+')) int_part.remove_prefix(1);
    if ((int_part.empty() && frac_part.empty()) || (!int_part.empty() && !is_digits(int_part)) ||
        (!frac_part.empty() && !is_digits(frac_part))) {
      throw Error("invalid rational: '" + std::string(text) + "'");
    }
    std::string digits = std::string(int_part) + std::string(frac_part);
    BigInt num(digits.empty() ? std::string("0") : digits, 10);
    BigInt den;
    mpz_ui_pow_ui(den.get_mpz_t(), 10, frac_part.size());
    Rational r(negative ? BigInt(-num) : num, den);
    r.canonicalize();
    return r;
  }
  return Rational(parse_integer(text));
}

std::string to_string(const Rational& value) {
  return value.get_num().get_str() + "/" + value.get_den().get_str();
}

std::string to_string(const BigInt& value) { return value.get_str(); }

BigInt floor_of(const Rational& value) {
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

BigInt ceil_of(const Rational& value) {
  BigInt q;
  mpz_cdiv_q(q.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  return q;
}

Rational frac(const Rational& value) {
  BigInt r;
  mpz_fdiv_r(r.get_mpz_t(), value.get_num_mpz_t(), value.get_den_mpz_t());
  Rational out(r, value.get_den());
  out.canonicalize();
  return out;
}

Rational circle_distance(const Rational& a, const Rational& b) {
  Rational d = frac(a - b);
  Rational other = 1 - d;
  return d <= other ? d : other;
}

BigInt pow2(unsigned long exponent) {
  BigInt v;
  mpz_ui_pow_ui(v.get_mpz_t(), 2, exponent);
  return v;
}

BigInt big_pow(const BigInt& base, unsigned long exponent) {
  BigInt v;
  mpz_pow_ui(v.get_mpz_t(), base.get_mpz_t(), exponent);
  return v;
}

Rational rational_pow(const Rational& base, unsigned long exponent) {
  Rational out(big_pow(base.get_num(), exponent), big_pow(base.get_den(), exponent));
  out.canonicalize();
  return out;
}

BigInt floor_root(const BigInt& value, unsigned long r) {
  if (value < 0) throw Error("root of a negative integer");
  if (r == 0) throw Error("zeroth root");
  BigInt out;
  mpz_root(out.get_mpz_t(), value.get_mpz_t(), r);
  return out;
}

BigInt ceil_root(const BigInt& value, unsigned long r) {
  if (value < 0) throw Error("root of a negative integer");
  if (r == 0) throw Error("zeroth root");
  BigInt out;
  int exact = mpz_root(out.get_mpz_t(), value.get_mpz_t(), r);
  if (!exact) out += 1;
  return out;
}

BigInt ceil_rational_power(const BigInt& value, unsigned long num, unsigned long den) {
  return ceil_root(big_pow(value, num), den);
}

namespace {

// Chooses a scale exponent k so that x^(1/r) * 2^k has roughly `bits` bits.
long root_scale(const Rational& x, unsigned long r, unsigned bits) {
  long lg = bit_length(x.get_num()) - bit_length(x.get_den());
  long e = lg >= 0 ? lg / static_cast<long>(r) : -((-lg + static_cast<long>(r) - 1) / static_cast<long>(r));
  return static_cast<long>(bits) + 2 - e;
}

Rational scaled(const BigInt& m, long k) {
  if (k >= 0) {
    Rational out(m, pow2(static_cast<unsigned long>(k)));
    out.canonicalize();
    return out;
  }
  return Rational(m * pow2(static_cast<unsigned long>(-k)));
}

}  // namespace

Rational root_upper(const Rational& x, unsigned long r, unsigned bits) {
  if (x < 0) throw Error("root of a negative rational");
  if (x == 0) return Rational(0);
  if (r == 1) return x;
  long k = root_scale(x, r, bits);
  // (x * 2^(r k))^(1/r) = x^(1/r) * 2^k.
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  if (k >= 0) {
    num *= pow2(static_cast<unsigned long>(k) * r);
  } else {
    den *= pow2(static_cast<unsigned long>(-k) * r);
  }
  BigInt c;
  mpz_cdiv_q(c.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return scaled(ceil_root(c, r), k);
}

Rational root_lower(const Rational& x, unsigned long r, unsigned bits) {
  if (x < 0) throw Error("root of a negative rational");
  if (x == 0) return Rational(0);
  if (r == 1) return x;
  long k = root_scale(x, r, bits);
  BigInt num = x.get_num();
  BigInt den = x.get_den();
  if (k >= 0) {
    num *= pow2(static_cast<unsigned long>(k) * r);
  } else {
    den *= pow2(static_cast<unsigned long>(-k) * r);
  }
  BigInt f;
  mpz_fdiv_q(f.get_mpz_t(), num.get_mpz_t(), den.get_mpz_t());
  return scaled(floor_root(f, r), k);
}

namespace {

// Splits a rational exponent into (|numerator|, denominator, sign).
struct ExponentParts {
  unsigned long num;
  unsigned long den;
  bool negative;
};

ExponentParts split_exponent(const Rational& exponent) {
  BigInt num = abs(exponent.get_num());
  if (!num.fits_ulong_p() || !exponent.get_den().fits_ulong_p()) {
    throw Error("exponent too large");
  }
  return {num.get_ui(), exponent.get_den().get_ui(), exponent < 0};
}

}  // namespace

Rational pow_upper(const Rational& base, const Rational& exponent, unsigned bits) {
  if (base <= 0) throw Error("power of a nonpositive base");
  ExponentParts e = split_exponent(exponent);
  Rational powered = rational_pow(base, e.num);
  if (e.negative) powered = 1 / powered;
  return root_upper(powered, e.den, bits);
}

Rational pow_lower(const Rational& base, const Rational& exponent, unsigned bits) {
  if (base <= 0) throw Error("power of a nonpositive base");
  ExponentParts e = split_exponent(exponent);
  Rational powered = rational_pow(base, e.num);
  if (e.negative) powered = 1 / powered;
  return root_lower(powered, e.den, bits);
}

int compare_power(const Rational& base, const Rational& exponent, const Rational& bound) {
  if (base <= 0 || bound <= 0) throw Error("compare_power needs positive operands");
  ExponentParts e = split_exponent(exponent);
  // base^(a/b) vs bound  <=>  base^a vs bound^b.
  Rational lhs = rational_pow(base, e.num);
  if (e.negative) lhs = 1 / lhs;
  Rational rhs = rational_pow(bound, e.den);
  int c = cmp(lhs, rhs);
  return (c > 0) - (c < 0);
}

double log2_of(const Rational& value) {
  if (value <= 0) throw Error("log of a nonpositive value");
  long en = 0;
  long ed = 0;
  double mn = mpz_get_d_2exp(&en, value.get_num_mpz_t());
  double md = mpz_get_d_2exp(&ed, value.get_den_mpz_t());
  return std::log2(mn) - std::log2(md) + static_cast<double>(en - ed);
}

std::uint64_t to_u64(const BigInt& value) {
  if (value < 0 || mpz_sizeinbase(value.get_mpz_t(), 2) > 64) throw Error("value does not fit in 64 bits");
  std::uint64_t out = 0;
  mpz_export(&out, nullptr, -1, sizeof(out), 0, 0, value.get_mpz_t());
  return out;
}

}  // namespace skewlab
