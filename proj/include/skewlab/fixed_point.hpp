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

#include <cstdint>

#include "skewlab/rational.hpp"

namespace skewlab {

using u128 = unsigned __int128;
using i128 = __int128;

inline BigInt from_u128(u128 v) {
  BigInt hi(static_cast<unsigned long>(static_cast<std::uint64_t>(v >> 64)));
  BigInt lo(static_cast<unsigned long>(static_cast<std::uint64_t>(v)));
  return (hi << 64) + lo;
}

/// Value must satisfy 0 <= v < 2^128.
inline u128 to_u128(const BigInt& v) {
  if (v < 0 || mpz_sizeinbase(v.get_mpz_t(), 2) > 128) throw Error("value does not fit in 128 bits");
  BigInt hi = v >> 64;
  BigInt lo = v - (hi << 64);
  return (static_cast<u128>(to_u64(hi)) << 64) | to_u64(lo);
}

/// floor(frac(x) * 2^128), the 128-bit fixed-point image of x mod 1.
inline u128 fixed_floor_128(const Rational& x) {
  Rational f = frac(x);
  BigInt scaled = f.get_num() << 128;
  BigInt q;
  mpz_fdiv_q(q.get_mpz_t(), scaled.get_mpz_t(), f.get_den_mpz_t());
  return to_u128(q);
}

/// Exact value of a 128-bit fixed-point number.
inline Rational fixed_value_128(u128 v) {
  Rational r(from_u128(v), pow2(128));
  r.canonicalize();
  return r;
}

}  // namespace skewlab
