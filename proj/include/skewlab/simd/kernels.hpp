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

// Data-parallel inner loops. Every kernel has a scalar reference version and
// an AVX2 version with identical results; `dispatch()` picks one at runtime.

#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string_view>

namespace skewlab::simd {

enum class Isa { scalar, avx2 };

std::string_view isa_name(Isa isa);

/// True when the CPU and the build both support AVX2.
bool avx2_available();

/// ISA used by the dispatching entry points. Defaults to the best available;
/// SKEWLAB_SIMD=scalar in the environment forces the reference path.
Isa active_isa();

/// Overrides the runtime choice (tests). nullopt restores the default.
void force_isa(std::optional<Isa> isa);

struct SlabExtrema {
  std::int64_t over;   // max over slabs [b, top) x [c0, c1] of the weight sum
  std::int64_t under;  // max of the negated sum
};

/// Max-sum rectangles whose last row is top - 1. `prefix` is a column-major
/// prefix table with stride rows + 1: prefix[c * (rows + 1) + r] is the sum
/// of rows [0, r) in column c. `scratch` must hold 4 * rows values.
/// Requires 1 <= top <= rows and cols >= 1.
using SlabFn = SlabExtrema (*)(const std::int64_t* prefix, std::size_t rows, std::size_t cols, std::size_t top,
                               std::int64_t* scratch);

/// Marks flags[i] = 1 when max(circ(dx[i]), circ(d1[i]), circ(d2[i])) <= thr[i],
/// where circ(v) = min(v, -v) as unsigned 64-bit fixed-point distances.
/// Returns the number of marked entries.
using HitFilterFn = std::size_t (*)(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                                    const std::uint64_t* thr, std::size_t count, std::uint8_t* flags);

namespace scalar {
SlabExtrema slab_extrema(const std::int64_t* prefix, std::size_t rows, std::size_t cols, std::size_t top,
                         std::int64_t* scratch);
std::size_t hit_filter(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                       const std::uint64_t* thr, std::size_t count, std::uint8_t* flags);
}  // namespace scalar

namespace avx2 {
SlabExtrema slab_extrema(const std::int64_t* prefix, std::size_t rows, std::size_t cols, std::size_t top,
                         std::int64_t* scratch);
std::size_t hit_filter(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                       const std::uint64_t* thr, std::size_t count, std::uint8_t* flags);
}  // namespace avx2

SlabFn slab_extrema_fn();
HitFilterFn hit_filter_fn();

}  // namespace skewlab::simd
