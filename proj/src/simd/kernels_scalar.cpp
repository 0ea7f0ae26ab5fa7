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

#include <algorithm>
#include <limits>

#include "skewlab/simd/kernels.hpp"

namespace skewlab::simd::scalar {

SlabExtrema slab_extrema(const std::int64_t* prefix, std::size_t rows, std::size_t cols, std::size_t top,
                         std::int64_t* scratch) {
  constexpr std::int64_t kMin = std::numeric_limits<std::int64_t>::min();
  std::int64_t* run_over = scratch;
  std::int64_t* run_under = scratch + rows;
  std::int64_t* best_over = scratch + 2 * rows;
  std::int64_t* best_under = scratch + 3 * rows;
  std::fill(run_over, run_over + top, 0);
  std::fill(run_under, run_under + top, 0);
  std::fill(best_over, best_over + top, kMin);
  std::fill(best_under, best_under + top, kMin);

  const std::size_t stride = rows + 1;
  for (std::size_t c = 0; c < cols; ++c) {
    const std::int64_t* col = prefix + c * stride;
    const std::int64_t t = col[top];
    for (std::size_t b = 0; b < top; ++b) {
      const std::int64_t s = t - col[b];
      const std::int64_t o = s + std::max<std::int64_t>(run_over[b], 0);
      const std::int64_t u = -s + std::max<std::int64_t>(run_under[b], 0);
      run_over[b] = o;
      run_under[b] = u;
      best_over[b] = std::max(best_over[b], o);
      best_under[b] = std::max(best_under[b], u);
    }
  }
  SlabExtrema out{kMin, kMin};
  for (std::size_t b = 0; b < top; ++b) {
    out.over = std::max(out.over, best_over[b]);
    out.under = std::max(out.under, best_under[b]);
  }
  return out;
}

std::size_t hit_filter(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                       const std::uint64_t* thr, std::size_t count, std::uint8_t* flags) {
  std::size_t marked = 0;
  for (std::size_t i = 0; i < count; ++i) {
    const std::uint64_t a = std::min(dx[i], 0 - dx[i]);
    const std::uint64_t b = std::min(d1[i], 0 - d1[i]);
    const std::uint64_t c = std::min(d2[i], 0 - d2[i]);
    const bool hit = std::max({a, b, c}) <= thr[i];
    flags[i] = hit ? 1 : 0;
    marked += hit;
  }
  return marked;
}

}  // namespace skewlab::simd::scalar
