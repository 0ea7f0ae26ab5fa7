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

#if defined(__AVX2__)
#include <immintrin.h>
#endif

namespace skewlab::simd::avx2 {

#if defined(__AVX2__)

namespace {

inline __m256i max_epi64(__m256i a, __m256i b) { return _mm256_blendv_epi8(a, b, _mm256_cmpgt_epi64(b, a)); }

inline __m256i gt_epu64(__m256i a, __m256i b) {
  const __m256i bias = _mm256_set1_epi64x(std::numeric_limits<std::int64_t>::min());
  return _mm256_cmpgt_epi64(_mm256_xor_si256(a, bias), _mm256_xor_si256(b, bias));
}

inline __m256i min_epu64(__m256i a, __m256i b) { return _mm256_blendv_epi8(a, b, gt_epu64(a, b)); }

inline __m256i circle_epu64(__m256i v) { return min_epu64(v, _mm256_sub_epi64(_mm256_setzero_si256(), v)); }

inline std::int64_t hmax(__m256i v) {
  alignas(32) std::int64_t lanes[4];
  _mm256_store_si256(reinterpret_cast<__m256i*>(lanes), v);
  return std::max({lanes[0], lanes[1], lanes[2], lanes[3]});
}

}  // namespace

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
  const std::size_t vec_end = top & ~std::size_t{3};
  const __m256i zero = _mm256_setzero_si256();
  for (std::size_t c = 0; c < cols; ++c) {
    const std::int64_t* col = prefix + c * stride;
    const std::int64_t t = col[top];
    const __m256i tv = _mm256_set1_epi64x(t);
    std::size_t b = 0;
    for (; b < vec_end; b += 4) {
      __m256i s = _mm256_sub_epi64(tv, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(col + b)));
      __m256i ro = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(run_over + b));
      __m256i ru = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(run_under + b));
      __m256i o = _mm256_add_epi64(s, max_epi64(ro, zero));
      __m256i u = _mm256_sub_epi64(max_epi64(ru, zero), s);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(run_over + b), o);
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(run_under + b), u);
      __m256i bo = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(best_over + b));
      __m256i bu = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(best_under + b));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(best_over + b), max_epi64(bo, o));
      _mm256_storeu_si256(reinterpret_cast<__m256i*>(best_under + b), max_epi64(bu, u));
    }
    for (; b < top; ++b) {
      const std::int64_t s = t - col[b];
      const std::int64_t o = s + std::max<std::int64_t>(run_over[b], 0);
      const std::int64_t u = -s + std::max<std::int64_t>(run_under[b], 0);
      run_over[b] = o;
      run_under[b] = u;
      best_over[b] = std::max(best_over[b], o);
      best_under[b] = std::max(best_under[b], u);
    }
  }
  __m256i mo = _mm256_set1_epi64x(kMin);
  __m256i mu = _mm256_set1_epi64x(kMin);
  std::size_t b = 0;
  for (; b < vec_end; b += 4) {
    mo = max_epi64(mo, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(best_over + b)));
    mu = max_epi64(mu, _mm256_loadu_si256(reinterpret_cast<const __m256i*>(best_under + b)));
  }
  SlabExtrema out{hmax(mo), hmax(mu)};
  for (; b < top; ++b) {
    out.over = std::max(out.over, best_over[b]);
    out.under = std::max(out.under, best_under[b]);
  }
  return out;
}

std::size_t hit_filter(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                       const std::uint64_t* thr, std::size_t count, std::uint8_t* flags) {
  std::size_t marked = 0;
  std::size_t i = 0;
  for (; i + 4 <= count; i += 4) {
    __m256i a = circle_epu64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(dx + i)));
    __m256i b = circle_epu64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(d1 + i)));
    __m256i c = circle_epu64(_mm256_loadu_si256(reinterpret_cast<const __m256i*>(d2 + i)));
    __m256i t = _mm256_loadu_si256(reinterpret_cast<const __m256i*>(thr + i));
    __m256i miss = _mm256_or_si256(_mm256_or_si256(gt_epu64(a, t), gt_epu64(b, t)), gt_epu64(c, t));
    int mask = _mm256_movemask_pd(_mm256_castsi256_pd(miss));
    for (int l = 0; l < 4; ++l) {
      const bool hit = ((mask >> l) & 1) == 0;
      flags[i + l] = hit ? 1 : 0;
      marked += hit;
    }
  }
  return marked + scalar::hit_filter(dx + i, d1 + i, d2 + i, thr + i, count - i, flags + i);
}

#else

SlabExtrema slab_extrema(const std::int64_t* prefix, std::size_t rows, std::size_t cols, std::size_t top,
                         std::int64_t* scratch) {
  return scalar::slab_extrema(prefix, rows, cols, top, scratch);
}

std::size_t hit_filter(const std::uint64_t* dx, const std::uint64_t* d1, const std::uint64_t* d2,
                       const std::uint64_t* thr, std::size_t count, std::uint8_t* flags) {
  return scalar::hit_filter(dx, d1, d2, thr, count, flags);
}

#endif

}  // namespace skewlab::simd::avx2
