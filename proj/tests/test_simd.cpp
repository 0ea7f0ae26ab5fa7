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

#include <algorithm>
#include <cstdlib>
#include <string_view>
#include <limits>
#include <random>
#include <vector>

#include "skewlab/simd/kernels.hpp"

using namespace skewlab::simd;

namespace {

struct Grid {
  std::size_t rows;
  std::size_t cols;
  std::vector<std::int64_t> w;       // row-major weights
  std::vector<std::int64_t> prefix;  // column-major prefix, stride rows + 1
};

Grid random_grid(std::mt19937_64& rng, std::size_t rows, std::size_t cols, std::int64_t span) {
  Grid g{rows, cols, std::vector<std::int64_t>(rows * cols), std::vector<std::int64_t>((rows + 1) * cols, 0)};
  for (auto& v : g.w) v = static_cast<std::int64_t>(rng() % static_cast<std::uint64_t>(2 * span + 1)) - span;
  for (std::size_t c = 0; c < cols; ++c) {
    for (std::size_t r = 0; r < rows; ++r) {
      g.prefix[c * (rows + 1) + r + 1] = g.prefix[c * (rows + 1) + r] + g.w[r * cols + c];
    }
  }
  return g;
}

// Direct enumeration of every rectangle [b, top) x [c0, c1].
SlabExtrema brute_slab(const Grid& g, std::size_t top) {
  SlabExtrema out{std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::min()};
  for (std::size_t b = 0; b < top; ++b) {
    for (std::size_t c0 = 0; c0 < g.cols; ++c0) {
      std::int64_t sum = 0;
      for (std::size_t c1 = c0; c1 < g.cols; ++c1) {
        for (std::size_t r = b; r < top; ++r) sum += g.w[r * g.cols + c1];
        out.over = std::max(out.over, sum);
        out.under = std::max(out.under, -sum);
      }
    }
  }
  return out;
}

}  // namespace

TEST_CASE("isa names and dispatch override") {
  CHECK(isa_name(Isa::scalar) == "scalar");
  CHECK(isa_name(Isa::avx2) == "avx2");
  force_isa(Isa::scalar);
  CHECK(active_isa() == Isa::scalar);
  CHECK(slab_extrema_fn() == &scalar::slab_extrema);
  CHECK(hit_filter_fn() == &scalar::hit_filter);
  force_isa(std::nullopt);
  const char* env = std::getenv("SKEWLAB_SIMD");
  const bool forced_scalar = env != nullptr && std::string_view(env) == "scalar";
  if (avx2_available() && !forced_scalar) CHECK(active_isa() == Isa::avx2);
}

TEST_CASE("scalar slab kernel matches rectangle enumeration") {
  std::mt19937_64 rng(3);
  std::vector<std::int64_t> scratch;
  for (int trial = 0; trial < 60; ++trial) {
    std::size_t rows = 1 + rng() % 12;
    std::size_t cols = 1 + rng() % 12;
    Grid g = random_grid(rng, rows, cols, 50);
    scratch.assign(4 * rows, 0);
    for (std::size_t top = 1; top <= rows; ++top) {
      SlabExtrema got = scalar::slab_extrema(g.prefix.data(), rows, cols, top, scratch.data());
      SlabExtrema want = brute_slab(g, top);
      CHECK(got.over == want.over);
      CHECK(got.under == want.under);
    }
  }
}

TEST_CASE("avx2 slab kernel equals the scalar reference") {
  if (!avx2_available()) return;
  std::mt19937_64 rng(4);
  std::vector<std::int64_t> s1;
  std::vector<std::int64_t> s2;
  for (int trial = 0; trial < 200; ++trial) {
    // Odd sizes exercise the vector tails.
    std::size_t rows = 1 + rng() % 37;
    std::size_t cols = 1 + rng() % 29;
    std::int64_t span = trial % 2 == 0 ? 5 : (std::int64_t{1} << 40);
    Grid g = random_grid(rng, rows, cols, span);
    s1.assign(4 * rows, 0);
    s2.assign(4 * rows, 0);
    for (std::size_t top = 1; top <= rows; ++top) {
      SlabExtrema a = scalar::slab_extrema(g.prefix.data(), rows, cols, top, s1.data());
      SlabExtrema b = avx2::slab_extrema(g.prefix.data(), rows, cols, top, s2.data());
      CHECK(a.over == b.over);
      CHECK(a.under == b.under);
    }
  }
}

TEST_CASE("hit filter: scalar semantics and avx2 equivalence") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 100; ++trial) {
    std::size_t count = rng() % 70;
    std::vector<std::uint64_t> dx(count), d1(count), d2(count), thr(count);
    for (std::size_t i = 0; i < count; ++i) {
      // Mix of small offsets on both sides of 0 and arbitrary values.
      auto pick = [&]() -> std::uint64_t {
        switch (rng() % 4) {
          case 0: return rng() % 1000;
          case 1: return 0 - (rng() % 1000);
          case 2: return std::uint64_t{1} << 63;
          default: return rng();
        }
      };
      dx[i] = pick();
      d1[i] = pick();
      d2[i] = pick();
      thr[i] = rng() % 3 == 0 ? rng() : rng() % 1200;
    }
    std::vector<std::uint8_t> fs(count, 7), fv(count, 7);
    std::size_t ns = scalar::hit_filter(dx.data(), d1.data(), d2.data(), thr.data(), count, fs.data());
    std::size_t expected = 0;
    for (std::size_t i = 0; i < count; ++i) {
      auto circ = [](std::uint64_t v) { return std::min(v, 0 - v); };
      bool hit = circ(dx[i]) <= thr[i] && circ(d1[i]) <= thr[i] && circ(d2[i]) <= thr[i];
      CHECK(fs[i] == (hit ? 1 : 0));
      expected += hit;
    }
    CHECK(ns == expected);
    if (avx2_available()) {
      std::size_t nv = avx2::hit_filter(dx.data(), d1.data(), d2.data(), thr.data(), count, fv.data());
      CHECK(nv == ns);
      CHECK(fv == fs);
    }
  }
}
