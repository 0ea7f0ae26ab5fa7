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

#include <atomic>
#include <cstdlib>
#include <string>

#include "skewlab/simd/kernels.hpp"

namespace skewlab::simd {

namespace {

// -1 means no override.
std::atomic<int> g_forced{-1};

Isa default_isa() {
  static const Isa isa = [] {
    if (const char* env = std::getenv("SKEWLAB_SIMD"); env != nullptr && std::string(env) == "scalar") {
      return Isa::scalar;
    }
    return avx2_available() ? Isa::avx2 : Isa::scalar;
  }();
  return isa;
}

}  // namespace

std::string_view isa_name(Isa isa) { return isa == Isa::avx2 ? "avx2" : "scalar"; }

bool avx2_available() {
#if defined(__x86_64__) || defined(__i386__)
  static const bool ok = __builtin_cpu_supports("avx2") != 0;
  return ok;
#else
  return false;
#endif
}

Isa active_isa() {
  int forced = g_forced.load();
  if (forced >= 0) return static_cast<Isa>(forced);
  return default_isa();
}

void force_isa(std::optional<Isa> isa) {
  if (isa && *isa == Isa::avx2 && !avx2_available()) isa = Isa::scalar;
  g_forced.store(isa ? static_cast<int>(*isa) : -1);
}

SlabFn slab_extrema_fn() { return active_isa() == Isa::avx2 ? &avx2::slab_extrema : &scalar::slab_extrema; }

HitFilterFn hit_filter_fn() { return active_isa() == Isa::avx2 ? &avx2::hit_filter : &scalar::hit_filter; }

}  // namespace skewlab::simd
