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

#include <cstddef>
#include <cstdint>
#include <functional>
#include <vector>

#include "skewlab/cfrac.hpp"
#include "skewlab/torus.hpp"

namespace skewlab::skewprod {

using torus::DyadicCube3;
using torus::Rect2;
using torus::TorusPoint2;
using torus::TorusPoint3;

/// State whose base coordinate is a finite binary expansion read lazily.
struct BitState {
  std::vector<std::uint8_t> bits;  // binary digits of x, most significant first
  std::size_t offset = 0;          // digits already shifted out
  TorusPoint2 fiber;

  std::size_t available() const { return bits.size() - offset; }
};

/// S(x, t) = (2x, t + alpha 1[x < 1/2]) with alpha at its stored truncation.
class SkewSystem {
 public:
  explicit SkewSystem(cfrac::AlphaPair alpha) : alpha_(std::move(alpha)) {}

  const cfrac::AlphaPair& alpha() const { return alpha_; }

  TorusPoint3 step(const TorusPoint3& state) const;
  TorusPoint3 iterate(const TorusPoint3& state, std::uint64_t n) const;

  /// Error: "insufficient entropy bits" when n exceeds the unread digits.
  BitState iterate(const BitState& state, std::uint64_t n) const;

 private:
  cfrac::AlphaPair alpha_;
};

/// Number of k in [0, n) with frac(2^k x) < 1/2.
std::uint64_t zero_count(const Rational& x, std::uint64_t n);

/// Exact Lebesgue measure of S^-n(A) n B for the truncated system.
/// Error: "cube order" unless generation(A) >= generation(B).
Rational preimage_measure_exact(const cfrac::AlphaPair& alpha, const DyadicCube3& A, const DyadicCube3& B,
                                std::uint64_t n);

/// The enlarged square used by the binomial bound: center a - b - zB alpha
/// (a, b the centers of R_A and R_B), half-side 3/2 |R_B|, clipped.
Rect2 enlarged_target(const cfrac::AlphaPair& alpha, const DyadicCube3& A, const DyadicCube3& B);

struct BinomialIndicatorSum {
  BigInt S;         // sum_k 1[k alpha in R] C(m, k)
  Rational sigma2;  // area(R) 2^m
  Rational sigma1;  // S - sigma2
};

/// m = n - nB. Error: "n must exceed n_B".
BinomialIndicatorSum binomial_indicator_sum(std::uint64_t n, std::uint64_t nB, const Rect2& R,
                                            const cfrac::AlphaPair& alpha);

struct MixingCertificate {
  DyadicCube3 A;
  DyadicCube3 B;
  std::uint64_t n = 0;
  bool exact = true;            // false for log-domain values beyond kExactHorizon
  Rational exact_measure;       // L3(S^-n A n B)
  Rational product_term;        // 9 L3(A) L3(B)
  Rational needed_C;            // upper bound on the least admissible C
  Rational binomial_bound;   // binomial indicator bound
  bool product_dominates = false;
  std::size_t truncation_level = 0;
  /// Changes whenever the numeric fields change; equal ids carry equal values.
  std::uint64_t value_id = 0;
};

/// Iterates above this are evaluated in the log domain and marked inexact.
inline constexpr std::uint64_t kExactHorizon = 200;

struct ScanConfig {
  unsigned max_gen = 2;
  std::vector<std::uint64_t> n_list;
  Rational s{1, 17};
  unsigned threads = 1;
};

struct ScanSummary {
  Rational c_star;                  // max needed_C over the scan
  std::uint64_t certificates = 0;
  std::uint64_t product_dominated = 0;
  std::uint64_t approximate = 0;
};

using CertificateSink = std::function<void(const MixingCertificate&)>;

/// Certificates for every A, B with generation(B) <= generation(A) <= max_gen
/// and every n in the list, emitted in key order (gB, idxB, gA, idxA, n).
/// Errors: "empty scan", "s must lie in (0, 1]".
ScanSummary mixing_scan(const cfrac::AlphaPair& alpha, const ScanConfig& config, const CertificateSink& sink);

/// True when exact_measure <= product_term + C n^-s L3(A), decided exactly.
bool mixing_inequality_holds(const MixingCertificate& cert, const Rational& C, const Rational& s);

struct SensitivityReport {
  std::uint64_t checked = 0;
  std::uint64_t mismatches = 0;
  std::uint64_t ambiguous = 0;  // membership too close to the boundary to decide
};

/// Compares the enlarged-square indicators k alpha in R between two
/// truncations of alpha, for every pair of cube squares up to max_gen and
/// k <= max_k. Each side is decided with its own truncation radius.
SensitivityReport indicator_sensitivity(const cfrac::AlphaPair& fine, const cfrac::AlphaPair& coarse,
                                        unsigned max_gen, std::uint64_t max_k);

}  // namespace skewlab::skewprod
